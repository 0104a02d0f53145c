#include <car/detail/simplex.hpp>

#include <stdexcept>

namespace car::lp {

namespace {

class Tableau {
public:
    Tableau(std::vector<std::vector<Rat>> rows, std::vector<Rat> rhs, std::vector<int> basis)
        : rows_(std::move(rows)), rhs_(std::move(rhs)), basis_(std::move(basis)) {}

    int m() const { return static_cast<int>(rows_.size()); }
    int n() const { return rows_.empty() ? 0 : static_cast<int>(rows_[0].size()); }
    const std::vector<int>& basis() const { return basis_; }
    const Rat& rhs(int i) const { return rhs_[i]; }
    const Rat& at(int i, int j) const { return rows_[i][j]; }

    /// Reduced cost of column j under cost vector c.
    Rat reduced_cost(const std::vector<Rat>& c, int j) const {
        Rat z = c[j];
        for (int i = 0; i < m(); ++i)
            if (!c[basis_[i]].is_zero() && !rows_[i][j].is_zero()) z -= c[basis_[i]] * rows_[i][j];
        return z;
    }

    Rat objective(const std::vector<Rat>& c) const {
        Rat z(0);
        for (int i = 0; i < m(); ++i)
            if (!c[basis_[i]].is_zero()) z += c[basis_[i]] * rhs_[i];
        return z;
    }

    void pivot(int row, int col) {
        const Rat inv = Rat(1) / rows_[row][col];
        for (auto& v : rows_[row]) v *= inv;
        rhs_[row] *= inv;
        for (int i = 0; i < m(); ++i) {
            if (i == row || rows_[i][col].is_zero()) continue;
            const Rat f = rows_[i][col];
            for (int j = 0; j < n(); ++j)
                if (!rows_[row][j].is_zero()) rows_[i][j] -= f * rows_[row][j];
            rows_[i][col] = Rat(0);
            rhs_[i] -= f * rhs_[row];
        }
        basis_[row] = col;
    }

    /// Bland's rule iteration until optimal or unbounded. `allowed` masks the
    /// columns eligible to enter.
    Result::Status iterate(const std::vector<Rat>& c, const std::vector<bool>& allowed) {
        for (;;) {
            int enter = -1;
            for (int j = 0; j < n(); ++j) {
                if (!allowed[j]) continue;
                if (reduced_cost(c, j) < Rat(0)) {
                    enter = j;
                    break;
                }
            }
            if (enter < 0) return Result::Status::Optimal;

            int leave = -1;
            Rat best_ratio(0);
            for (int i = 0; i < m(); ++i) {
                if (rows_[i][enter] <= Rat(0)) continue;
                Rat ratio = rhs_[i] / rows_[i][enter];
                if (leave < 0 || ratio < best_ratio ||
                    (ratio == best_ratio && basis_[i] < basis_[leave])) {
                    leave = i;
                    best_ratio = ratio;
                }
            }
            if (leave < 0) return Result::Status::Unbounded;
            pivot(leave, enter);
        }
    }

private:
    std::vector<std::vector<Rat>> rows_;
    std::vector<Rat> rhs_;
    std::vector<int> basis_;
};

} // namespace

Result solve(const Problem& p) {
    const int m = static_cast<int>(p.a.size());
    const int n = static_cast<int>(p.c.size());
    for (const auto& row : p.a)
        if (static_cast<int>(row.size()) != n) throw std::invalid_argument("lp::solve: ragged matrix");
    if (static_cast<int>(p.b.size()) != m) throw std::invalid_argument("lp::solve: bad rhs size");

    // Phase 1 tableau: [A | I] with artificial basis; rows flipped so b >= 0.
    std::vector<std::vector<Rat>> rows(m, std::vector<Rat>(n + m, Rat(0)));
    std::vector<Rat> rhs(m);
    std::vector<int> basis(m);
    for (int i = 0; i < m; ++i) {
        const bool flip = p.b[i] < Rat(0);
        for (int j = 0; j < n; ++j) rows[i][j] = flip ? -p.a[i][j] : p.a[i][j];
        rhs[i] = flip ? -p.b[i] : p.b[i];
        rows[i][n + i] = Rat(1);
        basis[i] = n + i;
    }
    Tableau t(std::move(rows), std::move(rhs), std::move(basis));

    std::vector<Rat> phase1_cost(n + m, Rat(0));
    for (int j = n; j < n + m; ++j) phase1_cost[j] = Rat(1);
    std::vector<bool> all_cols(n + m, true);
    if (t.iterate(phase1_cost, all_cols) != Result::Status::Optimal)
        throw std::logic_error("lp::solve: phase 1 cannot be unbounded");
    if (t.objective(phase1_cost) > Rat(0)) return {Result::Status::Infeasible, Rat(0), {}};

    // Drive artificials out of the basis where possible; rows where no
    // original column is available are redundant and harmless to keep (the
    // artificial stays basic at value zero and never re-enters).
    std::vector<bool> original(n + m, false);
    for (int j = 0; j < n; ++j) original[j] = true;
    for (int i = 0; i < t.m(); ++i) {
        if (t.basis()[i] < n) continue;
        for (int j = 0; j < n; ++j)
            if (!t.at(i, j).is_zero()) {
                t.pivot(i, j);
                break;
            }
    }

    std::vector<Rat> phase2_cost(n + m, Rat(0));
    for (int j = 0; j < n; ++j) phase2_cost[j] = p.c[j];
    if (t.iterate(phase2_cost, original) == Result::Status::Unbounded)
        return {Result::Status::Unbounded, Rat(0), {}};

    std::vector<Rat> x(n, Rat(0));
    for (int i = 0; i < t.m(); ++i)
        if (t.basis()[i] < n) x[t.basis()[i]] = t.rhs(i);
    return {Result::Status::Optimal, t.objective(phase2_cost), std::move(x)};
}

} // namespace car::lp
