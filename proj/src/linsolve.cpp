#include <car/linsolve.hpp>

namespace car {

IncidenceMatrix::IncidenceMatrix(int rows, std::vector<std::uint32_t> column_masks)
    : rows_(rows), cols_(std::move(column_masks)) {
    if (rows < 1 || rows > 32) throw std::invalid_argument("IncidenceMatrix: rows must be in [1,32]");
    if (cols_.empty()) throw std::invalid_argument("IncidenceMatrix: no columns");
    const std::uint32_t full = (rows == 32) ? ~0u : ((1u << rows) - 1u);
    std::uint32_t row_union = 0;
    for (std::uint32_t c : cols_) {
        if (c == 0) throw std::invalid_argument("IncidenceMatrix: empty column");
        if (c & ~full) throw std::invalid_argument("IncidenceMatrix: column exceeds row count");
        row_union |= c;
    }
    if (row_union != full) throw std::invalid_argument("IncidenceMatrix: some row has no 1");
}

IncidenceMatrix incidence(const Cover& cover) {
    return IncidenceMatrix(cover.space().size(), cover.masks());
}

namespace linalg {

std::vector<std::vector<BigInt>> to_dense(const IncidenceMatrix& m, bool augment_ones) {
    std::vector<std::vector<BigInt>> a(m.rows());
    for (int i = 0; i < m.rows(); ++i) {
        a[i].resize(m.cols() + (augment_ones ? 1 : 0));
        for (int j = 0; j < m.cols(); ++j) a[i][j] = m.entry(i, j) ? 1 : 0;
        if (augment_ones) a[i][m.cols()] = 1;
    }
    return a;
}

Echelon eliminate(std::vector<std::vector<BigInt>> a, int pivot_cols, bool track_rowops) {
    Echelon e;
    const int n = static_cast<int>(a.size());
    const int total_cols = n == 0 ? 0 : static_cast<int>(a[0].size());
    std::vector<std::vector<BigInt>> ops;
    if (track_rowops) {
        ops.assign(n, std::vector<BigInt>(n, 0));
        for (int i = 0; i < n; ++i) ops[i][i] = 1;
    }

    BigInt prev = 1;
    int pr = 0; // next pivot row
    for (int col = 0; col < pivot_cols && pr < n; ++col) {
        int sel = -1;
        for (int r = pr; r < n; ++r)
            if (a[r][col] != 0) {
                sel = r;
                break;
            }
        if (sel < 0) continue;
        std::swap(a[pr], a[sel]);
        if (track_rowops) std::swap(ops[pr], ops[sel]);

        const BigInt pivot = a[pr][col];
        for (int i = pr + 1; i < n; ++i) {
            const BigInt factor = a[i][col];
            for (int j = 0; j < total_cols; ++j) {
                BigInt v = a[i][j] * pivot - factor * a[pr][j];
                BigInt q, rem;
                boost::multiprecision::divide_qr(v, prev, q, rem);
                if (rem != 0) throw std::logic_error("eliminate: inexact Bareiss division");
                a[i][j] = q;
            }
            if (track_rowops) {
                for (int j = 0; j < n; ++j) {
                    BigInt v = ops[i][j] * pivot - factor * ops[pr][j];
                    BigInt q, rem;
                    boost::multiprecision::divide_qr(v, prev, q, rem);
                    if (rem != 0) throw std::logic_error("eliminate: inexact Bareiss division (rowops)");
                    ops[i][j] = q;
                }
            }
        }
        prev = pivot;
        e.pivots.emplace_back(pr, col);
        ++pr;
    }

    e.rank = pr;
    e.a = std::move(a);
    e.rowops = std::move(ops);
    return e;
}

namespace {

/// Back substitution on an integer echelon form with rational output.
/// Coordinates of free columns are fixed by `fixed_free` (zero by default).
std::vector<Rat> back_substitute(const Echelon& e, int cols, int rhs_col,
                                 const std::vector<Rat>* fixed_free = nullptr) {
    std::vector<Rat> z(cols, Rat(0));
    std::vector<bool> is_pivot_col(cols, false);
    for (auto [r, c] : e.pivots) is_pivot_col[c] = true;
    if (fixed_free)
        for (int j = 0; j < cols; ++j)
            if (!is_pivot_col[j]) z[j] = (*fixed_free)[j];

    for (int k = static_cast<int>(e.pivots.size()) - 1; k >= 0; --k) {
        auto [r, c] = e.pivots[k];
        Rat acc = rhs_col >= 0 ? Rat(e.a[r][rhs_col]) : Rat(0);
        for (int j = c + 1; j < cols; ++j)
            if (e.a[r][j] != 0) acc -= Rat(e.a[r][j]) * z[j];
        z[c] = acc / Rat(e.a[r][c]);
    }
    return z;
}

} // namespace

std::optional<std::vector<Rat>> null_direction(const IncidenceMatrix& m) {
    Echelon e = eliminate(to_dense(m, false), m.cols(), false);
    if (e.rank == m.cols()) return std::nullopt;

    std::vector<bool> is_pivot_col(m.cols(), false);
    for (auto [r, c] : e.pivots) is_pivot_col[c] = true;
    int free_col = 0;
    while (is_pivot_col[free_col]) ++free_col;

    // Fix the first free column to 1, the rest to 0; pivot coordinates follow
    // from the homogeneous equations. Row operations preserve the null space.
    std::vector<Rat> fixed(m.cols(), Rat(0));
    fixed[free_col] = Rat(1);
    return back_substitute(e, m.cols(), -1, &fixed);
}

} // namespace linalg

SolveOutcome solve_ones(const IncidenceMatrix& m) {
    using namespace linalg;
    Echelon e = eliminate(to_dense(m, true), m.cols(), false);
    const int rhs = m.cols();

    for (int r = e.rank; r < m.rows(); ++r)
        if (e.a[r][rhs] != 0) return Infeasible{};

    if (e.rank == m.cols()) {
        std::vector<Rat> z = back_substitute(e, m.cols(), rhs);
        return Unique{std::move(z)};
    }
    std::vector<Rat> particular = back_substitute(e, m.cols(), rhs);
    return Indeterminate{e.rank, std::move(particular)};
}

bool check_solution(const IncidenceMatrix& m, const std::vector<Rat>& z, const Rat& rhs) {
    if (static_cast<int>(z.size()) != m.cols()) return false;
    for (int i = 0; i < m.rows(); ++i) {
        Rat acc(0);
        for (int j = 0; j < m.cols(); ++j)
            if (m.entry(i, j)) acc += z[j];
        if (acc != rhs) return false;
    }
    return true;
}

} // namespace car
