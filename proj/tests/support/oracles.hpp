#pragma once

// Test-only oracles, kept independent of the implementation paths they
// cross-check.

#include <car/linsolve.hpp>
#include <car/multicover.hpp>
#include <car/polytope.hpp>
#include <car/types.hpp>

#include <algorithm>
#include <functional>
#include <numeric>
#include <random>
#include <vector>

namespace car::testing {

struct NaiveOutcome {
    enum class Kind { Unique, Indeterminate, Infeasible } kind;
    int rank = 0;
    std::vector<Rat> z; // unique solution when kind == Unique
};

/// Straightforward rational Gauss-Jordan on [M | 1], pivoting on the entry
/// of largest absolute value (a different rule than the production solver).
inline NaiveOutcome naive_solve_ones(const IncidenceMatrix& m) {
    const int rows = m.rows(), cols = m.cols();
    std::vector<std::vector<Rat>> a(rows, std::vector<Rat>(cols + 1, Rat(0)));
    for (int i = 0; i < rows; ++i) {
        for (int j = 0; j < cols; ++j) a[i][j] = m.entry(i, j) ? Rat(1) : Rat(0);
        a[i][cols] = Rat(1);
    }

    std::vector<int> pivot_col_of_row;
    std::vector<bool> used_row(rows, false);
    int rank = 0;
    std::vector<int> pivot_cols;
    for (int col = 0; col < cols; ++col) {
        int best = -1;
        for (int r = 0; r < rows; ++r) {
            if (used_row[r] || a[r][col].is_zero()) continue;
            if (best < 0 || a[r][col].abs() > a[best][col].abs()) best = r;
        }
        if (best < 0) continue;
        used_row[best] = true;
        pivot_cols.push_back(col);
        pivot_col_of_row.push_back(best);
        ++rank;
        const Rat inv = Rat(1) / a[best][col];
        for (auto& v : a[best]) v *= inv;
        for (int r = 0; r < rows; ++r) {
            if (r == best || a[r][col].is_zero()) continue;
            const Rat f = a[r][col];
            for (int j = 0; j <= cols; ++j) a[r][j] -= f * a[best][j];
        }
    }

    for (int r = 0; r < rows; ++r) {
        if (used_row[r]) continue;
        bool all_zero = true;
        for (int j = 0; j < cols; ++j)
            if (!a[r][j].is_zero()) {
                all_zero = false;
                break;
            }
        if (all_zero && !a[r][cols].is_zero()) return {NaiveOutcome::Kind::Infeasible, rank, {}};
    }

    if (rank < cols) return {NaiveOutcome::Kind::Indeterminate, rank, {}};

    std::vector<Rat> z(cols, Rat(0));
    for (int k = 0; k < rank; ++k) z[pivot_cols[k]] = a[pivot_col_of_row[k]][cols];
    return {NaiveOutcome::Kind::Unique, rank, std::move(z)};
}

/// Every cover of E (any number of sets, not just m <= n), via the full
/// 2^(2^n - 1) sweep. Usable up to n = 4.
inline void for_all_covers(SampleSpace space, const std::function<void(const std::vector<std::uint32_t>&)>& fn) {
    const std::uint32_t subsets = space.full_mask(); // subsets are 1..full
    const std::uint64_t selections = 1ull << subsets;
    for (std::uint64_t sel = 1; sel < selections; ++sel) {
        std::uint32_t covered = 0;
        std::vector<std::uint32_t> masks;
        for (std::uint32_t s = 1; s <= subsets; ++s)
            if ((sel >> (s - 1)) & 1ull) {
                masks.push_back(s);
                covered |= s;
            }
        if (covered == space.full_mask()) fn(masks);
    }
}

/// Random convex combination of catalog mechanisms with small integer
/// weights, for round-trip properties.
inline CarMechanism random_mixture(const std::vector<CarMechanism>& catalog, std::mt19937_64& rng,
                                   int max_terms = 4) {
    std::uniform_int_distribution<int> count_dist(1, std::min<int>(max_terms, static_cast<int>(catalog.size())));
    const int terms = count_dist(rng);
    std::vector<std::size_t> picks;
    std::uniform_int_distribution<std::size_t> pick_dist(0, catalog.size() - 1);
    while (picks.size() < static_cast<std::size_t>(terms)) {
        std::size_t p = pick_dist(rng);
        bool dup = false;
        for (std::size_t q : picks) dup = dup || q == p;
        if (!dup) picks.push_back(p);
    }
    std::uniform_int_distribution<int> weight_dist(1, 9);
    std::vector<int> raw;
    int total = 0;
    for (std::size_t i = 0; i < picks.size(); ++i) {
        raw.push_back(weight_dist(rng));
        total += raw.back();
    }
    std::vector<std::pair<Rat, CarMechanism>> mix;
    for (std::size_t i = 0; i < picks.size(); ++i)
        mix.emplace_back(Rat(raw[i], total), catalog[picks[i]]);
    return mixture(mix);
}

/// All canonical uniform multicovers with total multiplicity at most
/// max_total, by depth-first search over multiplicity vectors.
inline std::vector<UniformMulticover> all_canonical_multicovers(SampleSpace space, int max_total) {
    const int n = space.size();
    std::vector<std::uint32_t> masks;
    for (std::uint32_t m = 1; m <= space.full_mask(); ++m) masks.push_back(m);
    const std::size_t s = masks.size();

    std::vector<std::uint32_t> suffix_union(s + 1, 0);
    for (int i = static_cast<int>(s) - 1; i >= 0; --i) suffix_union[i] = suffix_union[i + 1] | masks[i];

    std::vector<UniformMulticover> out;
    std::vector<long> mult(s, 0);
    std::vector<long> counts(n, 0);

    auto rec = [&](auto&& self, std::size_t idx, long budget) -> void {
        // prune: every element must be able to reach the current max count
        long max_c = 0, min_possible = 0;
        for (int x = 0; x < n; ++x) {
            max_c = std::max(max_c, counts[x]);
            long reach = counts[x] + (((suffix_union[idx] >> x) & 1u) ? budget : 0);
            if (x == 0 || reach < min_possible) min_possible = reach;
        }
        if (max_c > min_possible) return;

        if (idx == s) {
            for (int x = 1; x < n; ++x)
                if (counts[x] != counts[0]) return;
            if (counts[0] == 0) return;
            long g = counts[0];
            for (std::size_t i = 0; i < s && g > 1; ++i)
                if (mult[i]) g = std::gcd(g, mult[i]);
            if (g != 1) return; // non-canonical scaling of a smaller instance
            std::map<Subset, BigInt> mm;
            for (std::size_t i = 0; i < s; ++i)
                if (mult[i]) mm.emplace(Subset(masks[i], space), BigInt(mult[i]));
            out.emplace_back(space, mm);
            return;
        }
        for (long take = 0; take <= budget; ++take) {
            mult[idx] = take;
            if (take > 0)
                for (int x = 0; x < n; ++x)
                    if ((masks[idx] >> x) & 1u) counts[x] += 1;
            self(self, idx + 1, budget - take);
        }
        for (int x = 0; x < n; ++x)
            if ((masks[idx] >> x) & 1u) counts[x] -= mult[idx];
        mult[idx] = 0;
    };
    rec(rec, 0, max_total);
    return out;
}

/// Relabels a coarsening table by a permutation of 1..n (perm[x-1] is the
/// new label of x).
inline CoarseningMechanism relabel(const CoarseningMechanism& mech, const std::vector<int>& perm) {
    std::map<CoarseningMechanism::Key, Rat> table;
    for (const auto& [key, p] : mech.table()) {
        std::uint32_t mask = 0;
        for (int x = 1; x <= mech.space().size(); ++x)
            if ((key.second >> (x - 1)) & 1u) mask |= 1u << (perm[x - 1] - 1);
        table[{perm[key.first - 1], mask}] = p;
    }
    return CoarseningMechanism(mech.space(), table);
}

} // namespace car::testing
