#include <car/polytope.hpp>

#include <car/detail/simplex.hpp>

#include <algorithm>

namespace car {

namespace {

CarMechanism mechanism_from_solution(SampleSpace space, const std::vector<std::uint32_t>& masks,
                                     const std::vector<Rat>& z) {
    std::map<std::uint32_t, Rat> probs;
    for (std::size_t j = 0; j < masks.size(); ++j) probs[masks[j]] = z[j];
    return CarMechanism(space, probs);
}

/// Covers over `universe` using only sets from `pool` (ascending masks),
/// at most max_sets of them. Calls fn on every cover's mask list.
template <typename Fn>
void for_each_cover(std::uint32_t universe, const std::vector<std::uint32_t>& pool, int max_sets,
                    Fn&& fn) {
    const int pool_size = static_cast<int>(pool.size());
    std::vector<std::uint32_t> suffix_union(pool_size + 1, 0);
    for (int i = pool_size - 1; i >= 0; --i) suffix_union[i] = suffix_union[i + 1] | pool[i];

    std::vector<std::uint32_t> chosen;
    auto rec = [&](auto&& self, int idx, std::uint32_t covered) -> void {
        if (!chosen.empty() && covered == universe) fn(chosen);
        if (static_cast<int>(chosen.size()) == max_sets || idx == pool_size) return;
        if ((covered | suffix_union[idx]) != universe) return; // cannot cover anymore
        for (int i = idx; i < pool_size; ++i) {
            if ((covered | suffix_union[i]) != universe) break;
            chosen.push_back(pool[i]);
            self(self, i + 1, covered | pool[i]);
            chosen.pop_back();
        }
    };
    rec(rec, 0, 0);
}

std::vector<CarMechanism> extreme_mechanisms_from_pool(SampleSpace space,
                                                       const std::vector<std::uint32_t>& pool) {
    std::vector<CarMechanism> out;
    for_each_cover(space.full_mask(), pool, space.size(), [&](const std::vector<std::uint32_t>& masks) {
        IncidenceMatrix m(space.size(), masks);
        SolveOutcome outcome = solve_ones(m);
        const Unique* u = std::get_if<Unique>(&outcome);
        if (!u) return;
        for (const Rat& v : u->z)
            if (v <= Rat(0)) return;
        out.push_back(mechanism_from_solution(space, masks, u->z));
    });
    std::sort(out.begin(), out.end());
    return out;
}

} // namespace

bool is_extreme(const CarMechanism& mech) {
    Cover support = mech.support();
    SolveOutcome outcome = solve_ones(incidence(support));
    const Unique* u = std::get_if<Unique>(&outcome);
    if (!u) return false;
    const auto masks = support.masks();
    for (std::size_t j = 0; j < masks.size(); ++j)
        if (u->z[j] != mech.prob(masks[j]))
            throw std::logic_error("is_extreme: unique solution disagrees with the mechanism's "
                                   "probabilities; input is corrupted");
    return true; // positivity is implied: the solution equals the stored (positive) probabilities
}

ExtremeCatalog enumerate_extremes(SampleSpace space) {
    if (space.size() > kEnumerationCap)
        throw std::domain_error("enumerate_extremes: n=" + std::to_string(space.size()) +
                                " above enumeration cap " + std::to_string(kEnumerationCap));
    std::vector<std::uint32_t> pool;
    for (std::uint32_t m = 1; m <= space.full_mask(); ++m) pool.push_back(m);
    return {space, extreme_mechanisms_from_pool(space, pool)};
}

std::vector<CarMechanism> extremes_within(SampleSpace space, const std::vector<Subset>& allowed) {
    std::vector<std::uint32_t> pool;
    pool.reserve(allowed.size());
    for (const Subset& s : allowed) pool.push_back(s.mask());
    std::sort(pool.begin(), pool.end());
    pool.erase(std::unique(pool.begin(), pool.end()), pool.end());

    // Guard the combinatorics: sum_{m<=n} C(|pool|, m) candidate selections.
    double budget = 0, binom = 1;
    const int limit = std::min<int>(space.size(), static_cast<int>(pool.size()));
    for (int m = 1; m <= limit; ++m) {
        binom *= static_cast<double>(pool.size() - m + 1) / m;
        budget += binom;
    }
    if (budget > 5e6)
        throw std::domain_error("extremes_within: support too large to enumerate its face");

    return extreme_mechanisms_from_pool(space, pool);
}

namespace {

/// Walks from a point of the CAR polytope to a vertex of the face spanned by
/// its support: while the support columns are dependent, move along a null
/// direction until a coordinate hits zero. Terminates in at most |support|
/// steps and is deterministic.
CarMechanism walk_to_vertex(const CarMechanism& start) {
    SampleSpace space = start.space();
    std::vector<std::uint32_t> masks;
    std::vector<Rat> z;
    for (const auto& [mask, p] : start.probs()) {
        masks.push_back(mask);
        z.push_back(p);
    }

    for (;;) {
        IncidenceMatrix m(space.size(), masks);
        auto dir = linalg::null_direction(m);
        if (!dir) return mechanism_from_solution(space, masks, z);

        const std::vector<Rat>& d = *dir;
        // A nonzero null vector of an incidence matrix always has entries of
        // both signs, so the step below is finite.
        bool have = false;
        Rat step(0);
        for (std::size_t j = 0; j < d.size(); ++j) {
            if (d[j] >= Rat(0)) continue;
            Rat limit = z[j] / -d[j];
            if (!have || limit < step) {
                step = limit;
                have = true;
            }
        }
        if (!have) throw std::logic_error("walk_to_vertex: null direction without negative entries");

        std::vector<std::uint32_t> next_masks;
        std::vector<Rat> next_z;
        for (std::size_t j = 0; j < masks.size(); ++j) {
            Rat v = z[j] + step * d[j];
            if (v < Rat(0)) throw std::logic_error("walk_to_vertex: negative coordinate");
            if (v > Rat(0)) {
                next_masks.push_back(masks[j]);
                next_z.push_back(v);
            }
        }
        if (next_masks.size() >= masks.size())
            throw std::logic_error("walk_to_vertex: support did not shrink");
        masks = std::move(next_masks);
        z = std::move(next_z);
    }
}

} // namespace

MixtureDecomposition decompose(const CarMechanism& mech) {
    MixtureDecomposition out;
    CarMechanism residual = mech;
    Rat remaining(1); // mass not yet assigned

    for (;;) {
        CarMechanism vertex = walk_to_vertex(residual);
        if (vertex == residual) {
            out.terms.push_back({remaining, vertex, true});
            break;
        }
        // Largest t keeping (residual - t*vertex)/(1-t) nonnegative.
        bool have = false;
        Rat t(0);
        for (const auto& [mask, v] : vertex.probs()) {
            Rat ratio = residual.prob(mask) / v;
            if (!have || ratio < t) {
                t = ratio;
                have = true;
            }
        }
        if (!have || t <= Rat(0) || t >= Rat(1))
            throw std::logic_error("decompose: peel weight outside (0,1)");

        out.terms.push_back({remaining * t, vertex, true});
        remaining *= Rat(1) - t;

        std::map<std::uint32_t, Rat> next;
        const Rat rescale = Rat(1) / (Rat(1) - t);
        for (const auto& [mask, p] : residual.probs()) {
            Rat v = (p - t * vertex.prob(mask)) * rescale;
            if (v < Rat(0)) throw std::logic_error("decompose: negative residual");
            if (v > Rat(0)) next[mask] = v;
        }
        residual = CarMechanism(residual.space(), next);
    }
    return out;
}

namespace {

/// All partitions of E whose blocks are taken from `blocks` (ascending mask
/// order), via lowest-missing-element DFS.
std::vector<std::vector<std::uint32_t>> partitions_from_blocks(SampleSpace space,
                                                               const std::vector<std::uint32_t>& blocks) {
    std::vector<std::vector<std::uint32_t>> out;
    std::vector<std::uint32_t> chosen;
    const std::uint32_t full = space.full_mask();
    auto rec = [&](auto&& self, std::uint32_t covered) -> void {
        if (covered == full) {
            out.push_back(chosen);
            return;
        }
        const std::uint32_t lowest = (~covered) & (covered + 1); // lowest missing element bit
        for (std::uint32_t b : blocks) {
            if (!(b & lowest) || (b & covered)) continue;
            chosen.push_back(b);
            self(self, covered | b);
            chosen.pop_back();
        }
    };
    rec(rec, 0);
    return out;
}

} // namespace

std::optional<CcarDecomposition> is_ccar(const CarMechanism& mech) {
    SampleSpace space = mech.space();
    if (space.size() > kEnumerationCap)
        throw std::domain_error("is_ccar: n=" + std::to_string(space.size()) +
                                " above enumeration cap " + std::to_string(kEnumerationCap));

    // Any partition receiving positive weight must draw all blocks from the
    // support, so those partitions are the only candidates.
    std::vector<std::uint32_t> support_masks;
    for (const auto& [mask, _] : mech.probs()) support_masks.push_back(mask);
    auto partitions = partitions_from_blocks(space, support_masks);
    if (partitions.empty()) return std::nullopt;

    // Feasibility of: for each A in support, sum of weights of partitions
    // containing A as a block equals pi_A; weights nonnegative. Weight sum 1
    // is implied by the row equations.
    lp::Problem prob;
    const int rows = static_cast<int>(support_masks.size());
    const int cols = static_cast<int>(partitions.size());
    prob.a.assign(rows, std::vector<Rat>(cols, Rat(0)));
    prob.b.resize(rows);
    prob.c.assign(cols, Rat(0));
    for (int r = 0; r < rows; ++r) prob.b[r] = mech.prob(support_masks[r]);
    for (int p = 0; p < cols; ++p)
        for (std::uint32_t block : partitions[p]) {
            int r = static_cast<int>(std::lower_bound(support_masks.begin(), support_masks.end(), block) -
                                     support_masks.begin());
            prob.a[r][p] = Rat(1);
        }

    lp::Result res = lp::solve(prob);
    if (res.status != lp::Result::Status::Optimal) return std::nullopt;

    CcarDecomposition dec;
    for (int p = 0; p < cols; ++p) {
        if (res.x[p].is_zero()) continue;
        std::vector<Subset> sets;
        for (std::uint32_t b : partitions[p]) sets.emplace_back(b, space);
        dec.terms.emplace_back(res.x[p], Cover(space, std::move(sets)));
    }
    return dec;
}

FarkasReport farkas_report(const Cover& cover) {
    IncidenceMatrix m = incidence(cover);
    const int rows = m.rows(), cols = m.cols();
    linalg::Echelon e = linalg::eliminate(linalg::to_dense(m, true), cols, /*track_rowops=*/true);

    for (int r = e.rank; r < rows; ++r) {
        if (e.a[r][cols] == 0) continue;
        // Row combination y with y.M = 0 and y.1 != 0; orient and reduce.
        std::vector<BigInt> y = e.rowops[r];
        if (e.a[r][cols] > 0)
            for (BigInt& v : y) v = -v;
        BigInt g = 0;
        for (const BigInt& v : y) g = big_gcd(g, boost::multiprecision::abs(v));
        if (g > 1)
            for (BigInt& v : y) v /= g;
        const BigInt bound = BigInt(rows) * cols;
        for (const BigInt& v : y)
            if (boost::multiprecision::abs(v) > bound)
                return {FarkasReport::Inconclusive{
                    "certificate entries exceed the search bound m*n = " + bound.str()}};
        return {FarkasReport::InfeasibleCert{std::move(y)}};
    }

    if (e.rank < cols) return {FarkasReport::RankDeficient{e.rank}};

    SolveOutcome outcome = solve_ones(m);
    const Unique* u = std::get_if<Unique>(&outcome);
    if (!u) throw std::logic_error("farkas_report: full-rank consistent system must be unique");
    for (std::size_t j = 0; j < u->z.size(); ++j)
        if (u->z[j] <= Rat(0))
            return {FarkasReport::NonPositive{u->z, static_cast<int>(j) + 1}};
    return {FarkasReport::ExtremeOk{u->z}};
}

Rat best_rational_within(const Rat& target, const Rat& tolerance) {
    if (tolerance < Rat(0)) throw std::invalid_argument("best_rational_within: negative tolerance");
    // Continued-fraction convergents of the target; the first within
    // tolerance has the smallest possible denominator.
    BigInt p = target.num(), q = target.den();
    BigInt h0 = 0, h1 = 1, k0 = 1, k1 = 0; // convergent numerators/denominators
    for (;;) {
        BigInt a = p / q; // floor for q > 0; p may be negative, adjust
        if (p < 0 && p % q != 0) a -= 1;
        BigInt h2 = a * h1 + h0, k2 = a * k1 + k0;
        Rat conv(h2, k2);
        if ((conv - target).abs() <= tolerance) return conv;
        BigInt rem = p - a * q;
        if (rem == 0) return conv; // exact (tolerance made it here first anyway)
        h0 = h1;
        h1 = h2;
        k0 = k1;
        k1 = k2;
        p = q;
        q = rem;
    }
}

CarMechanism rationalize(const ApproxCarTable& approx, const Rat& epsilon) {
    if (epsilon <= Rat(0)) throw std::invalid_argument("rationalize: epsilon must be positive");
    SampleSpace space = approx.space;

    std::map<std::uint32_t, Rat> values;
    for (const auto& [mask, v] : approx.values) {
        Subset a(mask, space); // validates
        if (v < Rat(0))
            throw std::invalid_argument("rationalize: negative value " + v.str() + " for " + a.str());
        if (v > Rat(0)) values[mask] = v;
    }

    const Rat slack = epsilon / Rat(2);
    std::uint32_t covered = 0;
    for (const auto& [mask, _] : values) covered |= mask;
    bool exact = covered == space.full_mask();
    for (int x = 1; x <= space.size(); ++x) {
        Rat sum(0);
        for (const auto& [mask, v] : values)
            if ((mask >> (x - 1)) & 1u) sum += v;
        if ((sum - Rat(1)).abs() > slack)
            throw std::invalid_argument("rationalize: values over sets containing element " +
                                        std::to_string(x) + " sum to " + sum.str() +
                                        ", more than epsilon/2 from 1");
        if (sum != Rat(1)) exact = false;
    }
    if (exact) return CarMechanism(space, values); // already a CAR mechanism, distance 0

    if (covered != space.full_mask())
        throw std::domain_error("rationalize: support does not cover the sample space");

    std::vector<Subset> support;
    for (const auto& [mask, _] : values) support.emplace_back(mask, space);
    std::vector<CarMechanism> verts = extremes_within(space, support);
    if (verts.empty())
        throw std::domain_error("rationalize: the support face contains no CAR mechanism");

    // Chebyshev fit: min t with |value_A - sum_i lambda_i v_i(A)| <= t for
    // every A in the support, lambda a probability vector.
    std::vector<std::uint32_t> support_masks;
    for (const auto& [mask, _] : values) support_masks.push_back(mask);
    const int s = static_cast<int>(support_masks.size());
    const int kv = static_cast<int>(verts.size());
    // columns: lambda (kv), t, s1 (s), s2 (s)
    const int cols = kv + 1 + 2 * s;
    lp::Problem prob;
    prob.a.assign(2 * s + 1, std::vector<Rat>(cols, Rat(0)));
    prob.b.assign(2 * s + 1, Rat(0));
    prob.c.assign(cols, Rat(0));
    prob.c[kv] = Rat(1);
    for (int r = 0; r < s; ++r) {
        const std::uint32_t mask = support_masks[r];
        for (int i = 0; i < kv; ++i) {
            Rat v = verts[i].prob(mask);
            prob.a[r][i] = v;         // sum lambda v - t + s1 = value
            prob.a[s + r][i] = v;     // sum lambda v + t - s2 = value
        }
        prob.a[r][kv] = Rat(-1);
        prob.a[r][kv + 1 + r] = Rat(1);
        prob.a[s + r][kv] = Rat(1);
        prob.a[s + r][kv + 1 + s + r] = Rat(-1);
        prob.b[r] = values.at(mask);
        prob.b[s + r] = values.at(mask);
    }
    for (int i = 0; i < kv; ++i) prob.a[2 * s][i] = Rat(1);
    prob.b[2 * s] = Rat(1);

    lp::Result res = lp::solve(prob);
    if (res.status != lp::Result::Status::Optimal)
        throw std::logic_error("rationalize: fit LP must be feasible and bounded");
    if (res.objective >= epsilon)
        throw std::domain_error("rationalize: input is " + res.objective.str() +
                                " away from the CAR polytope in max norm, not within epsilon = " +
                                epsilon.str());

    std::vector<std::pair<Rat, CarMechanism>> terms;
    for (int i = 0; i < kv; ++i)
        if (res.x[i] > Rat(0)) terms.emplace_back(res.x[i], verts[i]);

    // Round the weights to bounded denominators; the last weight absorbs the
    // residue so the total stays exactly 1. Fall back to the unrounded
    // weights if rounding spends more than the remaining error budget.
    if (terms.size() > 1) {
        const Rat tol = (epsilon - res.objective) / Rat(2 * static_cast<long long>(terms.size()));
        std::vector<std::pair<Rat, CarMechanism>> rounded = terms;
        Rat acc(0);
        bool ok = true;
        for (std::size_t i = 0; ok && i + 1 < rounded.size(); ++i) {
            Rat w = best_rational_within(terms[i].first, tol);
            if (w <= Rat(0) || w >= Rat(1)) ok = false;
            rounded[i].first = w;
            acc += w;
        }
        if (ok) {
            Rat last = Rat(1) - acc;
            if (last > Rat(0)) {
                rounded.back().first = last;
                terms = std::move(rounded);
            }
        }
    }

    CarMechanism result = mixture(terms);
    for (const auto& [mask, v] : values)
        if ((result.prob(mask) - v).abs() >= epsilon)
            throw std::logic_error("rationalize: rounded mixture drifted past epsilon");
    return result;
}

} // namespace car
