#include <car/simulate.hpp>

#include <car/polytope.hpp>

#include <boost/math/distributions/chi_squared.hpp>

#include <algorithm>
#include <limits>

namespace car {

ProceduralModel::ProceduralModel(std::vector<UniformMulticover> multicovers, std::vector<Rat> weights)
    : multicovers_(std::move(multicovers)), weights_(std::move(weights)) {
    if (multicovers_.empty()) throw std::invalid_argument("ProceduralModel: no multicovers");
    if (multicovers_.size() != weights_.size())
        throw std::invalid_argument("ProceduralModel: weight count does not match multicover count");
    Rat sum(0);
    for (const Rat& w : weights_) {
        if (w <= Rat(0)) throw std::invalid_argument("ProceduralModel: weight " + w.str() + " not positive");
        sum += w;
    }
    if (sum != Rat(1))
        throw std::invalid_argument("ProceduralModel: weights sum to " + sum.str() + ", expected 1");
    for (const auto& mc : multicovers_)
        if (mc.space() != multicovers_.front().space())
            throw std::invalid_argument("ProceduralModel: multicovers from different sample spaces");
}

CarMechanism model_mechanism(const ProceduralModel& model) {
    std::map<std::uint32_t, Rat> probs;
    for (std::size_t j = 0; j < model.multicovers().size(); ++j) {
        const auto& mc = model.multicovers()[j];
        const Rat& w = model.weights()[j];
        for (const auto& [mask, n] : mc.multiplicities())
            probs[mask] += w * Rat(n, mc.height());
    }
    return CarMechanism(model.space(), probs);
}

namespace {

std::uint64_t to_u64(const BigInt& v, const char* what) {
    if (v < 0 || v > BigInt(std::numeric_limits<std::uint64_t>::max() >> 1))
        throw std::domain_error(std::string(what) + " too large to simulate: " + v.str());
    return v.convert_to<std::uint64_t>();
}

} // namespace

Subset draw(const ProceduralModel& model, int x, Rng& rng) {
    SampleSpace space = model.space();
    if (x < 1 || x > space.size())
        throw std::invalid_argument("draw: element " + std::to_string(x) + " outside 1.." +
                                    std::to_string(space.size()));

    // Pick a multicover by weight: one uniform draw over the common
    // denominator, walked against the cumulative weights. Skipped entirely
    // for a single-component model.
    std::size_t pick = 0;
    if (model.multicovers().size() > 1) {
        BigInt denom = 1;
        for (const Rat& w : model.weights()) denom = big_lcm(denom, w.den());
        const std::uint64_t total = to_u64(denom, "weight denominator lcm");
        std::uint64_t u = rng.below(total);
        for (std::size_t j = 0; j < model.weights().size(); ++j) {
            const Rat& w = model.weights()[j];
            std::uint64_t share = to_u64(w.num() * (denom / w.den()), "weight share");
            if (u < share) {
                pick = j;
                break;
            }
            u -= share;
        }
    }

    // Within the chosen multicover: x lies in exactly k sets counted with
    // multiplicity; choose one uniformly.
    const UniformMulticover& mc = model.multicovers()[pick];
    const std::uint64_t k = to_u64(mc.height(), "multicover height");
    std::uint64_t u = (k > 1) ? rng.below(k) : 0;
    for (const auto& [mask, mult] : mc.multiplicities()) {
        if (!((mask >> (x - 1)) & 1u)) continue;
        const std::uint64_t m = to_u64(mult, "multiplicity");
        if (u < m) return Subset(mask, space);
        u -= m;
    }
    throw std::logic_error("draw: cumulative multiplicities did not reach the height");
}

ProceduralModel model_from_mechanism(const CarMechanism& mech) {
    MixtureDecomposition dec = decompose(mech);
    std::vector<UniformMulticover> mcs;
    std::vector<Rat> weights;
    for (const auto& term : dec.terms) {
        mcs.push_back(to_multicover(term.mechanism));
        weights.push_back(term.weight);
    }
    return ProceduralModel(std::move(mcs), std::move(weights));
}

SimReport validate(const ProceduralModel& model, long long samples_per_x, std::uint64_t seed) {
    if (samples_per_x < 1000)
        throw std::invalid_argument("validate: need at least 1000 samples per element");

    const CarMechanism mech = model_mechanism(model);
    const SampleSpace space = model.space();

    SimReport report;
    report.space_n = space.size();
    report.seed = seed;
    report.samples_per_x = samples_per_x;
    report.all_pass = true;

    for (int x = 1; x <= space.size(); ++x) {
        Rng rng(Rng::mix(seed, static_cast<std::uint64_t>(x)));
        std::map<std::uint32_t, long long> counts;
        for (long long i = 0; i < samples_per_x; ++i) counts[draw(model, x, rng).mask()] += 1;

        SimReport::Element elem;
        elem.x = x;
        long long observed_total = 0;
        for (const auto& [mask, p] : mech.probs()) {
            if (!((mask >> (x - 1)) & 1u)) continue;
            long long obs = counts.count(mask) ? counts.at(mask) : 0;
            observed_total += obs;
            elem.cells.push_back({mask, obs, p});
        }
        if (observed_total != samples_per_x)
            throw std::logic_error("validate: a draw fell outside the mechanism support");

        // Merge cells with expected count < 5 into one tail cell (Cochran's
        // rule of thumb), smallest expectations first.
        std::vector<std::size_t> order(elem.cells.size());
        for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
        std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
            if (elem.cells[a].expected_p != elem.cells[b].expected_p)
                return elem.cells[a].expected_p < elem.cells[b].expected_p;
            return elem.cells[a].mask < elem.cells[b].mask;
        });
        const double total = static_cast<double>(samples_per_x);
        double tail_expected = 0;
        long long tail_observed = 0;
        std::size_t merged = 0;
        while (merged < order.size()) {
            const auto& cell = elem.cells[order[merged]];
            const double exp_count = cell.expected_p.to_double() * total;
            const bool need = exp_count < 5.0 || (merged > 0 && tail_expected < 5.0);
            if (!need) break;
            tail_expected += exp_count;
            tail_observed += cell.observed;
            ++merged;
        }
        if (merged == 1) { // a tail of one cell is the cell itself
            tail_expected = 0;
            tail_observed = 0;
            merged = 0;
        }

        double chi = 0;
        int cells_used = 0;
        for (std::size_t i = merged; i < order.size(); ++i) {
            const auto& cell = elem.cells[order[i]];
            const double exp_count = cell.expected_p.to_double() * total;
            const double d = static_cast<double>(cell.observed) - exp_count;
            chi += d * d / exp_count;
            ++cells_used;
        }
        if (merged > 0) {
            const double d = static_cast<double>(tail_observed) - tail_expected;
            chi += d * d / tail_expected;
            ++cells_used;
            elem.merged_cells = static_cast<int>(merged);
            report.warnings.push_back("element " + std::to_string(x) + ": merged " +
                                      std::to_string(merged) + " cells with expected count < 5");
        } else {
            elem.merged_cells = 0;
        }

        elem.chi_square = chi;
        elem.df = cells_used - 1;
        if (elem.df > 0) {
            boost::math::chi_squared_distribution<double> dist(elem.df);
            elem.critical_999 = boost::math::quantile(dist, 0.999);
            elem.pass = chi <= elem.critical_999;
        } else {
            elem.critical_999 = 0;
            elem.pass = true;
        }
        report.all_pass = report.all_pass && elem.pass;
        report.per_element.push_back(std::move(elem));
    }
    return report;
}

} // namespace car
