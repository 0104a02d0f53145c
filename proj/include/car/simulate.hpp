#pragma once

#include <car/multicover.hpp>
#include <car/types.hpp>

#include <cstdint>
#include <random>
#include <string>
#include <vector>

namespace car {

/// Seeded generator with portable output: the engine is the standard
/// mt19937_64 (fully specified by the C++ standard), and bounded draws use
/// rejection sampling, never a bare modulus, so they are unbiased and
/// reproducible bit for bit across platforms.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : eng_(seed) {}

    std::uint64_t next() { return eng_(); }

    /// Uniform draw from [0, k). Rejects raw values below 2^64 mod k, then
    /// reduces; k = 1 consumes no randomness.
    std::uint64_t below(std::uint64_t k) {
        if (k <= 1) return 0;
        const std::uint64_t threshold = (0 - k) % k; // 2^64 mod k
        for (;;) {
            std::uint64_t r = eng_();
            if (r >= threshold) return r % k;
        }
    }

    /// Derives a decorrelated per-stream seed (splitmix64 finalizer).
    static std::uint64_t mix(std::uint64_t seed, std::uint64_t stream) {
        std::uint64_t z = seed + 0x9E3779B97F4A7C15ull * (stream + 1);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
        return z ^ (z >> 31);
    }

private:
    std::mt19937_64 eng_;
};

/// The procedural model: a weighted finite family of uniform multicovers.
/// Simulation first picks a multicover by weight, then one of the k sets
/// containing the underlying outcome uniformly.
class ProceduralModel {
public:
    ProceduralModel(std::vector<UniformMulticover> multicovers, std::vector<Rat> weights);

    SampleSpace space() const { return multicovers_.front().space(); }
    const std::vector<UniformMulticover>& multicovers() const { return multicovers_; }
    const std::vector<Rat>& weights() const { return weights_; }

private:
    std::vector<UniformMulticover> multicovers_;
    std::vector<Rat> weights_;
};

/// The exact CAR mechanism the model simulates: pi_A = sum_j w_j n_A^j / k_j.
CarMechanism model_mechanism(const ProceduralModel& model);

/// One coarsening draw for underlying outcome x.
Subset draw(const ProceduralModel& model, int x, Rng& rng);

/// Rebuilds a model that simulates the mechanism exactly: decompose into
/// extremes and take each term's canonical multicover.
ProceduralModel model_from_mechanism(const CarMechanism& mech);

struct SimReport {
    struct Cell {
        std::uint32_t mask;
        long long observed;
        Rat expected_p;

        friend bool operator==(const Cell&, const Cell&) = default;
    };
    struct Element {
        int x;
        std::vector<Cell> cells;    // ascending mask
        double chi_square;
        int df;                     // after tail merging
        double critical_999;        // chi-square 99.9% critical value, 0 when df = 0
        bool pass;
        int merged_cells;           // number of low-expectation cells merged into a tail

        friend bool operator==(const Element&, const Element&) = default;
    };

    int space_n;
    std::uint64_t seed;
    long long samples_per_x;
    std::vector<Element> per_element;
    bool all_pass;
    std::vector<std::string> warnings;

    friend bool operator==(const SimReport&, const SimReport&) = default;
};

/// Empirical goodness of fit: draws samples_per_x observations for every
/// underlying x and compares frequencies against the model's exact
/// mechanism with a per-element chi-square test at the 99.9% level. Cells
/// with expected count below 5 are merged into a tail cell (with a warning)
/// before the statistic is computed. Identical inputs give bit-identical
/// reports.
SimReport validate(const ProceduralModel& model, long long samples_per_x, std::uint64_t seed);

} // namespace car
