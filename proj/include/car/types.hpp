#pragma once

#include <car/rational.hpp>

#include <cstdint>
#include <initializer_list>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace car {

/// Largest supported sample space; subsets must fit a 32-bit mask and the
/// 2^n-1 nonempty subsets must stay enumerable.
inline constexpr int kMaxElements = 20;

/// The finite sample space E = {1, ..., n}.
class SampleSpace {
public:
    explicit SampleSpace(int n) : n_(n) {
        if (n < 1 || n > kMaxElements)
            throw std::invalid_argument("SampleSpace: n must be in [1, " +
                                        std::to_string(kMaxElements) + "], got " + std::to_string(n));
    }

    int size() const { return n_; }
    std::uint32_t full_mask() const { return (n_ == 32) ? ~0u : ((1u << n_) - 1u); }

    friend bool operator==(SampleSpace a, SampleSpace b) { return a.n_ == b.n_; }
    friend bool operator!=(SampleSpace a, SampleSpace b) { return a.n_ != b.n_; }

private:
    int n_;
};

/// A nonempty subset of E, stored as a bitmask (bit i-1 <=> element i).
/// Subsets order by ascending mask value; that ordering is canonical
/// everywhere in this library.
class Subset {
public:
    Subset(std::uint32_t mask, SampleSpace space) : mask_(mask), n_(space.size()) {
        if (mask == 0) throw std::invalid_argument("Subset: empty set");
        if (mask & ~space.full_mask())
            throw std::invalid_argument("Subset: element above n=" + std::to_string(n_));
    }

    static Subset of(std::initializer_list<int> elems, SampleSpace space) {
        std::uint32_t m = 0;
        for (int e : elems) {
            if (e < 1 || e > space.size())
                throw std::invalid_argument("Subset: element " + std::to_string(e) + " outside 1.." +
                                            std::to_string(space.size()));
            m |= 1u << (e - 1);
        }
        return Subset(m, space);
    }

    std::uint32_t mask() const { return mask_; }
    int space_size() const { return n_; }
    int size() const { return __builtin_popcount(mask_); }
    bool contains(int x) const { return x >= 1 && x <= n_ && (mask_ >> (x - 1)) & 1u; }

    std::vector<int> elements() const {
        std::vector<int> out;
        for (int x = 1; x <= n_; ++x)
            if (contains(x)) out.push_back(x);
        return out;
    }

    /// "{1,3}" with elements ascending.
    std::string str() const {
        std::string s = "{";
        bool first = true;
        for (int x : elements()) {
            if (!first) s += ",";
            s += std::to_string(x);
            first = false;
        }
        return s + "}";
    }

    friend bool operator==(const Subset& a, const Subset& b) { return a.mask_ == b.mask_; }
    friend bool operator!=(const Subset& a, const Subset& b) { return a.mask_ != b.mask_; }
    friend bool operator<(const Subset& a, const Subset& b) { return a.mask_ < b.mask_; }

private:
    std::uint32_t mask_;
    int n_;
};

/// An ordered list of distinct nonempty subsets whose union is E.
/// Canonical order is ascending mask value.
class Cover {
public:
    Cover(SampleSpace space, std::vector<Subset> sets);

    SampleSpace space() const { return space_; }
    int size() const { return static_cast<int>(sets_.size()); }
    const std::vector<Subset>& sets() const { return sets_; }
    std::vector<std::uint32_t> masks() const;
    bool is_partition() const;
    std::string str() const;

    friend bool operator==(const Cover& a, const Cover& b) {
        return a.space_ == b.space_ && a.masks() == b.masks();
    }

private:
    SampleSpace space_;
    std::vector<Subset> sets_;
};

/// A general coarsening mechanism: the conditional table pi_A^x for x in A.
/// Rows normalize exactly: for every x, the stored probabilities over A with
/// x in A sum to 1. Entries stored with probability zero are allowed and are
/// equivalent to absent entries.
class CoarseningMechanism {
public:
    using Key = std::pair<int, std::uint32_t>; // (x, mask of A)

    CoarseningMechanism(SampleSpace space, const std::map<Key, Rat>& table);

    SampleSpace space() const { return space_; }
    const std::map<Key, Rat>& table() const { return table_; }

    /// Effective probability: 0 when the entry is absent.
    Rat prob(int x, const Subset& a) const;

    /// Subsets A with pi_A^x > 0 for some x, ascending mask order.
    std::vector<Subset> support() const;

private:
    SampleSpace space_;
    std::map<Key, Rat> table_;
};

/// A CAR mechanism: one probability per subset of the support, with
/// sum_{A contains x} pi_A = 1 exactly for every element x. Zero
/// probabilities are never stored, so the key set is the support.
class CarMechanism {
public:
    CarMechanism(SampleSpace space, const std::map<Subset, Rat>& probs);
    CarMechanism(SampleSpace space, const std::map<std::uint32_t, Rat>& probs);

    SampleSpace space() const { return space_; }
    const std::map<std::uint32_t, Rat>& probs() const { return probs_; }

    /// pi_A, zero when A is outside the support.
    Rat prob(const Subset& a) const { return prob(a.mask()); }
    Rat prob(std::uint32_t mask) const;

    int support_size() const { return static_cast<int>(probs_.size()); }
    Cover support() const;

    std::string str() const;

    friend bool operator==(const CarMechanism& a, const CarMechanism& b) {
        return a.space_ == b.space_ && a.probs_ == b.probs_;
    }
    friend bool operator!=(const CarMechanism& a, const CarMechanism& b) { return !(a == b); }
    friend bool operator<(const CarMechanism& a, const CarMechanism& b);

private:
    SampleSpace space_;
    std::map<std::uint32_t, Rat> probs_;
};

/// A convex combination of extreme CAR mechanisms reproducing some source
/// mechanism exactly.
struct MixtureDecomposition {
    struct Term {
        Rat weight;
        CarMechanism mechanism;
        bool extreme = false;
    };
    std::vector<Term> terms;
};

/// Coordinate-wise convex combination of CAR mechanisms. Weights must be
/// positive and sum to 1 exactly; all mechanisms must share one space.
CarMechanism mixture(const std::vector<std::pair<Rat, CarMechanism>>& terms);

CarMechanism mixture(const MixtureDecomposition& d);

/// The unique CAR mechanism supported by a partition: pi_A = 1 on each block.
CarMechanism partition_mechanism(const Cover& partition);

} // namespace car
