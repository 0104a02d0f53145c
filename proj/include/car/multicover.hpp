#pragma once

#include <car/types.hpp>

#include <optional>

namespace car {

/// A uniform multicover: a multiset of nonempty subsets of E such that every
/// element lies in exactly `height` of them, counted with multiplicity. A
/// height-1 multicover is an ordinary partition. Instances are kept in
/// canonical form: gcd(height, all multiplicities) = 1, so each rational CAR
/// mechanism corresponds to exactly one instance.
class UniformMulticover {
public:
    /// Multiplicities must be positive and give every element the same count.
    /// Non-canonical input (a common factor across height and multiplicities)
    /// is normalized, never rejected.
    UniformMulticover(SampleSpace space, const std::map<Subset, BigInt>& multiplicities);

    SampleSpace space() const { return space_; }
    const std::map<std::uint32_t, BigInt>& multiplicities() const { return mult_; }
    const BigInt& height() const { return height_; }

    BigInt multiplicity(const Subset& a) const;
    Cover support() const;
    /// Total multiplicity, i.e. the number of sets counted with multiplicity.
    BigInt total_multiplicity() const;

    std::string str() const;

    friend bool operator==(const UniformMulticover& a, const UniformMulticover& b) {
        return a.space_ == b.space_ && a.mult_ == b.mult_;
    }
    friend bool operator!=(const UniformMulticover& a, const UniformMulticover& b) { return !(a == b); }

private:
    SampleSpace space_;
    std::map<std::uint32_t, BigInt> mult_;
    BigInt height_;
};

/// The CAR mechanism generated by a multicover: pi_A = n_A / k.
CarMechanism from_multicover(const UniformMulticover& mc);

/// The canonical multicover of a rational CAR mechanism: k is the lcm of the
/// probability denominators and n_A = k * pi_A. Exact inverse of
/// from_multicover.
UniformMulticover to_multicover(const CarMechanism& mech);

/// The height of a mechanism's canonical multicover.
BigInt height(const CarMechanism& mech);

/// A multicover is extreme iff the CAR mechanism it generates is extreme.
bool is_extreme_multicover(const UniformMulticover& mc);

/// Searches for a proper nonempty sub-multiset (component-wise m_A <= n_A,
/// not all zero, not the whole multicover) that is itself a uniform
/// multicover. Returns the lexicographically first hit, or nullopt. Throws
/// std::domain_error when total multiplicity exceeds the search cap.
std::optional<UniformMulticover> sub_multicover_search(const UniformMulticover& mc);

/// Search cap for sub_multicover_search (total multiplicity).
inline constexpr int kSubMulticoverSearchCap = 24;

} // namespace car
