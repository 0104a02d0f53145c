#pragma once

#include <car/linsolve.hpp>
#include <car/types.hpp>

#include <optional>
#include <variant>
#include <vector>

namespace car {

/// Enumeration cap for whole-space extreme enumeration and the CCAR test:
/// the number of covers grows doubly exponentially with n.
inline constexpr int kEnumerationCap = 5;

/// All extreme CAR mechanisms of a sample space, deduplicated (no two share
/// a support) and canonically ordered.
struct ExtremeCatalog {
    SampleSpace space;
    std::vector<CarMechanism> mechanisms;
};

/// Classification of a cover against the vertex conditions: the incidence
/// system M z = 1 must have a unique, strictly positive solution.
struct FarkasReport {
    struct ExtremeOk {
        std::vector<Rat> z;
    };
    struct RankDeficient {
        int rank;
    };
    struct NonPositive {
        std::vector<Rat> z;
        int zero_index; // 1-based coordinate of the first non-positive entry
    };
    /// No solution at all; y certifies it: y.M >= 0 componentwise, y.1 < 0.
    struct InfeasibleCert {
        std::vector<BigInt> y;
    };
    /// The certificate found exceeds the documented entry bound m*n.
    struct Inconclusive {
        std::string reason;
    };
    std::variant<ExtremeOk, RankDeficient, NonPositive, InfeasibleCert, Inconclusive> kind;
};

/// A CCAR decomposition: positive weights on partitions of E, re-mixing to
/// the source mechanism exactly.
struct CcarDecomposition {
    std::vector<std::pair<Rat, Cover>> terms;
};

/// Raw per-set values of a (possibly inexact) CAR table, as parsed from
/// decimal input. Rows need not normalize exactly.
struct ApproxCarTable {
    SampleSpace space;
    std::map<std::uint32_t, Rat> values;
};

/// True iff the mechanism is a vertex of the CAR polytope: its support's
/// incidence system has a unique, strictly positive solution. The unique
/// solution must then coincide with the mechanism's own probabilities; a
/// mismatch means the input is corrupted and throws std::logic_error.
bool is_extreme(const CarMechanism& mech);

/// Every extreme CAR mechanism of the space, found by enumerating and
/// testing all covers with at most n sets. Requires n <= kEnumerationCap.
ExtremeCatalog enumerate_extremes(SampleSpace space);

/// Extreme mechanisms whose support lies within the given sets. Used for
/// fitting; the candidate covers are drawn from `allowed` only.
std::vector<CarMechanism> extremes_within(SampleSpace space, const std::vector<Subset>& allowed);

/// Writes the mechanism as a convex combination of extreme mechanisms by
/// Caratheodory peeling: walk to a vertex of the face spanned by the current
/// support, peel it off with the largest feasible weight, recurse on the
/// residual. At most |support| terms.
MixtureDecomposition decompose(const CarMechanism& mech);

/// Is the mechanism a mixture of partition mechanisms? Returns one exact
/// decomposition when so. Requires n <= kEnumerationCap.
std::optional<CcarDecomposition> is_ccar(const CarMechanism& mech);

FarkasReport farkas_report(const Cover& cover);

/// Replaces a numerically-normalized table with an exact rational CAR
/// mechanism within max-norm distance epsilon, support contained in the
/// input's. Fits weights over the extreme mechanisms of the support face,
/// rounds them to bounded denominators, and re-mixes exactly.
CarMechanism rationalize(const ApproxCarTable& approx, const Rat& epsilon);

/// Best rational approximation helper: the continued-fraction convergent of
/// `target` with the smallest denominator within `tolerance`.
Rat best_rational_within(const Rat& target, const Rat& tolerance);

} // namespace car
