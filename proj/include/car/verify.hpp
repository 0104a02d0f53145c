#pragma once

#include <car/types.hpp>

#include <optional>

namespace car {

/// A violating triple: two elements of the same observed set with different
/// conditional probabilities. Probabilities are effective values, i.e. an
/// absent table entry counts as zero.
struct CarWitness {
    Subset set;
    int x;
    int x_prime;
    Rat prob_x;
    Rat prob_x_prime;

    std::string str() const;
};

struct CarCheck {
    bool ok;
    std::optional<CarWitness> witness; // lexicographically least (A, x, x') when !ok
};

/// Does the mechanism coarsen at random? True iff for every set A the
/// effective probability pi_A^x is the same for all x in A.
CarCheck is_car(const CoarseningMechanism& mech);

/// Collapses a CAR table to its per-set probabilities. Throws
/// std::domain_error naming the witness when the table is not CAR.
CarMechanism to_car(const CoarseningMechanism& mech);

/// The conditional table of a CAR mechanism: pi_A^x := pi_A for each x in A.
CoarseningMechanism expand(const CarMechanism& mech);

} // namespace car
