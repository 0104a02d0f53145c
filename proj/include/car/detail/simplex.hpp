#pragma once

#include <car/rational.hpp>

#include <vector>

namespace car::lp {

/// min c.x subject to A x = b, x >= 0, in exact rational arithmetic.
struct Problem {
    std::vector<std::vector<Rat>> a; // m x n
    std::vector<Rat> b;              // m
    std::vector<Rat> c;              // n
};

struct Result {
    enum class Status { Optimal, Infeasible, Unbounded };
    Status status;
    Rat objective;
    std::vector<Rat> x;
};

/// Two-phase primal simplex with Bland's rule (anti-cycling, hence finite).
/// Exact throughout; intended for the small systems this library builds.
Result solve(const Problem& p);

} // namespace car::lp
