#pragma once

#include <car/types.hpp>

#include <vector>

namespace car {

/// Range cap for the inductive matrix family.
inline constexpr int kFibMatrixMaxN = 30;

/// The inductively defined 0/1 family: S_1 = (1); for odd n the next matrix
/// bords S_n with a leading 1 and zeros, for even n with a leading 0 and
/// ones:
///
///   odd n:  S_{n+1} = [ 1  0...0 ]     even n:  S_{n+1} = [ 0  1...1 ]
///                     [ 0.  S_n  ]               [ 1.  S_n  ]
class FibMatrix {
public:
    explicit FibMatrix(int n);

    int n() const { return n_; }
    int entry(int row, int col) const { return m_[row][col]; } // 0-based
    /// Column as a bitmask over rows (bit i = row i).
    std::uint32_t column_mask(int col) const;

    std::string str() const;

    friend bool operator==(const FibMatrix& a, const FibMatrix& b) { return a.m_ == b.m_; }

private:
    int n_;
    std::vector<std::vector<int>> m_;
};

FibMatrix fib_matrix(int n);

/// F_1 = F_2 = 1, F_j = F_{j-1} + F_{j-2}.
BigInt fibonacci_number(int n);

struct FibSolution {
    std::vector<Rat> z; // the unique solution of S_n z = 1
    BigInt height;      // lcm of the solution denominators, equals F_n
};

/// Solves S_n z = 1 exactly for odd n and checks the closed form: z_j =
/// F_{n-j}/F_n for j < n and z_n = 1/F_n, all strictly positive, with
/// denominator lcm F_n. A solver/closed-form disagreement is a hard failure
/// (std::logic_error). Even n is rejected with std::domain_error.
FibSolution fib_solution(int n);

/// The extreme CAR mechanism read off S_n: column j is the subset of
/// elements with a 1 in that column, with probability z_j. Requires odd n
/// within the sample-space cap.
CarMechanism fib_as_mechanism(int n);

} // namespace car
