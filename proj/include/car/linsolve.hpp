#pragma once

#include <car/types.hpp>

#include <optional>
#include <variant>
#include <vector>

namespace car {

/// 0/1 incidence matrix of a cover: rows indexed by elements x of E, columns
/// by the cover sets in canonical (ascending mask) order, entry 1 iff x is in
/// the set. Every row and every column carries at least one 1. Columns are
/// stored as bitmasks over the rows, so at most 32 rows are representable.
class IncidenceMatrix {
public:
    IncidenceMatrix(int rows, std::vector<std::uint32_t> column_masks);

    int rows() const { return rows_; }
    int cols() const { return static_cast<int>(cols_.size()); }
    /// row and col are 0-based here; element x corresponds to row x-1.
    bool entry(int row, int col) const { return (cols_[col] >> row) & 1u; }
    std::uint32_t column_mask(int col) const { return cols_[col]; }

private:
    int rows_;
    std::vector<std::uint32_t> cols_;
};

IncidenceMatrix incidence(const Cover& cover);

struct Unique {
    std::vector<Rat> z;
};
struct Indeterminate {
    int rank = 0;
    std::optional<std::vector<Rat>> particular;
};
struct Infeasible {};

/// Exact classification of the system M z = 1.
///   Unique        — M has full column rank and z is the one solution.
///   Indeterminate — consistent but rank < cols; carries one particular
///                   solution (free coordinates set to zero).
///   Infeasible    — no rational solution exists.
using SolveOutcome = std::variant<Unique, Indeterminate, Infeasible>;

SolveOutcome solve_ones(const IncidenceMatrix& m);

/// True when M z = b holds exactly.
bool check_solution(const IncidenceMatrix& m, const std::vector<Rat>& z, const Rat& rhs);

namespace linalg {

/// Row echelon form of an integer matrix, computed by fraction-free
/// (Bareiss) elimination. Entries stay integral throughout: every
/// intermediate value is a minor of the input, and each division by the
/// previous pivot is exact (Sylvester's identity). Pivoting is
/// deterministic: columns left to right, first row with a nonzero entry.
struct Echelon {
    std::vector<std::vector<BigInt>> a;      // the echelon matrix
    std::vector<std::pair<int, int>> pivots; // (row, col), ascending
    int rank = 0;
    /// Tracks row operations when requested: rowops * input == a, with the
    /// same determinant scaling applied to both sides.
    std::vector<std::vector<BigInt>> rowops;
};

/// pivot_cols limits pivoting to the first pivot_cols columns; trailing
/// columns (e.g. an augmented right-hand side) are transformed but never
/// chosen as pivots.
Echelon eliminate(std::vector<std::vector<BigInt>> a, int pivot_cols, bool track_rowops);

/// A nonzero rational vector d with M d = 0, or nullopt when the columns of
/// M are independent. Deterministic: the first dependent column gets
/// coefficient 1, later free columns 0.
std::optional<std::vector<Rat>> null_direction(const IncidenceMatrix& m);

/// Dense integer copy of the incidence matrix, optionally augmented with a
/// column of ones.
std::vector<std::vector<BigInt>> to_dense(const IncidenceMatrix& m, bool augment_ones);

} // namespace linalg

} // namespace car
