#include <car/fibonacci.hpp>

#include <car/linsolve.hpp>

namespace car {

FibMatrix::FibMatrix(int n) : n_(n) {
    if (n < 1 || n > kFibMatrixMaxN)
        throw std::domain_error("FibMatrix: n must be in [1, " + std::to_string(kFibMatrixMaxN) +
                                "], got " + std::to_string(n));
    m_ = {{1}};
    for (int k = 1; k < n; ++k) {
        // grow S_k -> S_{k+1}
        std::vector<std::vector<int>> next(k + 1, std::vector<int>(k + 1, 0));
        const int corner = (k % 2 == 1) ? 1 : 0;
        const int border = 1 - corner;
        next[0][0] = corner;
        for (int j = 1; j <= k; ++j) {
            next[0][j] = border;
            next[j][0] = border;
        }
        for (int i = 0; i < k; ++i)
            for (int j = 0; j < k; ++j) next[i + 1][j + 1] = m_[i][j];
        m_ = std::move(next);
    }
}

std::uint32_t FibMatrix::column_mask(int col) const {
    std::uint32_t mask = 0;
    for (int i = 0; i < n_; ++i)
        if (m_[i][col]) mask |= 1u << i;
    return mask;
}

std::string FibMatrix::str() const {
    std::string out;
    for (int i = 0; i < n_; ++i) {
        for (int j = 0; j < n_; ++j) {
            if (j) out += ' ';
            out += char('0' + m_[i][j]);
        }
        out += '\n';
    }
    return out;
}

FibMatrix fib_matrix(int n) { return FibMatrix(n); }

BigInt fibonacci_number(int n) {
    if (n < 1) throw std::domain_error("fibonacci_number: n must be positive");
    BigInt a = 1, b = 1; // F_1, F_2
    for (int j = 3; j <= n; ++j) {
        BigInt c = a + b;
        a = b;
        b = c;
    }
    return n == 1 ? a : b;
}

FibSolution fib_solution(int n) {
    if (n % 2 == 0)
        throw std::domain_error("fib_solution: defined for odd n only, got " + std::to_string(n));
    FibMatrix s = fib_matrix(n);

    std::vector<std::uint32_t> cols(n);
    for (int j = 0; j < n; ++j) cols[j] = s.column_mask(j);
    SolveOutcome outcome = solve_ones(IncidenceMatrix(n, cols));
    const Unique* u = std::get_if<Unique>(&outcome);
    if (!u) throw std::logic_error("fib_solution: S_n z = 1 did not solve uniquely");

    // Closed form, compared cross-multiplied so entry-wise reduction cannot
    // interfere: z_j * F_n == F_{n-j} (and z_n * F_n == 1).
    const BigInt fn = fibonacci_number(n);
    for (int j = 1; j <= n; ++j) {
        const Rat& z = u->z[j - 1];
        if (z <= Rat(0)) throw std::logic_error("fib_solution: solution not strictly positive");
        const BigInt expected = (j == n) ? BigInt(1) : fibonacci_number(n - j);
        if (z.num() * fn != z.den() * expected)
            throw std::logic_error("fib_solution: solver disagrees with the closed form at j=" +
                                   std::to_string(j));
    }

    BigInt k = 1;
    for (const Rat& z : u->z) k = big_lcm(k, z.den());
    if (k != fn) throw std::logic_error("fib_solution: denominator lcm " + k.str() + " != F_n");
    return {u->z, k};
}

CarMechanism fib_as_mechanism(int n) {
    if (n > kMaxElements)
        throw std::domain_error("fib_as_mechanism: n=" + std::to_string(n) +
                                " exceeds the sample-space cap " + std::to_string(kMaxElements));
    FibSolution sol = fib_solution(n);
    FibMatrix s = fib_matrix(n);
    SampleSpace space(n);

    std::map<std::uint32_t, Rat> probs;
    for (int j = 0; j < n; ++j) {
        auto [_, inserted] = probs.emplace(s.column_mask(j), sol.z[j]);
        if (!inserted) throw std::logic_error("fib_as_mechanism: duplicate column subsets");
    }
    return CarMechanism(space, probs);
}

} // namespace car
