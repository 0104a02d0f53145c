#include <car/linsolve.hpp>

#include "doctest.h"
#include "support/oracles.hpp"

#include <random>

using namespace car;
using car::testing::NaiveOutcome;

namespace {

SampleSpace e3(3);

Cover cover3(std::initializer_list<std::initializer_list<int>> sets) {
    std::vector<Subset> subs;
    for (auto s : sets) subs.push_back(Subset::of(s, e3));
    return Cover(e3, subs);
}

BigInt denominator_lcm(const std::vector<Rat>& z) {
    BigInt k = 1;
    for (const Rat& v : z) k = big_lcm(k, v.den());
    return k;
}

BigInt factorial(int m) {
    BigInt f = 1;
    for (int i = 2; i <= m; ++i) f *= i;
    return f;
}

} // namespace

TEST_CASE("incidence of the triangle cover") {
    // canonical column order: {1,2}, {1,3}, {2,3}
    IncidenceMatrix m = incidence(cover3({{1, 2}, {2, 3}, {3, 1}}));
    REQUIRE(m.rows() == 3);
    REQUIRE(m.cols() == 3);
    const int expected[3][3] = {{1, 1, 0}, {1, 0, 1}, {0, 1, 1}};
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) CHECK(m.entry(i, j) == (expected[i][j] == 1));
}

TEST_CASE("incidence of a partition is a permutation-free identity") {
    IncidenceMatrix m = incidence(cover3({{1}, {2}, {3}}));
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) CHECK(m.entry(i, j) == (i == j));
}

TEST_CASE("incidence of the whole-set cover is a ones column") {
    IncidenceMatrix m = incidence(cover3({{1, 2, 3}}));
    REQUIRE(m.cols() == 1);
    for (int i = 0; i < 3; ++i) CHECK(m.entry(i, 0));
}

TEST_CASE("incidence rejects matrices with uncovered rows or empty columns") {
    CHECK_THROWS_AS(IncidenceMatrix(3, {0b011, 0b001}), std::invalid_argument); // row 3 uncovered
    CHECK_THROWS_AS(IncidenceMatrix(3, {0b111, 0}), std::invalid_argument);
}

TEST_CASE("triangle system solves uniquely to one half everywhere") {
    SolveOutcome out = solve_ones(incidence(cover3({{1, 2}, {2, 3}, {3, 1}})));
    auto* u = std::get_if<Unique>(&out);
    REQUIRE(u != nullptr);
    CHECK(u->z == std::vector<Rat>{Rat(1, 2), Rat(1, 2), Rat(1, 2)});
}

TEST_CASE("identity system solves to all ones") {
    SolveOutcome out = solve_ones(incidence(cover3({{1}, {2}, {3}})));
    auto* u = std::get_if<Unique>(&out);
    REQUIRE(u != nullptr);
    CHECK(u->z == std::vector<Rat>{Rat(1), Rat(1), Rat(1)});
}

TEST_CASE("dependent columns give an indeterminate outcome with a particular solution") {
    // canonical order {1,2}, {3}, {1,2,3}: third column is the sum of the others
    IncidenceMatrix m = incidence(cover3({{1, 2}, {3}, {1, 2, 3}}));
    SolveOutcome out = solve_ones(m);
    auto* ind = std::get_if<Indeterminate>(&out);
    REQUIRE(ind != nullptr);
    CHECK(ind->rank == 2);
    REQUIRE(ind->particular.has_value());
    CHECK(check_solution(m, *ind->particular, Rat(1)));
    CHECK(*ind->particular == std::vector<Rat>{Rat(1), Rat(1), Rat(0)});
}

TEST_CASE("a two-set chain over three elements is infeasible") {
    SolveOutcome out = solve_ones(incidence(cover3({{1, 2}, {2, 3}})));
    CHECK(std::holds_alternative<Infeasible>(out));
}

TEST_CASE("unique solutions satisfy the system exactly and deterministically") {
    IncidenceMatrix m = incidence(cover3({{1, 2}, {2, 3}, {3, 1}}));
    SolveOutcome first = solve_ones(m);
    auto* u1 = std::get_if<Unique>(&first);
    REQUIRE(u1 != nullptr);
    for (int rep = 0; rep < 3; ++rep) {
        SolveOutcome out = solve_ones(m);
        auto* u = std::get_if<Unique>(&out);
        REQUIRE(u != nullptr);
        CHECK(check_solution(m, u->z, Rat(1)));
        CHECK(u->z == u1->z);
    }
}

TEST_CASE("solver agrees with an independent rational Gauss-Jordan on all covers, n <= 3") {
    for (int n = 1; n <= 3; ++n) {
        SampleSpace space(n);
        car::testing::for_all_covers(space, [&](const std::vector<std::uint32_t>& masks) {
            IncidenceMatrix m(space.size(), masks);
            SolveOutcome out = solve_ones(m);
            NaiveOutcome oracle = car::testing::naive_solve_ones(m);
            if (auto* u = std::get_if<Unique>(&out)) {
                CHECK(oracle.kind == NaiveOutcome::Kind::Unique);
                CHECK(oracle.z == u->z);
            } else if (auto* ind = std::get_if<Indeterminate>(&out)) {
                CHECK(oracle.kind == NaiveOutcome::Kind::Indeterminate);
                CHECK(oracle.rank == ind->rank);
                REQUIRE(ind->particular.has_value());
                CHECK(check_solution(m, *ind->particular, Rat(1)));
            } else {
                CHECK(oracle.kind == NaiveOutcome::Kind::Infeasible);
            }
        });
    }
}

TEST_CASE("solver agrees with the oracle on random incidence matrices") {
    std::mt19937_64 rng(7);
    int tried = 0;
    while (tried < 500) {
        int rows = 2 + static_cast<int>(rng() % 4);     // 2..5
        int cols = 1 + static_cast<int>(rng() % 6);     // 1..6
        std::uint32_t full = (1u << rows) - 1;
        std::vector<std::uint32_t> masks;
        std::uint32_t covered = 0;
        for (int j = 0; j < cols; ++j) {
            std::uint32_t m = 1 + static_cast<std::uint32_t>(rng() % full);
            masks.push_back(m);
            covered |= m;
        }
        if (covered != full) continue;
        ++tried;
        IncidenceMatrix m(rows, masks);
        SolveOutcome out = solve_ones(m);
        NaiveOutcome oracle = car::testing::naive_solve_ones(m);
        if (auto* u = std::get_if<Unique>(&out)) {
            CHECK(oracle.kind == NaiveOutcome::Kind::Unique);
            CHECK(oracle.z == u->z);
        } else if (auto* ind = std::get_if<Indeterminate>(&out)) {
            CHECK(oracle.kind == NaiveOutcome::Kind::Indeterminate);
            CHECK(oracle.rank == ind->rank);
        } else {
            CHECK(oracle.kind == NaiveOutcome::Kind::Infeasible);
        }
    }
}

TEST_CASE("unique heights respect the factorial bound over all covers, n <= 4") {
    for (int n = 1; n <= 4; ++n) {
        SampleSpace space(n);
        car::testing::for_all_covers(space, [&](const std::vector<std::uint32_t>& masks) {
            SolveOutcome out = solve_ones(IncidenceMatrix(space.size(), masks));
            if (auto* u = std::get_if<Unique>(&out))
                CHECK(denominator_lcm(u->z) <= factorial(static_cast<int>(masks.size())));
        });
    }
}

TEST_CASE("null directions annihilate the matrix and are deterministic") {
    IncidenceMatrix m = incidence(cover3({{1, 2}, {3}, {1, 2, 3}}));
    auto d = linalg::null_direction(m);
    REQUIRE(d.has_value());
    bool nonzero = false;
    for (const Rat& v : *d) nonzero = nonzero || !v.is_zero();
    CHECK(nonzero);
    for (int i = 0; i < m.rows(); ++i) {
        Rat acc(0);
        for (int j = 0; j < m.cols(); ++j)
            if (m.entry(i, j)) acc += (*d)[j];
        CHECK(acc == Rat(0));
    }
    CHECK(linalg::null_direction(incidence(cover3({{1}, {2}, {3}}))) == std::nullopt);
}
