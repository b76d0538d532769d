#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"
#include "oracle.hpp"
#include "vqe/pauli.hpp"

#include <random>

using namespace vqe;
using oracle::string_matrix;
using oracle::sum_matrix;

TEST_CASE("string parse/print round trip and weight") {
    const PauliString p = PauliString::parse("ZIXY");
    CHECK(p.str() == "ZIXY");
    CHECK(p.n_qubits() == 4);
    CHECK(p.weight() == 3);
    CHECK(p.y_count() == 1);
    CHECK(PauliString(3).is_identity());
    CHECK_THROWS_AS(PauliString::parse("XQ"), parse_error);
}

TEST_CASE("multiply_strings basic identities") {
    const auto [phase_xy, prod_xy] =
        multiply_strings(PauliString::parse("X"), PauliString::parse("Y"));
    CHECK(prod_xy.str() == "Z");
    CHECK(phase_xy == cplx(0, 1));

    for (const char* w : {"I", "X", "Y", "Z"}) {
        const auto [ph, pr] = multiply_strings(PauliString::parse(w), PauliString::parse(w));
        CHECK(pr.is_identity());
        CHECK(ph == cplx(1, 0));
    }

    // Per qubit: X*Z = -iY and Z*X = +iY, so the phases cancel.
    const auto [ph2, pr2] = multiply_strings(PauliString::parse("XZ"), PauliString::parse("ZX"));
    CHECK(pr2.str() == "YY");
    CHECK(ph2 == cplx(1, 0));
    CHECK_THROWS_AS(multiply_strings(PauliString::parse("X"), PauliString::parse("XX")),
                    dimension_error);
}

TEST_CASE("multiply_strings matches the dense oracle on random draws") {
    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 200; ++trial) {
        const auto a = oracle::random_string(3, rng);
        const auto b = oracle::random_string(3, rng);
        const auto [phase, product] = multiply_strings(a, b);
        const Eigen::MatrixXcd lhs = string_matrix(a) * string_matrix(b);
        const Eigen::MatrixXcd rhs = phase * string_matrix(product);
        CHECK((lhs - rhs).cwiseAbs().maxCoeff() < 1e-12);
    }
}

TEST_CASE("multiplication group property: right-multiplying twice restores the string") {
    std::mt19937_64 rng(12);
    for (int trial = 0; trial < 100; ++trial) {
        const auto a = oracle::random_string(4, rng);
        const auto b = oracle::random_string(4, rng);
        const auto once = multiply_strings(a, b);
        const auto twice = multiply_strings(once.product, b);
        CHECK(twice.product == a);
        CHECK(std::abs(std::abs(once.phase * twice.phase) - 1.0) < 1e-12);
    }
}

TEST_CASE("commutes in both modes") {
    const auto zz = PauliString::parse("ZZ");
    const auto xx = PauliString::parse("XX");
    CHECK(commutes(zz, xx, CommuteMode::general));
    CHECK_FALSE(commutes(zz, xx, CommuteMode::qubitwise));
    CHECK(commutes(PauliString::parse("ZI"), PauliString::parse("IZ"), CommuteMode::general));
    CHECK(commutes(PauliString::parse("ZI"), PauliString::parse("IZ"), CommuteMode::qubitwise));
}

TEST_CASE("general commutes agrees with the dense commutator on all 3-qubit pairs") {
    std::vector<PauliString> all;
    for (int a = 0; a < 4; ++a) {
        for (int b = 0; b < 4; ++b) {
            for (int c = 0; c < 4; ++c) {
                PauliString p(3);
                p.set(0, static_cast<Letter>(a));
                p.set(1, static_cast<Letter>(b));
                p.set(2, static_cast<Letter>(c));
                all.push_back(p);
            }
        }
    }
    for (const auto& a : all) {
        for (const auto& b : all) {
            const Eigen::MatrixXcd comm =
                string_matrix(a) * string_matrix(b) - string_matrix(b) * string_matrix(a);
            CHECK(commutes(a, b, CommuteMode::general) == (comm.cwiseAbs().maxCoeff() < 1e-12));
        }
    }
}

TEST_CASE("PauliSum algebra matches the dense oracle") {
    std::mt19937_64 rng(13);
    for (int trial = 0; trial < 30; ++trial) {
        const auto a = oracle::random_hermitian_sum(3, 4, rng);
        const auto b = oracle::random_antihermitian_sum(3, 4, rng);
        CHECK((sum_matrix(a + b) - (sum_matrix(a) + sum_matrix(b))).cwiseAbs().maxCoeff() < 1e-12);
        CHECK((sum_matrix(a - b) - (sum_matrix(a) - sum_matrix(b))).cwiseAbs().maxCoeff() < 1e-12);
        CHECK((sum_matrix(a * b) - sum_matrix(a) * sum_matrix(b)).cwiseAbs().maxCoeff() < 1e-11);
        CHECK((sum_matrix(a * cplx(0.5, 0.25)) - cplx(0.5, 0.25) * sum_matrix(a))
                  .cwiseAbs()
                  .maxCoeff() < 1e-12);
    }
}

TEST_CASE("hermiticity flags follow the coefficients") {
    PauliSum h(2);
    h.add(PauliString::parse("XZ"), 0.5);
    h.add(PauliString::parse("ZI"), -1.25);
    CHECK(h.is_hermitian());
    CHECK_FALSE(h.is_antihermitian());
    PauliSum a(2);
    a.add(PauliString::parse("XY"), cplx(0, 0.75));
    CHECK(a.is_antihermitian());
    CHECK_FALSE(a.is_hermitian());
}

TEST_CASE("simplification drops tiny coefficients and is idempotent") {
    PauliSum s(2);
    s.add(PauliString::parse("XX"), 1.0);
    s.add(PauliString::parse("XX"), -1.0 + 1e-15);
    CHECK(s.empty());
    PauliSum t(2);
    t.add(PauliString::parse("ZZ"), 0.5);
    t.add(PauliString::parse("ZZ"), 0.5);
    CHECK(t.size() == 1);
    CHECK(t.coefficient(PauliString::parse("ZZ")).real() == doctest::Approx(1.0));
}

TEST_CASE("commutator examples and dense oracle") {
    PauliSum z(1), ix(1);
    z.add(PauliString::parse("Z"), 1.0);
    ix.add(PauliString::parse("X"), cplx(0, 1));
    CHECK(commutator(z, z).empty());
    const PauliSum c = commutator(z, ix);
    CHECK(c.size() == 1);
    CHECK(c.coefficient(PauliString::parse("Y")) == cplx(-2, 0));

    std::mt19937_64 rng(14);
    for (int trial = 0; trial < 20; ++trial) {
        const auto h = oracle::random_hermitian_sum(3, 5, rng);
        const auto a = oracle::random_antihermitian_sum(3, 5, rng);
        const auto comm = commutator(h, a);
        CHECK(comm.is_hermitian());
        const Eigen::MatrixXcd dense =
            sum_matrix(h) * sum_matrix(a) - sum_matrix(a) * sum_matrix(h);
        CHECK((sum_matrix(comm) - dense).cwiseAbs().maxCoeff() < 1e-11);
    }
}

TEST_CASE("strip_z_chain clears Z letters outside the support") {
    PauliSum p(5);
    p.add(PauliString::parse("XZZZY"), cplx(0, 1));
    const PauliSum stripped = strip_z_chain(p, {0, 4});
    CHECK(stripped.size() == 1);
    CHECK(stripped.coefficient(PauliString::parse("XIIIY")) == cplx(0, 1));

    PauliSum q(6);
    q.add(PauliString::parse("IXZZZY"), cplx(0, 0.25));
    const PauliSum sq = strip_z_chain(q, {1, 5});
    CHECK(sq.coefficient(PauliString::parse("IXIIIY")) == cplx(0, 0.25));

    PauliSum r(3);
    r.add(PauliString::parse("XZY"), 1.0);
    CHECK(strip_z_chain(r, {0, 1, 2}).terms() == r.terms());
}

TEST_CASE("jordan_wigner of single ladder operators") {
    FermionSum create0;
    create0.terms.push_back({1.0, {{0, true}}});
    const PauliSum jw0 = jordan_wigner(create0, 1);
    CHECK(jw0.coefficient(PauliString::parse("X")) == cplx(0.5, 0));
    CHECK(jw0.coefficient(PauliString::parse("Y")) == cplx(0, -0.5));

    FermionSum create1;
    create1.terms.push_back({1.0, {{1, true}}});
    const PauliSum jw1 = jordan_wigner(create1, 2);
    CHECK(jw1.coefficient(PauliString::parse("ZX")) == cplx(0.5, 0));
    CHECK(jw1.coefficient(PauliString::parse("ZY")) == cplx(0, -0.5));

    CHECK_THROWS_AS(jordan_wigner(create1, 1), dimension_error);
}

TEST_CASE("jordan_wigner preserves canonical anticommutators on 4 orbitals") {
    const int n = 4;
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            FermionSum ai, ajd;
            ai.terms.push_back({1.0, {{i, false}}});
            ajd.terms.push_back({1.0, {{j, true}}});
            const PauliSum A = jordan_wigner(ai, n);
            const PauliSum B = jordan_wigner(ajd, n);
            const PauliSum anti = A * B + B * A;
            if (i == j) {
                CHECK(anti.size() == 1);
                CHECK(anti.coefficient(PauliString(n)) == cplx(1, 0));
            } else {
                CHECK(anti.empty());
            }
            // {a_i, a_j} always vanishes.
            FermionSum aj;
            aj.terms.push_back({1.0, {{j, false}}});
            const PauliSum C = jordan_wigner(aj, n);
            CHECK((A * C + C * A).empty());
        }
    }
}

TEST_CASE("jordan_wigner of T - T^dagger is antihermitian") {
    std::mt19937_64 rng(15);
    std::uniform_int_distribution<int> orb(0, 3);
    std::normal_distribution<double> coeff(0, 1);
    for (int trial = 0; trial < 25; ++trial) {
        FermionSum t;
        for (int k = 0; k < 3; ++k) {
            FermionTerm term;
            term.coeff = cplx(coeff(rng), coeff(rng));
            const int len = 1 + (trial + k) % 4;
            for (int m = 0; m < len; ++m) term.ops.push_back({orb(rng), m % 2 == 0});
            t.terms.push_back(term);
        }
        FermionSum anti = t;
        anti -= t.adjoint();
        const PauliSum mapped = jordan_wigner(anti, 4);
        CHECK(mapped.is_antihermitian());
    }
}

TEST_CASE("fermion term token parsing") {
    const auto ops = FermionSum::parse_ops("3^ 1");
    REQUIRE(ops.size() == 2);
    CHECK(ops[0].orbital == 3);
    CHECK(ops[0].dagger);
    CHECK(ops[1].orbital == 1);
    CHECK_FALSE(ops[1].dagger);
    CHECK(FermionSum::parse_ops("").empty());
    CHECK_THROWS_AS(FermionSum::parse_ops("2^^"), parse_error);
}

TEST_CASE("normalize_leading scales the largest magnitude to 1") {
    PauliSum a(2);
    a.add(PauliString::parse("XY"), cplx(0, 0.25));
    a.add(PauliString::parse("YX"), cplx(0, -0.125));
    const PauliSum norm = normalize_leading(a);
    CHECK(norm.leading_magnitude() == doctest::Approx(1.0));
    CHECK(norm.is_antihermitian());
}
