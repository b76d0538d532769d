#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"
#include "oracle.hpp"
#include "vqe/chem.hpp"

#include <cmath>

using namespace vqe;

TEST_CASE("bundled H2 problem: structure and golden coefficients") {
    const MolecularProblem p = h2_problem();
    p.validate();
    CHECK(p.n_spin_orbitals == 4);
    CHECK(p.n_electrons == 2);
    CHECK(p.ordering == OrbitalOrdering::alternating);
    CHECK(p.hamiltonian.size() == 15);

    CHECK(p.hamiltonian.coefficient(PauliString(4)).real() ==
          doctest::Approx(-0.09706626816762856).epsilon(1e-12));
    const double xxyy = 0.04530261550379927;
    CHECK(p.hamiltonian.coefficient(PauliString::parse("XXYY")).real() ==
          doctest::Approx(-xxyy).epsilon(1e-9));
    CHECK(p.hamiltonian.coefficient(PauliString::parse("YYXX")).real() ==
          doctest::Approx(-xxyy).epsilon(1e-9));
    CHECK(p.hamiltonian.coefficient(PauliString::parse("XYYX")).real() ==
          doctest::Approx(xxyy).epsilon(1e-9));
    CHECK(p.hamiltonian.coefficient(PauliString::parse("YXXY")).real() ==
          doctest::Approx(xxyy).epsilon(1e-9));
    CHECK(p.hamiltonian.is_hermitian());
    CHECK(p.fermionic_hamiltonian.has_value());
}

TEST_CASE("fermionic H2 form maps onto the qubit form") {
    const MolecularProblem p = h2_problem();
    REQUIRE(p.fermionic_hamiltonian.has_value());
    const PauliSum mapped = jordan_wigner(*p.fermionic_hamiltonian, 4);
    const PauliSum diff = mapped - p.hamiltonian;
    double worst = 0;
    for (const auto& [str, coeff] : diff) worst = std::max(worst, std::abs(coeff));
    CHECK(worst < 1e-9);
}

TEST_CASE("H2 reference energies") {
    const MolecularProblem p = h2_problem();
    const auto [e0, psi0] = exact_ground(p.hamiltonian);
    CHECK(e0 == doctest::Approx(-1.137283834).epsilon(1e-7));
    const StateVector hf = hartree_fock_state(p);
    CHECK(expectation(p.hamiltonian, hf) == doctest::Approx(-1.116759307).epsilon(1e-7));
    // Dense cross-check of the ground energy.
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(oracle::sum_matrix(p.hamiltonian));
    CHECK(e0 == doctest::Approx(es.eigenvalues()(0)).epsilon(1e-12));
}

TEST_CASE("hartree_fock_state fills the lowest orbitals per ordering") {
    MolecularProblem p = h2_problem();
    StateVector hf = hartree_fock_state(p);
    CHECK(hf[0b0011] == cplx(1, 0));  // alternating: spin orbitals 0 and 1

    p.ordering = OrbitalOrdering::block;
    hf = hartree_fock_state(p);
    CHECK(hf[0b0101] == cplx(1, 0));  // block: alpha 0 and beta 0 sit on qubits 0 and 2
}

TEST_CASE("problem text round trip") {
    const MolecularProblem p = h2_problem();
    const std::string text = format_problem(p);
    const MolecularProblem q = parse_problem(text);
    CHECK(q.name == p.name);
    CHECK(q.n_spin_orbitals == p.n_spin_orbitals);
    CHECK(q.n_electrons == p.n_electrons);
    CHECK(q.ordering == p.ordering);
    CHECK(q.hamiltonian.size() == p.hamiltonian.size());
    for (const auto& [str, coeff] : p.hamiltonian) {
        CHECK(std::abs(q.hamiltonian.coefficient(str) - coeff) < 1e-12);
    }
    REQUIRE(q.fermionic_hamiltonian.has_value());
    CHECK(q.fermionic_hamiltonian->terms.size() == p.fermionic_hamiltonian->terms.size());
}

TEST_CASE("parse_problem rejects malformed input with line numbers") {
    CHECK_THROWS_AS(parse_problem("n_qubits=2\nn_electrons=1\nbogus line\n"), parse_error);
    CHECK_THROWS_AS(parse_problem("n_qubits=2\n0.5 XQ\n"), parse_error);
    try {
        parse_problem("n_qubits=2\nn_electrons=1\n0.5 XYZ\n");
        CHECK(false);
    } catch (const parse_error& e) {
        CHECK(e.line_number == 3);
    }
}

TEST_CASE("estimate_shots follows the additive-dispersion bound") {
    const MolecularProblem p = h2_problem();
    double weight = 0;
    for (const auto& [str, coeff] : p.hamiltonian) {
        if (!str.is_identity()) weight += std::abs(coeff);
    }
    const double eps = 1.59e-3;
    const long long want = static_cast<long long>(std::ceil(weight * weight / (eps * eps)));
    CHECK(estimate_shots(p.hamiltonian, eps) == want);
    // Quadrupling precision costs 16x the shots (up to ceil rounding).
    const double ratio = double(estimate_shots(p.hamiltonian, eps / 4)) / double(want);
    CHECK(ratio == doctest::Approx(16.0).epsilon(1e-6));
}

TEST_CASE("make_shot_plan conserves the total and tracks the weights") {
    const MolecularProblem p = h2_problem();
    const long long total = 100000;
    const ShotPlan plan = make_shot_plan(p.hamiltonian, total);
    long long sum = 0;
    double weight = 0;
    for (const auto& [str, coeff] : p.hamiltonian) {
        if (!str.is_identity()) weight += std::abs(coeff);
    }
    for (const auto& [str, shots] : plan.per_string) {
        CHECK_FALSE(str.is_identity());
        sum += shots;
        const double ideal = std::abs(p.hamiltonian.coefficient(str)) / weight * total;
        CHECK(std::abs(double(shots) - ideal) < 1.0);  // largest-remainder rounding
    }
    CHECK(sum == total);
    CHECK(plan.total_shots == total);
    CHECK(plan.per_string.size() == 14);
}

TEST_CASE("group_commuting: the two-qubit reference set") {
    PauliSum h(2);
    for (const char* w : {"ZI", "IZ", "ZZ", "XI", "IX", "XX", "XZ", "ZX"}) {
        h.add(PauliString::parse(w), 1.0);
    }
    const auto qw = group_commuting(h, CommuteMode::qubitwise);
    const auto gen = group_commuting(h, CommuteMode::general);
    CHECK(qw.size() == 4);
    CHECK(gen.size() == 3);

    // Every group must be internally commuting in its mode, and cover all strings.
    for (const auto& [mode, groups] :
         {std::pair{CommuteMode::qubitwise, qw}, std::pair{CommuteMode::general, gen}}) {
        std::size_t covered = 0;
        for (const auto& g : groups) {
            covered += g.size();
            for (std::size_t a = 0; a < g.size(); ++a) {
                for (std::size_t b = a + 1; b < g.size(); ++b) {
                    CHECK(commutes(g[a], g[b], mode));
                }
            }
        }
        CHECK(covered == h.size());
    }
}

TEST_CASE("group_commuting excludes the identity and respects the greedy order") {
    const MolecularProblem p = h2_problem();
    const auto groups = group_commuting(p.hamiltonian, CommuteMode::qubitwise);
    std::size_t covered = 0;
    for (const auto& g : groups) {
        covered += g.size();
        for (const auto& s : g) CHECK_FALSE(s.is_identity());
        for (std::size_t a = 0; a < g.size(); ++a) {
            for (std::size_t b = a + 1; b < g.size(); ++b) {
                CHECK(commutes(g[a], g[b], CommuteMode::qubitwise));
            }
        }
    }
    CHECK(covered == p.hamiltonian.size() - 1);
    // General commutation can only merge groups, never split them.
    CHECK(group_commuting(p.hamiltonian, CommuteMode::general).size() <= groups.size());
}

TEST_CASE("save/load round trip through a file") {
    const MolecularProblem p = h2_problem();
    const std::string path = "/tmp/test_chem_roundtrip.ham";
    save_problem(p, path);
    const MolecularProblem q = load_problem(path);
    CHECK(q.hamiltonian.size() == p.hamiltonian.size());
    CHECK(q.n_electrons == p.n_electrons);
    CHECK_THROWS_AS(load_problem("/tmp/definitely_missing_file.ham"), parse_error);
}
