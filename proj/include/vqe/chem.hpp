#pragma once

#include <optional>
#include <string>
#include <vector>

#include "vqe/ordering.hpp"
#include "vqe/pauli.hpp"
#include "vqe/simstate.hpp"

namespace vqe {

struct MolecularProblem {
    std::string name;
    int n_spin_orbitals = 0;
    int n_electrons = 0;
    OrbitalOrdering ordering = OrbitalOrdering::alternating;
    PauliSum hamiltonian;
    std::optional<FermionSum> fermionic_hamiltonian;
    std::string geometry_tag;

    void validate() const;
};

// Text format (.ham): header lines `n_qubits=`, `n_electrons=`,
// `ordering=alternating|block`, `name=`, optional `geometry=`; then one term
// per line `<real> [<imag>] <pauli-word>`; `#` comments. An optional
// `[fermionic]` section holds `<real> [<imag>] <ladder tokens>` lines.
MolecularProblem load_problem(const std::string& path);
MolecularProblem parse_problem(const std::string& text);
std::string format_problem(const MolecularProblem& p);
void save_problem(const MolecularProblem& p, const std::string& path);

// The bundled 4-qubit H2 problem at the equilibrium distance (STO-3G, both
// qubit and fermionic forms embedded as golden data).
MolecularProblem h2_problem();

StateVector hartree_fock_state(const MolecularProblem& p);

// M = ceil((sum_i |h_i|)^2 / eps^2), identity excluded.
long long estimate_shots(const PauliSum& h, double epsilon);

struct ShotPlan {
    long long total_shots = 0;
    std::vector<std::pair<PauliString, long long>> per_string;
};

// Allocation proportional to |h_i| with largest-remainder rounding.
ShotPlan make_shot_plan(const PauliSum& h, long long total);

// Greedy first-fit over strings sorted by descending |coefficient|
// (ties broken lexicographically). Identity excluded.
std::vector<std::vector<PauliString>> group_commuting(const PauliSum& h, CommuteMode mode);

inline constexpr double kChemicalAccuracy = 1.59e-3;  // Hartree, ~1 kcal/mol

}  // namespace vqe
