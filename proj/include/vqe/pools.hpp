#pragma once

#include <string>
#include <vector>

#include "vqe/chem.hpp"
#include "vqe/ordering.hpp"
#include "vqe/pauli.hpp"

namespace vqe {

struct PoolOperator {
    PauliSum op;  // antihermitian, rescaled so the leading |coefficient| is 1
    std::vector<int> source_orbitals;
    enum class Kind { single, double_ } kind = Kind::single;
    std::string family;
};

struct Pool {
    std::string family;
    int n_spin_orbitals = 0;
    std::vector<PoolOperator> operators;

    std::size_t size() const { return operators.size(); }
};

// Generalized spin-conserving singles and doubles, Jordan-Wigner mapped.
Pool build_gsd(int n_spin_orbitals, OrbitalOrdering ordering);

// Spin-adapted generalized singles/doubles: tau1 plus the triplet (1/sqrt(12))
// and singlet (1/2) double combinations.
Pool build_sgsd(int n_spin_orbitals, OrbitalOrdering ordering);

// Spin-complemented generalized singles/doubles (classes tau2A/B/C).
Pool build_scgsd(int n_spin_orbitals, OrbitalOrdering ordering);

// Every distinct string of the SCGSD pool as its own operator i*P.
// keep_z_chain=false strips Z letters outside each source excitation.
Pool build_qubit_pool(int n_spin_orbitals, OrbitalOrdering ordering, bool keep_z_chain);

// Qubit-excitation families derived from the GSD excitations.
// format: 4 letters over {X,Y} with an odd Y count, applied to (q,p,s,r).
Pool build_one_pool(int n_spin_orbitals, OrbitalOrdering ordering, const std::string& format);
Pool build_two_pool(int n_spin_orbitals, OrbitalOrdering ordering, const std::string& format);
Pool build_four_pool(int n_spin_orbitals, OrbitalOrdering ordering, const std::string& format);
Pool build_eight_pool(int n_spin_orbitals, OrbitalOrdering ordering);

// 2N-2 operators: i Z_k Y_{k+1} and i Y_k.
Pool build_min_g(int n_qubits);

// Occupied -> virtual spin-conserving singles and doubles relative to the
// Hartree-Fock occupation; used as a fixed ansatz.
Pool build_uccsd(const MolecularProblem& problem);

// Family name dispatch for the CLI ("GSD", "SGSD", "SCGSD", "QUBIT",
// "QUBIT_NO_Z", "ONE", "TWO", "FOUR", "EIGHT", "MIN_G").
Pool build_pool(const std::string& family, int n_spin_orbitals, OrbitalOrdering ordering,
                const std::string& format = "XXYX");

}  // namespace vqe
