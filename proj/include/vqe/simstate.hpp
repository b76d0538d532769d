#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

#include "vqe/ordering.hpp"
#include "vqe/pauli.hpp"

namespace vqe {

// 2^n complex amplitudes; basis index b stores qubit k in bit k.
class StateVector {
public:
    StateVector() = default;
    explicit StateVector(int n_qubits)
        : n_(n_qubits), amp_(std::size_t{1} << n_qubits, cplx(0, 0)) {
        amp_[0] = 1.0;
    }

    static StateVector basis_state(int n_qubits, std::uint64_t index);

    int n_qubits() const { return n_; }
    std::uint64_t dim() const { return amp_.size(); }
    cplx& operator[](std::uint64_t i) { return amp_[i]; }
    const cplx& operator[](std::uint64_t i) const { return amp_[i]; }
    const std::vector<cplx>& amplitudes() const { return amp_; }
    std::vector<cplx>& amplitudes() { return amp_; }

    double norm() const;
    void normalize();

private:
    int n_ = 0;
    std::vector<cplx> amp_;
};

cplx inner_product(const StateVector& a, const StateVector& b);

// Permutation-plus-phase action of a single string. The _serial variant is the
// reference kernel; the default dispatches to OpenMP for large registers.
StateVector apply_string(const PauliString& p, const StateVector& s);
StateVector apply_string_serial(const PauliString& p, const StateVector& s);

// a|s> for a general sum (not unitary in general).
StateVector apply_sum(const PauliSum& a, const StateVector& s);

// exp(theta*a)|s> by the Taylor recurrence v_{m+1} = theta*a*v_m/(m+1),
// truncated when ||v_m|| < 1e-14 (hard cap 200 terms). Requires a antihermitian.
StateVector apply_exponential(const PauliSum& a, double theta, const StateVector& s);

double expectation(const PauliSum& h, const StateVector& s);
double expectation_serial(const PauliSum& h, const StateVector& s);

// Lowest eigenpair of the dense matrix of h. Dense only; n_qubits <= 14.
std::pair<double, StateVector> exact_ground(const PauliSum& h);

// (prod_k e^{-i H_k t/reps})^reps; every factor is exact.
StateVector trotter_apply(const std::vector<PauliSum>& terms, double t, int reps,
                          const StateVector& s);

class DensityMatrix {
public:
    DensityMatrix() = default;
    explicit DensityMatrix(int n_qubits)
        : n_(n_qubits),
          m_(Eigen::MatrixXcd::Zero(std::int64_t{1} << n_qubits, std::int64_t{1} << n_qubits)) {
        m_(0, 0) = 1.0;
    }
    static DensityMatrix from_pure(const StateVector& s);
    static DensityMatrix maximally_mixed(int n_qubits);

    int n_qubits() const { return n_; }
    std::int64_t dim() const { return m_.rows(); }
    Eigen::MatrixXcd& matrix() { return m_; }
    const Eigen::MatrixXcd& matrix() const { return m_; }

private:
    int n_ = 0;
    Eigen::MatrixXcd m_;
};

double purity(const DensityMatrix& rho);
double fidelity_pure(const DensityMatrix& rho, const StateVector& psi);
double expectation(const PauliSum& h, const DensityMatrix& rho);

// Basis-state classification by particle number and Sz relative to the
// (n_electrons, ordering) target sector.
struct CompositionReport {
    int correct_count = 0;
    double correct_probability = 0;
    int altered_particle_count = 0;
    double altered_particle_probability = 0;
    int altered_sz_count = 0;  // correct particle number, wrong Sz
    double altered_sz_probability = 0;
};

CompositionReport determinant_composition(const StateVector& s, OrbitalOrdering ordering,
                                          int n_electrons);

}  // namespace vqe
