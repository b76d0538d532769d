#pragma once

#include <Eigen/Dense>
#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "vqe/pauli.hpp"
#include "vqe/simstate.hpp"

namespace vqe {

struct Gate {
    enum class Kind { X, H, RX, RY, RZ, SDG, CNOT };
    Kind kind;
    int q0;            // target (single-qubit) or control (CNOT)
    int q1 = -1;       // CNOT target
    double angle = 0;  // RX/RY/RZ only

    static Gate x(int q) { return {Kind::X, q}; }
    static Gate h(int q) { return {Kind::H, q}; }
    static Gate rx(int q, double a) { return {Kind::RX, q, -1, a}; }
    static Gate ry(int q, double a) { return {Kind::RY, q, -1, a}; }
    static Gate rz(int q, double a) { return {Kind::RZ, q, -1, a}; }
    static Gate sdg(int q) { return {Kind::SDG, q}; }
    static Gate cnot(int control, int target) { return {Kind::CNOT, control, target}; }

    std::string text() const;  // e.g. "CNOT 0 3", "RZ 1 1.5707963"
};

class Circuit {
public:
    Circuit() = default;
    explicit Circuit(int n_qubits) : n_(n_qubits) {}

    int n_qubits() const { return n_; }
    const std::vector<Gate>& gates() const { return gates_; }
    void append(const Gate& g);
    void append(const Circuit& other);
    int cnot_count() const;
    std::string text() const;  // one gate per line

private:
    int n_ = 0;
    std::vector<Gate> gates_;
};

// Per-gate thermal relaxation plus CNOT depolarizing and SPAM bit flips.
struct NoiseSpec {
    double t1 = 0;  // seconds; 0 or negative means no relaxation
    double t2 = 0;
    double gate_time_1q = 35e-9;
    double gate_time_2q = 550e-9;
    double cnot_depolarizing_error = 0;  // average gate error in [0,1]
    double p_meas0_prep1 = 0;
    double p_meas1_prep0 = 0;

    static NoiseSpec none() { return NoiseSpec{}; }
    bool has_relaxation() const { return t1 > 0; }
    bool is_trivial() const;
    void validate() const;  // probabilities in range, t2 <= 2 t1
};

struct MeasurementEstimate {
    double value = 0;
    long long shots_used = 0;
    double standard_error = 0;
};

// Basis rotations, CNOT parity ladder into the highest support qubit,
// RZ(2 theta) there, inverses. Implements exp(-i theta P). 2(weight-1) CNOTs.
Circuit compile_pauli_exponential(const PauliString& p, double theta);

// exp(theta a) for antihermitian a as a single first-order factorization,
// one ladder block per string in lexicographic order.
Circuit compile_exponential_sum(const PauliSum& a, double theta);

// Angles (theta1, theta2, theta3) with RZ(theta1) RY(theta2) RZ(theta3) == u
// up to global phase.
std::array<double, 3> decompose_su2(const Eigen::Matrix2cd& u);

// Two-qubit circuit preparing the 6-parameter state (qubit A = 1, B = 0):
// cos(t0/2)cos(t1/2)|00> + cos(t0/2)sin(t1/2)e^{iw1}|01>
// + sin(t0/2)e^{iw0}(cos(t2/2)|10> + sin(t2/2)e^{iw2}|11>).
// params = {theta0, theta1, theta2, omega0, omega1, omega2}.
Circuit prepare_two_qubit(const std::array<double, 6>& params);

StateVector apply_gate(const Gate& g, const StateVector& s);
StateVector execute_statevector(const Circuit& c);

DensityMatrix execute_density(const Circuit& c, const NoiseSpec& noise);

// Measures a qubitwise-commuting group in its shared eigenbasis.
// Deterministic given rng_seed.
std::map<PauliString, MeasurementEstimate> sample_pauli(
    const std::vector<PauliString>& strings, const StateVector& state, long long shots,
    const NoiseSpec& noise, std::uint64_t rng_seed);
std::map<PauliString, MeasurementEstimate> sample_pauli(
    const std::vector<PauliString>& strings, const DensityMatrix& state, long long shots,
    const NoiseSpec& noise, std::uint64_t rng_seed);

}  // namespace vqe
