#include "vqe/circuit.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdio>
#include <random>
#include <sstream>

namespace vqe {

namespace {

constexpr double kPi = 3.14159265358979323846;

Eigen::Matrix2cd gate_matrix(const Gate& g) {
    Eigen::Matrix2cd m;
    const cplx i(0, 1);
    switch (g.kind) {
        case Gate::Kind::X:
            m << 0, 1, 1, 0;
            return m;
        case Gate::Kind::H:
            m << 1, 1, 1, -1;
            return m / std::sqrt(2.0);
        case Gate::Kind::RX: {
            double c = std::cos(g.angle / 2), s = std::sin(g.angle / 2);
            m << c, -i * s, -i * s, c;
            return m;
        }
        case Gate::Kind::RY: {
            double c = std::cos(g.angle / 2), s = std::sin(g.angle / 2);
            m << c, -s, s, c;
            return m;
        }
        case Gate::Kind::RZ: {
            m << std::exp(-i * (g.angle / 2)), 0, 0, std::exp(i * (g.angle / 2));
            return m;
        }
        case Gate::Kind::SDG:
            m << 1, 0, 0, -i;
            return m;
        case Gate::Kind::CNOT:
            throw contract_error("gate_matrix: CNOT has no 2x2 matrix");
    }
    throw contract_error("gate_matrix: unknown gate");
}

const char* kind_name(Gate::Kind k) {
    switch (k) {
        case Gate::Kind::X: return "X";
        case Gate::Kind::H: return "H";
        case Gate::Kind::RX: return "RX";
        case Gate::Kind::RY: return "RY";
        case Gate::Kind::RZ: return "RZ";
        case Gate::Kind::SDG: return "SDG";
        case Gate::Kind::CNOT: return "CNOT";
    }
    return "?";
}

}  // namespace

std::string Gate::text() const {
    char buf[64];
    switch (kind) {
        case Kind::CNOT:
            std::snprintf(buf, sizeof buf, "CNOT %d %d", q0, q1);
            break;
        case Kind::RX:
        case Kind::RY:
        case Kind::RZ:
            std::snprintf(buf, sizeof buf, "%s %d %.9g", kind_name(kind), q0, angle);
            break;
        default:
            std::snprintf(buf, sizeof buf, "%s %d", kind_name(kind), q0);
            break;
    }
    return buf;
}

void Circuit::append(const Gate& g) {
    if (g.q0 < 0 || g.q0 >= n_ || (g.kind == Gate::Kind::CNOT && (g.q1 < 0 || g.q1 >= n_))) {
        throw dimension_error("Circuit::append: qubit index out of range");
    }
    if (g.kind == Gate::Kind::CNOT && g.q0 == g.q1) {
        throw contract_error("Circuit::append: CNOT control equals target");
    }
    gates_.push_back(g);
}

void Circuit::append(const Circuit& other) {
    if (other.n_ != n_) throw dimension_error("Circuit::append: register size mismatch");
    for (const auto& g : other.gates_) gates_.push_back(g);
}

int Circuit::cnot_count() const {
    int c = 0;
    for (const auto& g : gates_) c += (g.kind == Gate::Kind::CNOT);
    return c;
}

std::string Circuit::text() const {
    std::ostringstream os;
    for (const auto& g : gates_) os << g.text() << "\n";
    return os.str();
}

bool NoiseSpec::is_trivial() const {
    return !has_relaxation() && cnot_depolarizing_error == 0 && p_meas0_prep1 == 0 &&
           p_meas1_prep0 == 0;
}

void NoiseSpec::validate() const {
    auto prob = [](double p, const char* name) {
        if (p < 0 || p > 1) {
            throw contract_error(std::string("NoiseSpec: ") + name + " outside [0,1]");
        }
    };
    prob(cnot_depolarizing_error, "cnot_depolarizing_error");
    prob(p_meas0_prep1, "p_meas0_prep1");
    prob(p_meas1_prep0, "p_meas1_prep0");
    if (t1 > 0) {
        if (t2 <= 0) throw contract_error("NoiseSpec: t2 must be positive when t1 is set");
        if (t2 > 2 * t1 + 1e-15) throw contract_error("NoiseSpec: t2 must satisfy t2 <= 2 t1");
    }
    if (gate_time_1q < 0 || gate_time_2q < 0) {
        throw contract_error("NoiseSpec: gate times must be nonnegative");
    }
}

Circuit compile_pauli_exponential(const PauliString& p, double theta) {
    if (p.is_identity()) {
        throw contract_error("compile_pauli_exponential: identity string has no support");
    }
    Circuit c(p.n_qubits());
    std::vector<int> support;
    for (int k = 0; k < p.n_qubits(); ++k) {
        if (p.at(k) != Letter::I) support.push_back(k);
    }
    // Into the Z basis.
    for (int q : support) {
        if (p.at(q) == Letter::X) c.append(Gate::h(q));
        if (p.at(q) == Letter::Y) c.append(Gate::rx(q, kPi / 2));
    }
    // Parity ladder onto the highest support qubit.
    for (std::size_t k = 0; k + 1 < support.size(); ++k) {
        c.append(Gate::cnot(support[k], support[k + 1]));
    }
    c.append(Gate::rz(support.back(), 2 * theta));
    for (std::size_t k = support.size() - 1; k >= 1; --k) {
        c.append(Gate::cnot(support[k - 1], support[k]));
    }
    // Back out of the Z basis.
    for (int q : support) {
        if (p.at(q) == Letter::X) c.append(Gate::h(q));
        if (p.at(q) == Letter::Y) c.append(Gate::rx(q, -kPi / 2));
    }
    return c;
}

Circuit compile_exponential_sum(const PauliSum& a, double theta) {
    if (!a.is_antihermitian()) {
        throw contract_error("compile_exponential_sum: operator is not antihermitian");
    }
    Circuit c(a.n_qubits());
    // Map terms are already in lexicographic string order.
    for (const auto& [str, coeff] : a) {
        if (str.is_identity()) continue;  // global phase
        // exp(theta * i c P) = exp(-i (-theta c) P)
        c.append(compile_pauli_exponential(str, -theta * coeff.imag()));
    }
    return c;
}

std::array<double, 3> decompose_su2(const Eigen::Matrix2cd& u) {
    if ((u.adjoint() * u - Eigen::Matrix2cd::Identity()).norm() > 1e-9) {
        throw contract_error("decompose_su2: input is not unitary");
    }
    // Remove the global phase: det of the SU(2) part is 1.
    cplx det = u.determinant();
    Eigen::Matrix2cd v = u / std::sqrt(det);
    const cplx a = v(0, 0);  // e^{-i(t1+t3)/2} cos(t2/2)
    const cplx b = v(1, 0);  // e^{+i(t1-t3)/2} sin(t2/2)
    const double ca = std::abs(a), cb = std::abs(b);
    const double t2 = 2 * std::atan2(cb, ca);
    double t1, t3;
    if (cb < 1e-12) {
        t1 = -2 * std::arg(a);
        t3 = 0;
    } else if (ca < 1e-12) {
        t1 = 2 * std::arg(b);
        t3 = 0;
    } else {
        const double sum = -2 * std::arg(a);   // t1 + t3
        const double diff = 2 * std::arg(b);   // t1 - t3
        t1 = (sum + diff) / 2;
        t3 = (sum - diff) / 2;
    }
    return {t1, t2, t3};
}

Circuit prepare_two_qubit(const std::array<double, 6>& params) {
    const double t0 = params[0], t1 = params[1], t2 = params[2];
    const double w0 = params[3], w1 = params[4], w2 = params[5];
    auto in_range = [](double v, double lo, double hi) {
        return v >= lo - 1e-12 && v <= hi + 1e-12;
    };
    if (!in_range(t0, 0, kPi) || !in_range(t1, 0, kPi) || !in_range(t2, 0, kPi) ||
        !in_range(w0, 0, 2 * kPi) || !in_range(w1, 0, 2 * kPi) || !in_range(w2, 0, 2 * kPi)) {
        throw contract_error("prepare_two_qubit: parameter outside its range");
    }
    const cplx i(0, 1);
    // Coordinate matrix rows indexed by qubit A, columns by qubit B.
    Eigen::Matrix2cd m;
    m(0, 0) = std::cos(t0 / 2) * std::cos(t1 / 2);
    m(0, 1) = std::cos(t0 / 2) * std::sin(t1 / 2) * std::exp(i * w1);
    m(1, 0) = std::sin(t0 / 2) * std::exp(i * w0) * std::cos(t2 / 2);
    m(1, 1) = std::sin(t0 / 2) * std::exp(i * w0) * std::sin(t2 / 2) * std::exp(i * w2);

    Eigen::JacobiSVD<Eigen::Matrix2cd> svd(m, Eigen::ComputeFullU | Eigen::ComputeFullV);
    const double lambda0 = std::clamp(svd.singularValues()(0), 0.0, 1.0);
    // M = U diag(lambda) V^H, so the B-side unitary is conj(V).
    const Eigen::Matrix2cd u = svd.matrixU();
    const Eigen::Matrix2cd w = svd.matrixV().conjugate();
    const auto [a1, a2, a3] = decompose_su2(u);
    const auto [b1, b2, b3] = decompose_su2(w);

    constexpr int A = 1, B = 0;
    Circuit c(2);
    c.append(Gate::ry(A, 2 * std::acos(lambda0)));
    c.append(Gate::cnot(A, B));
    // On lambda0|00> + lambda1|11> the two leading RZ angles merge onto A.
    c.append(Gate::rz(A, a3 + b3));
    c.append(Gate::ry(A, a2));
    c.append(Gate::rz(A, a1));
    c.append(Gate::ry(B, b2));
    c.append(Gate::rz(B, b1));
    return c;
}

StateVector apply_gate(const Gate& g, const StateVector& s) {
    StateVector out = s;
    const std::uint64_t dim = s.dim();
    if (g.kind == Gate::Kind::CNOT) {
        const std::uint64_t cm = 1ull << g.q0, tm = 1ull << g.q1;
        for (std::uint64_t n = 0; n < dim; ++n) {
            if ((n & cm) && !(n & tm)) std::swap(out[n], out[n | tm]);
        }
        return out;
    }
    const Eigen::Matrix2cd u = gate_matrix(g);
    const std::uint64_t qm = 1ull << g.q0;
    for (std::uint64_t n = 0; n < dim; ++n) {
        if (n & qm) continue;
        const cplx a0 = out[n], a1 = out[n | qm];
        out[n] = u(0, 0) * a0 + u(0, 1) * a1;
        out[n | qm] = u(1, 0) * a0 + u(1, 1) * a1;
    }
    return out;
}

StateVector execute_statevector(const Circuit& c) {
    StateVector s(c.n_qubits());
    for (const auto& g : c.gates()) s = apply_gate(g, s);
    return s;
}

namespace {

// rho -> (I ⊗ u ⊗ I) rho (...)^dagger on qubit q.
void apply_1q_unitary(Eigen::MatrixXcd& rho, int q, const Eigen::Matrix2cd& u) {
    const std::int64_t dim = rho.rows();
    const std::int64_t qm = std::int64_t{1} << q;
    for (std::int64_t col = 0; col < dim; ++col) {  // rows transform
        for (std::int64_t r = 0; r < dim; ++r) {
            if (r & qm) continue;
            const cplx a0 = rho(r, col), a1 = rho(r | qm, col);
            rho(r, col) = u(0, 0) * a0 + u(0, 1) * a1;
            rho(r | qm, col) = u(1, 0) * a0 + u(1, 1) * a1;
        }
    }
    for (std::int64_t row = 0; row < dim; ++row) {  // columns transform with u^dagger
        for (std::int64_t c = 0; c < dim; ++c) {
            if (c & qm) continue;
            const cplx a0 = rho(row, c), a1 = rho(row, c | qm);
            rho(row, c) = a0 * std::conj(u(0, 0)) + a1 * std::conj(u(0, 1));
            rho(row, c | qm) = a0 * std::conj(u(1, 0)) + a1 * std::conj(u(1, 1));
        }
    }
}

void apply_cnot(Eigen::MatrixXcd& rho, int control, int target) {
    const std::int64_t dim = rho.rows();
    auto permute = [&](std::int64_t n) {
        if (n & (std::int64_t{1} << control)) return n ^ (std::int64_t{1} << target);
        return n;
    };
    Eigen::MatrixXcd out(dim, dim);
    for (std::int64_t r = 0; r < dim; ++r) {
        for (std::int64_t c = 0; c < dim; ++c) out(permute(r), permute(c)) = rho(r, c);
    }
    rho = std::move(out);
}

void apply_1q_kraus(Eigen::MatrixXcd& rho, int q, const std::vector<Eigen::Matrix2cd>& ks) {
    Eigen::MatrixXcd acc = Eigen::MatrixXcd::Zero(rho.rows(), rho.cols());
    for (const auto& k : ks) {
        Eigen::MatrixXcd term = rho;
        apply_1q_unitary(term, q, k);  // works for any 2x2, not just unitary
        acc += term;
    }
    rho = std::move(acc);
}

void apply_relaxation(Eigen::MatrixXcd& rho, int q, const NoiseSpec& noise, double t_gate) {
    if (!noise.has_relaxation() || t_gate <= 0) return;
    const double gamma = 1 - std::exp(-t_gate / noise.t1);
    Eigen::Matrix2cd k0, k1;
    k0 << 1, 0, 0, std::sqrt(1 - gamma);
    k1 << 0, std::sqrt(gamma), 0, 0;
    apply_1q_kraus(rho, q, {k0, k1});
    // Pure dephasing on top of the T1 contribution so off-diagonals decay as e^{-t/T2}.
    const double rate = 1 / noise.t2 - 1 / (2 * noise.t1);
    if (rate > 0) {
        const double lambda = 1 - std::exp(-2 * t_gate * rate);
        Eigen::Matrix2cd p0, p1;
        p0 << 1, 0, 0, std::sqrt(1 - lambda);
        p1 << 0, 0, 0, std::sqrt(lambda);
        apply_1q_kraus(rho, q, {p0, p1});
    }
}

// Two-qubit depolarizing: rho -> (1-p) rho + p (tr_pair rho) ⊗ I/4.
void apply_depolarizing_pair(Eigen::MatrixXcd& rho, int qa, int qb, double p) {
    if (p <= 0) return;
    const std::int64_t dim = rho.rows();
    const std::int64_t ma = std::int64_t{1} << qa, mb = std::int64_t{1} << qb;
    const std::int64_t pair = ma | mb;
    Eigen::MatrixXcd mixed = Eigen::MatrixXcd::Zero(dim, dim);
    for (std::int64_t r = 0; r < dim; ++r) {
        for (std::int64_t c = 0; c < dim; ++c) {
            if ((r & pair) != (c & pair)) continue;  // identity block on the pair
            cplx tr(0, 0);
            const std::int64_t rb = r & ~pair, cb = c & ~pair;
            for (std::int64_t sub = 0; sub < 4; ++sub) {
                const std::int64_t bits = ((sub & 1) ? ma : 0) | ((sub & 2) ? mb : 0);
                tr += rho(rb | bits, cb | bits);
            }
            mixed(r, c) = tr / 4.0;
        }
    }
    rho = (1 - p) * rho + p * mixed;
}

}  // namespace

DensityMatrix execute_density(const Circuit& c, const NoiseSpec& noise) {
    if (c.n_qubits() > 8) {
        throw resource_error("execute_density: density simulation capped at 8 qubits");
    }
    noise.validate();
    DensityMatrix rho(c.n_qubits());
    for (const auto& g : c.gates()) {
        if (g.kind == Gate::Kind::CNOT) {
            apply_cnot(rho.matrix(), g.q0, g.q1);
            const double p =
                std::min(1.0, noise.cnot_depolarizing_error * (4.0 + 1.0) / 4.0);
            apply_depolarizing_pair(rho.matrix(), g.q0, g.q1, p);
            apply_relaxation(rho.matrix(), g.q0, noise, noise.gate_time_2q);
            apply_relaxation(rho.matrix(), g.q1, noise, noise.gate_time_2q);
        } else {
            apply_1q_unitary(rho.matrix(), g.q0, gate_matrix(g));
            apply_relaxation(rho.matrix(), g.q0, noise, noise.gate_time_1q);
        }
    }
    return rho;
}

namespace {

struct GroupBasis {
    std::vector<Gate> rotations;
    std::vector<std::uint64_t> supports;  // per input string
};

GroupBasis shared_basis(const std::vector<PauliString>& strings, int n_qubits) {
    std::vector<Letter> basis(static_cast<std::size_t>(n_qubits), Letter::I);
    GroupBasis gb;
    for (const auto& s : strings) {
        if (s.n_qubits() != n_qubits) {
            throw dimension_error("sample_pauli: string register size mismatch");
        }
        std::uint64_t mask = 0;
        for (int k = 0; k < n_qubits; ++k) {
            const Letter l = s.at(k);
            if (l == Letter::I) continue;
            mask |= 1ull << k;
            auto& slot = basis[static_cast<std::size_t>(k)];
            if (slot == Letter::I) {
                slot = l;
            } else if (slot != l) {
                throw contract_error("sample_pauli: group is not qubitwise commuting");
            }
        }
        gb.supports.push_back(mask);
    }
    for (int k = 0; k < n_qubits; ++k) {
        if (basis[static_cast<std::size_t>(k)] == Letter::X) gb.rotations.push_back(Gate::h(k));
        if (basis[static_cast<std::size_t>(k)] == Letter::Y) {
            gb.rotations.push_back(Gate::rx(k, kPi / 2));
        }
    }
    return gb;
}

std::map<PauliString, MeasurementEstimate> sample_from_probabilities(
    const std::vector<PauliString>& strings, const std::vector<double>& probs, int n_qubits,
    long long shots, const NoiseSpec& noise, std::uint64_t rng_seed,
    const std::vector<std::uint64_t>& supports) {
    if (shots < 1) throw contract_error("sample_pauli: shots must be >= 1");
    std::mt19937_64 rng(rng_seed);
    std::discrete_distribution<std::uint64_t> dist(probs.begin(), probs.end());
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    const bool spam = noise.p_meas0_prep1 > 0 || noise.p_meas1_prep0 > 0;
    std::vector<long long> parity_sum(strings.size(), 0);
    for (long long shot = 0; shot < shots; ++shot) {
        std::uint64_t outcome = dist(rng);
        if (spam) {
            for (int k = 0; k < n_qubits; ++k) {
                const bool bit = (outcome >> k) & 1;
                const double pflip = bit ? noise.p_meas0_prep1 : noise.p_meas1_prep0;
                if (unif(rng) < pflip) outcome ^= 1ull << k;
            }
        }
        for (std::size_t i = 0; i < strings.size(); ++i) {
            parity_sum[i] += (std::popcount(outcome & supports[i]) & 1) ? -1 : 1;
        }
    }
    std::map<PauliString, MeasurementEstimate> out;
    for (std::size_t i = 0; i < strings.size(); ++i) {
        MeasurementEstimate e;
        e.value = static_cast<double>(parity_sum[i]) / static_cast<double>(shots);
        e.shots_used = shots;
        e.standard_error =
            std::sqrt(std::max(0.0, 1.0 - e.value * e.value) / static_cast<double>(shots));
        out.emplace(strings[i], e);
    }
    return out;
}

}  // namespace

std::map<PauliString, MeasurementEstimate> sample_pauli(
    const std::vector<PauliString>& strings, const StateVector& state, long long shots,
    const NoiseSpec& noise, std::uint64_t rng_seed) {
    noise.validate();
    GroupBasis gb = shared_basis(strings, state.n_qubits());
    StateVector rotated = state;
    for (const auto& g : gb.rotations) rotated = apply_gate(g, rotated);
    std::vector<double> probs(rotated.dim());
    for (std::uint64_t n = 0; n < rotated.dim(); ++n) probs[n] = std::norm(rotated[n]);
    return sample_from_probabilities(strings, probs, state.n_qubits(), shots, noise, rng_seed,
                                     gb.supports);
}

std::map<PauliString, MeasurementEstimate> sample_pauli(
    const std::vector<PauliString>& strings, const DensityMatrix& state, long long shots,
    const NoiseSpec& noise, std::uint64_t rng_seed) {
    noise.validate();
    GroupBasis gb = shared_basis(strings, state.n_qubits());
    Eigen::MatrixXcd rho = state.matrix();
    for (const auto& g : gb.rotations) apply_1q_unitary(rho, g.q0, gate_matrix(g));
    std::vector<double> probs(static_cast<std::size_t>(rho.rows()));
    for (std::int64_t n = 0; n < rho.rows(); ++n) {
        probs[static_cast<std::size_t>(n)] = std::max(0.0, rho(n, n).real());
    }
    return sample_from_probabilities(strings, probs, state.n_qubits(), shots, noise, rng_seed,
                                     gb.supports);
}

}  // namespace vqe
