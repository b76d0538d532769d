#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"
#include "oracle.hpp"
#include "vqe/circuit.hpp"

#include <cmath>
#include <random>

using namespace vqe;

namespace {

constexpr double kPi = 3.14159265358979323846;

Eigen::Matrix2cd gate_matrix_1q(const Gate& g) {
    using std::cos;
    using std::sin;
    Eigen::Matrix2cd m;
    const cplx i(0, 1);
    switch (g.kind) {
        case Gate::Kind::X: m << 0, 1, 1, 0; break;
        case Gate::Kind::H: m << 1, 1, 1, -1; m /= std::sqrt(2.0); break;
        case Gate::Kind::SDG: m << 1, 0, 0, -i; break;
        case Gate::Kind::RX:
            m << cos(g.angle / 2), -i * sin(g.angle / 2), -i * sin(g.angle / 2), cos(g.angle / 2);
            break;
        case Gate::Kind::RY:
            m << cos(g.angle / 2), -sin(g.angle / 2), sin(g.angle / 2), cos(g.angle / 2);
            break;
        case Gate::Kind::RZ:
            m << std::exp(-i * (g.angle / 2)), 0, 0, std::exp(i * (g.angle / 2));
            break;
        default: throw std::logic_error("not a 1q gate");
    }
    return m;
}

Eigen::MatrixXcd gate_matrix(const Gate& g, int n) {
    const std::int64_t dim = std::int64_t{1} << n;
    if (g.kind == Gate::Kind::CNOT) {
        Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(dim, dim);
        for (std::int64_t b = 0; b < dim; ++b) {
            const std::int64_t out = (b >> g.q0) & 1 ? b ^ (std::int64_t{1} << g.q1) : b;
            m(out, b) = 1.0;
        }
        return m;
    }
    Eigen::MatrixXcd m = Eigen::MatrixXcd::Identity(1, 1);
    for (int k = n - 1; k >= 0; --k) {
        const Eigen::Matrix2cd f =
            k == g.q0 ? gate_matrix_1q(g) : Eigen::Matrix2cd::Identity().eval();
        m = oracle::kron(m, f).eval();
    }
    return m;
}

Eigen::MatrixXcd circuit_matrix(const Circuit& c) {
    const std::int64_t dim = std::int64_t{1} << c.n_qubits();
    Eigen::MatrixXcd m = Eigen::MatrixXcd::Identity(dim, dim);
    for (const Gate& g : c.gates()) m = gate_matrix(g, c.n_qubits()) * m;
    return m;
}

}  // namespace

TEST_CASE("apply_gate matches the dense gate matrices") {
    std::mt19937_64 rng(31);
    const int n = 3;
    std::uniform_int_distribution<int> qubit(0, n - 1);
    std::uniform_real_distribution<double> angle(-kPi, kPi);
    std::vector<Gate> gates;
    for (int trial = 0; trial < 60; ++trial) {
        const int q = qubit(rng);
        switch (trial % 7) {
            case 0: gates.push_back(Gate::x(q)); break;
            case 1: gates.push_back(Gate::h(q)); break;
            case 2: gates.push_back(Gate::sdg(q)); break;
            case 3: gates.push_back(Gate::rx(q, angle(rng))); break;
            case 4: gates.push_back(Gate::ry(q, angle(rng))); break;
            case 5: gates.push_back(Gate::rz(q, angle(rng))); break;
            default: {
                int t = qubit(rng);
                while (t == q) t = qubit(rng);
                gates.push_back(Gate::cnot(q, t));
            }
        }
        const auto s = oracle::random_state(n, rng);
        const Eigen::VectorXcd dense = gate_matrix(gates.back(), n) * oracle::vec(s);
        CHECK((oracle::vec(apply_gate(gates.back(), s)) - dense).cwiseAbs().maxCoeff() < 1e-12);
    }
}

TEST_CASE("execute_statevector composes gates in order") {
    Circuit c(2);
    c.append(Gate::h(0));
    c.append(Gate::cnot(0, 1));
    const StateVector bell = execute_statevector(c);
    CHECK(std::abs(bell[0b00] - 1.0 / std::sqrt(2.0)) < 1e-12);
    CHECK(std::abs(bell[0b11] - 1.0 / std::sqrt(2.0)) < 1e-12);
    CHECK(c.cnot_count() == 1);
    CHECK(c.text().find("CNOT 0 1") != std::string::npos);
}

TEST_CASE("compile_pauli_exponential implements exp(-i theta P)") {
    std::mt19937_64 rng(32);
    std::uniform_real_distribution<double> angle(-1.5, 1.5);
    for (int trial = 0; trial < 40; ++trial) {
        PauliString p = oracle::random_string(4, rng);
        if (p.is_identity()) continue;
        const double theta = angle(rng);
        const Circuit c = compile_pauli_exponential(p, theta);
        CHECK(c.cnot_count() == 2 * (p.weight() - 1));
        const Eigen::MatrixXcd expected =
            (cplx(0, -theta) * oracle::string_matrix(p)).exp();
        CHECK((circuit_matrix(c) - expected).cwiseAbs().maxCoeff() < 1e-11);
    }
    CHECK_THROWS_AS(compile_pauli_exponential(PauliString(3), 0.5), contract_error);
}

TEST_CASE("all-Z exponential needs no basis rotations") {
    const Circuit c = compile_pauli_exponential(PauliString::parse("ZZZZ"), 0.35);
    CHECK(c.cnot_count() == 6);
    int rz = 0, other = 0;
    for (const Gate& g : c.gates()) {
        if (g.kind == Gate::Kind::RZ) {
            ++rz;
            CHECK(g.angle == doctest::Approx(0.7));
        } else if (g.kind != Gate::Kind::CNOT) {
            ++other;
        }
    }
    CHECK(rz == 1);
    CHECK(other == 0);
}

TEST_CASE("compile_exponential_sum factorizes in lexicographic string order") {
    // Single-string operators compile exactly.
    std::mt19937_64 rng(33);
    for (int trial = 0; trial < 20; ++trial) {
        PauliString p = oracle::random_string(3, rng);
        if (p.is_identity()) continue;
        PauliSum a(3);
        a.add(p, cplx(0, 0.8));
        const Circuit c = compile_exponential_sum(a, 0.45);
        const Eigen::MatrixXcd expected = (0.45 * oracle::sum_matrix(a)).exp();
        CHECK((circuit_matrix(c) - expected).cwiseAbs().maxCoeff() < 1e-11);
    }

    // Multi-string operators compile term by term, smallest string first.
    PauliSum a(2);
    a.add(PauliString::parse("XY"), cplx(0, 0.6));
    a.add(PauliString::parse("YX"), cplx(0, -0.6));
    const double theta = 0.7;
    const Circuit c = compile_exponential_sum(a, theta);
    PauliSum first(2), second(2);
    first.add(PauliString::parse("XY"), cplx(0, 0.6));
    second.add(PauliString::parse("YX"), cplx(0, -0.6));
    const Eigen::MatrixXcd expected = (theta * oracle::sum_matrix(second)).exp() *
                                      (theta * oracle::sum_matrix(first)).exp();
    CHECK((circuit_matrix(c) - expected).cwiseAbs().maxCoeff() < 1e-11);

    PauliSum notanti(2);
    notanti.add(PauliString::parse("XX"), 1.0);
    CHECK_THROWS_AS(compile_exponential_sum(notanti, 0.1), contract_error);
}

TEST_CASE("decompose_su2 recovers Euler angles") {
    const Circuit ry = [] {
        Circuit c(1);
        c.append(Gate::ry(0, 0.7));
        return c;
    }();
    const Eigen::Matrix2cd u = circuit_matrix(ry);
    const auto [t1, t2, t3] = decompose_su2(u);
    CHECK(t1 == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(t2 == doctest::Approx(0.7));
    CHECK(t3 == doctest::Approx(0.0).epsilon(1e-12));

    // Random unitaries reconstruct up to global phase.
    std::mt19937_64 rng(34);
    std::normal_distribution<double> g(0, 1);
    for (int trial = 0; trial < 100; ++trial) {
        Eigen::Matrix2cd m;
        m << cplx(g(rng), g(rng)), cplx(g(rng), g(rng)), cplx(g(rng), g(rng)),
            cplx(g(rng), g(rng));
        const Eigen::Matrix2cd q = Eigen::HouseholderQR<Eigen::Matrix2cd>(m).householderQ();
        const auto angles = decompose_su2(q);
        // The circuit applies its first gate first, so the rightmost matrix
        // factor RZ(theta3) is appended first.
        Circuit c(1);
        c.append(Gate::rz(0, angles[2]));
        c.append(Gate::ry(0, angles[1]));
        c.append(Gate::rz(0, angles[0]));
        const Eigen::Matrix2cd rebuilt = circuit_matrix(c);
        // Strip the global phase before comparing.
        cplx phase = 0;
        for (int r = 0; r < 2 && std::abs(phase) < 1e-6; ++r) {
            for (int col = 0; col < 2 && std::abs(phase) < 1e-6; ++col) {
                if (std::abs(q(r, col)) > 1e-6) phase = rebuilt(r, col) / q(r, col);
            }
        }
        CHECK((rebuilt - phase * q).cwiseAbs().maxCoeff() < 1e-9);
    }
    Eigen::Matrix2cd bad;
    bad << 2, 0, 0, 1;
    CHECK_THROWS_AS(decompose_su2(bad), contract_error);
}

TEST_CASE("prepare_two_qubit realizes the target amplitudes") {
    std::mt19937_64 rng(35);
    std::uniform_real_distribution<double> t(0, kPi);
    std::uniform_real_distribution<double> w(0, 2 * kPi);
    for (int trial = 0; trial < 1000; ++trial) {
        const std::array<double, 6> params = {t(rng), t(rng), t(rng), w(rng), w(rng), w(rng)};
        const auto [t0, th1, th2, w0, w1, w2] = params;
        const cplx i(0, 1);
        // Qubit A is qubit 1, qubit B is qubit 0; |AB> with A the left label.
        Eigen::Vector4cd want;
        want(0b00) = std::cos(t0 / 2) * std::cos(th1 / 2);
        want(0b01) = std::cos(t0 / 2) * std::sin(th1 / 2) * std::exp(i * w1);
        want(0b10) = std::sin(t0 / 2) * std::exp(i * w0) * std::cos(th2 / 2);
        want(0b11) = std::sin(t0 / 2) * std::exp(i * w0) * std::sin(th2 / 2) * std::exp(i * w2);
        const StateVector got = execute_statevector(prepare_two_qubit(params));
        Eigen::Vector4cd gv = oracle::vec(got);
        // Global phase alignment on the largest amplitude.
        int big = 0;
        for (int k = 1; k < 4; ++k) {
            if (std::abs(want(k)) > std::abs(want(big))) big = k;
        }
        const cplx phase = want(big) / gv(big);
        CHECK(std::abs(std::abs(phase) - 1.0) < 1e-8);
        CHECK((phase * gv - want).cwiseAbs().maxCoeff() < 1e-8);
    }
}

TEST_CASE("NoiseSpec validation") {
    NoiseSpec ok;
    ok.t1 = 50e-6;
    ok.t2 = 70e-6;
    ok.validate();
    CHECK_FALSE(ok.is_trivial());
    CHECK(NoiseSpec::none().is_trivial());

    NoiseSpec bad = ok;
    bad.t2 = 120e-6;  // exceeds 2*t1
    CHECK_THROWS_AS(bad.validate(), contract_error);
    NoiseSpec badp;
    badp.p_meas0_prep1 = 1.5;
    CHECK_THROWS_AS(badp.validate(), contract_error);
}

TEST_CASE("execute_density: noiseless matches the pure state") {
    Circuit c(2);
    c.append(Gate::h(0));
    c.append(Gate::cnot(0, 1));
    const DensityMatrix rho = execute_density(c, NoiseSpec::none());
    const StateVector psi = execute_statevector(c);
    CHECK(fidelity_pure(rho, psi) == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(purity(rho) == doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("execute_density: CNOT depolarizing channel lowers ZZ correlations") {
    Circuit c(2);
    c.append(Gate::h(0));
    c.append(Gate::cnot(0, 1));
    NoiseSpec noise;
    noise.cnot_depolarizing_error = 0.02;
    const DensityMatrix rho = execute_density(c, noise);
    // Average gate error e maps to depolarizing probability p = e (d+1)/d, d = 4:
    // <ZZ> scales by (1 - p) relative to the ideal Bell value of 1.
    const double p = 0.02 * 5.0 / 4.0;
    PauliSum zz(2);
    zz.add(PauliString::parse("ZZ"), 1.0);
    CHECK(expectation(zz, rho) == doctest::Approx(1.0 - p).epsilon(1e-9));
}

TEST_CASE("execute_density: relaxation decays an excited qubit") {
    Circuit c(1);
    c.append(Gate::x(0));
    c.append(Gate::rz(0, 0.1));  // one more timed gate
    NoiseSpec noise;
    noise.t1 = 50e-6;
    noise.t2 = 70e-6;
    const DensityMatrix rho = execute_density(c, noise);
    PauliSum z(1);
    z.add(PauliString::parse("Z"), 1.0);
    const double ez = expectation(z, rho);
    CHECK(ez > -1.0);  // strictly above the noiseless value
    CHECK(ez < -0.99);  // but the decay over ~70ns is tiny
    CHECK(purity(rho) < 1.0);
}

TEST_CASE("sample_pauli: SPAM bias on an idle qubit") {
    // Measuring Z on |0> with p(read 1 | prepared 0) = 0.1 biases <Z> to 0.8.
    NoiseSpec noise;
    noise.p_meas1_prep0 = 0.1;
    const StateVector zero(1);
    const auto est = sample_pauli({PauliString::parse("Z")}, zero, 1000000, noise, 99);
    const auto& e = est.at(PauliString::parse("Z"));
    CHECK(e.value == doctest::Approx(0.8).epsilon(0.005));
    CHECK(std::abs(e.value - 0.8) < 3 * 0.003);
    CHECK(e.shots_used == 1000000);
}

TEST_CASE("sample_pauli is unbiased and reports a sane standard error") {
    std::mt19937_64 rng(36);
    const auto psi = oracle::random_state(2, rng);
    const std::vector<PauliString> group = {PauliString::parse("ZI"), PauliString::parse("ZZ")};
    const long long shots = 2048;
    for (const auto& str : group) {
        PauliSum h(2);
        h.add(str, 1.0);
        const double truth = expectation(h, psi);
        double mean = 0;
        double se_sum = 0;
        const int seeds = 100;
        for (int s = 0; s < seeds; ++s) {
            const auto est = sample_pauli(group, psi, shots, NoiseSpec::none(), 1000 + s);
            mean += est.at(str).value;
            se_sum += est.at(str).standard_error;
            CHECK(est.at(str).standard_error <= 1.0 / std::sqrt(double(shots)) + 1e-12);
        }
        mean /= seeds;
        const double se_of_mean = (se_sum / seeds) / std::sqrt(double(seeds));
        CHECK(std::abs(mean - truth) < 5 * std::max(se_of_mean, 1e-6));
    }

    // Deterministic for a fixed seed.
    const auto a = sample_pauli(group, psi, 512, NoiseSpec::none(), 7);
    const auto b = sample_pauli(group, psi, 512, NoiseSpec::none(), 7);
    CHECK(a.at(group[0]).value == b.at(group[0]).value);
    CHECK(a.at(group[1]).value == b.at(group[1]).value);
}

TEST_CASE("sample_pauli on a density matrix agrees with the pure-state path") {
    std::mt19937_64 rng(37);
    const auto psi = oracle::random_state(2, rng);
    const DensityMatrix rho = DensityMatrix::from_pure(psi);
    const std::vector<PauliString> group = {PauliString::parse("XX")};
    PauliSum h(2);
    h.add(group[0], 1.0);
    const double truth = expectation(h, psi);
    double mean = 0;
    const int seeds = 60;
    for (int s = 0; s < seeds; ++s) {
        mean += sample_pauli(group, rho, 4096, NoiseSpec::none(), 500 + s).at(group[0]).value;
    }
    mean /= seeds;
    CHECK(mean == doctest::Approx(truth).epsilon(0.02));
}
