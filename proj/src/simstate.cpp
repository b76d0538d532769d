#include "vqe/simstate.hpp"

#include <Eigen/Eigenvalues>
#include <bit>
#include <cmath>

namespace vqe {

namespace {

void require_same_qubits(int a, int b, const char* where) {
    if (a != b) {
        throw dimension_error(std::string(where) + ": qubit count mismatch (" +
                              std::to_string(a) + " vs " + std::to_string(b) + ")");
    }
}

// Phase of P acting on basis state n: i^{#Y} * (-1)^{popcount(n & (Y|Z))}.
inline cplx string_phase(int y_count, std::uint64_t n, std::uint64_t phase_mask) {
    static const cplx ipow[4] = {cplx(1, 0), cplx(0, 1), cplx(-1, 0), cplx(0, -1)};
    cplx ph = ipow[y_count % 4];
    return (std::popcount(n & phase_mask) & 1) ? -ph : ph;
}

// Registers at or above this size use the parallel kernels.
constexpr std::uint64_t kParallelDim = 1024;

}  // namespace

StateVector StateVector::basis_state(int n_qubits, std::uint64_t index) {
    StateVector s(n_qubits);
    s.amp_[0] = 0.0;
    s.amp_[index] = 1.0;
    return s;
}

double StateVector::norm() const {
    double n2 = 0;
    for (const auto& a : amp_) n2 += std::norm(a);
    return std::sqrt(n2);
}

void StateVector::normalize() {
    double n = norm();
    if (n == 0) return;
    for (auto& a : amp_) a /= n;
}

cplx inner_product(const StateVector& a, const StateVector& b) {
    require_same_qubits(a.n_qubits(), b.n_qubits(), "inner_product");
    cplx acc(0, 0);
    for (std::uint64_t i = 0; i < a.dim(); ++i) acc += std::conj(a[i]) * b[i];
    return acc;
}

StateVector apply_string_serial(const PauliString& p, const StateVector& s) {
    require_same_qubits(p.n_qubits(), s.n_qubits(), "apply_string");
    StateVector out(s.n_qubits());
    out[0] = 0.0;
    const std::uint64_t flip = p.flip_mask();
    const std::uint64_t pm = p.phase_mask();
    const int yc = p.y_count();
    for (std::uint64_t n = 0; n < s.dim(); ++n) {
        out[n ^ flip] = string_phase(yc, n, pm) * s[n];
    }
    return out;
}

StateVector apply_string(const PauliString& p, const StateVector& s) {
    require_same_qubits(p.n_qubits(), s.n_qubits(), "apply_string");
    if (s.dim() < kParallelDim) return apply_string_serial(p, s);
    StateVector out(s.n_qubits());
    out[0] = 0.0;
    const std::uint64_t flip = p.flip_mask();
    const std::uint64_t pm = p.phase_mask();
    const int yc = p.y_count();
    const std::int64_t dim = static_cast<std::int64_t>(s.dim());
#pragma omp parallel for schedule(static)
    for (std::int64_t n = 0; n < dim; ++n) {
        // Disjoint writes: n ^ flip is a bijection.
        out[static_cast<std::uint64_t>(n) ^ flip] =
            string_phase(yc, static_cast<std::uint64_t>(n), pm) * s[static_cast<std::uint64_t>(n)];
    }
    return out;
}

StateVector apply_sum(const PauliSum& a, const StateVector& s) {
    require_same_qubits(a.n_qubits(), s.n_qubits(), "apply_sum");
    StateVector out(s.n_qubits());
    for (auto& amp : out.amplitudes()) amp = 0.0;
    for (const auto& [str, coeff] : a) {
        const std::uint64_t flip = str.flip_mask();
        const std::uint64_t pm = str.phase_mask();
        const int yc = str.y_count();
        const std::int64_t dim = static_cast<std::int64_t>(s.dim());
#pragma omp parallel for schedule(static) if (dim >= static_cast<std::int64_t>(kParallelDim))
        for (std::int64_t n = 0; n < dim; ++n) {
            out[static_cast<std::uint64_t>(n) ^ flip] +=
                coeff * string_phase(yc, static_cast<std::uint64_t>(n), pm) *
                s[static_cast<std::uint64_t>(n)];
        }
    }
    return out;
}

StateVector apply_exponential(const PauliSum& a, double theta, const StateVector& s) {
    require_same_qubits(a.n_qubits(), s.n_qubits(), "apply_exponential");
    if (!a.is_antihermitian()) {
        throw contract_error("apply_exponential: operator is not antihermitian");
    }
    StateVector out = s;
    StateVector v = s;
    constexpr int kMaxTerms = 200;
    for (int m = 1; m <= kMaxTerms; ++m) {
        v = apply_sum(a, v);
        const double scale = theta / m;
        double tail2 = 0;
        for (std::uint64_t i = 0; i < v.dim(); ++i) {
            v[i] *= scale;
            out[i] += v[i];
            tail2 += std::norm(v[i]);
        }
        if (std::sqrt(tail2) < 1e-14) return out;
    }
    throw contract_error("apply_exponential: Taylor series did not converge in 200 terms");
}

namespace {

double expectation_term(const PauliString& str, const StateVector& s) {
    const std::uint64_t flip = str.flip_mask();
    const std::uint64_t pm = str.phase_mask();
    const int yc = str.y_count();
    cplx acc(0, 0);
    for (std::uint64_t n = 0; n < s.dim(); ++n) {
        acc += std::conj(s[n ^ flip]) * string_phase(yc, n, pm) * s[n];
    }
    return acc.real();
}

}  // namespace

double expectation_serial(const PauliSum& h, const StateVector& s) {
    require_same_qubits(h.n_qubits(), s.n_qubits(), "expectation");
    if (!h.is_hermitian(1e-9)) {
        throw contract_error("expectation: operator is not hermitian");
    }
    double e = 0;
    for (const auto& [str, coeff] : h) e += coeff.real() * expectation_term(str, s);
    return e;
}

double expectation(const PauliSum& h, const StateVector& s) {
    require_same_qubits(h.n_qubits(), s.n_qubits(), "expectation");
    if (!h.is_hermitian(1e-9)) {
        throw contract_error("expectation: operator is not hermitian");
    }
    std::vector<const PauliString*> strings;
    std::vector<double> coeffs;
    strings.reserve(h.size());
    for (const auto& [str, coeff] : h) {
        strings.push_back(&str);
        coeffs.push_back(coeff.real());
    }
    std::vector<double> values(strings.size());
    const std::int64_t nterms = static_cast<std::int64_t>(strings.size());
#pragma omp parallel for schedule(dynamic)
    for (std::int64_t i = 0; i < nterms; ++i) {
        values[static_cast<std::size_t>(i)] =
            expectation_term(*strings[static_cast<std::size_t>(i)], s);
    }
    // Serial accumulation in fixed term order keeps results thread-count independent.
    double e = 0;
    for (std::size_t i = 0; i < values.size(); ++i) e += coeffs[i] * values[i];
    return e;
}

std::pair<double, StateVector> exact_ground(const PauliSum& h) {
    const int n = h.n_qubits();
    if (n > 14) throw resource_error("exact_ground: dense diagonalization capped at 14 qubits");
    if (!h.is_hermitian(1e-9)) throw contract_error("exact_ground: operator is not hermitian");
    const std::int64_t dim = std::int64_t{1} << n;
    Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(dim, dim);
    for (const auto& [str, coeff] : h) {
        const std::uint64_t flip = str.flip_mask();
        const std::uint64_t pm = str.phase_mask();
        const int yc = str.y_count();
        for (std::int64_t col = 0; col < dim; ++col) {
            m(static_cast<std::int64_t>(static_cast<std::uint64_t>(col) ^ flip), col) +=
                coeff * string_phase(yc, static_cast<std::uint64_t>(col), pm);
        }
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(m);
    StateVector ground(n);
    for (std::int64_t i = 0; i < dim; ++i) ground[static_cast<std::uint64_t>(i)] = solver.eigenvectors()(i, 0);
    ground.normalize();
    return {solver.eigenvalues()(0), ground};
}

StateVector trotter_apply(const std::vector<PauliSum>& terms, double t, int reps,
                          const StateVector& s) {
    if (reps < 1) throw contract_error("trotter_apply: reps must be positive");
    StateVector out = s;
    for (int rep = 0; rep < reps; ++rep) {
        for (const auto& h : terms) {
            if (!h.is_hermitian(1e-9)) {
                throw contract_error("trotter_apply: non-hermitian term");
            }
            // e^{-i H dt} = e^{theta A} with A = -i H (antihermitian), theta = dt.
            PauliSum a = h * cplx(0, -1);
            out = apply_exponential(a, t / reps, out);
        }
    }
    return out;
}

DensityMatrix DensityMatrix::from_pure(const StateVector& s) {
    DensityMatrix rho(s.n_qubits());
    const std::int64_t dim = rho.dim();
    for (std::int64_t i = 0; i < dim; ++i) {
        for (std::int64_t j = 0; j < dim; ++j) {
            rho.m_(i, j) = s[static_cast<std::uint64_t>(i)] *
                           std::conj(s[static_cast<std::uint64_t>(j)]);
        }
    }
    return rho;
}

DensityMatrix DensityMatrix::maximally_mixed(int n_qubits) {
    DensityMatrix rho(n_qubits);
    const std::int64_t dim = rho.dim();
    rho.m_ = Eigen::MatrixXcd::Identity(dim, dim) / static_cast<double>(dim);
    return rho;
}

double purity(const DensityMatrix& rho) { return rho.matrix().squaredNorm(); }

double fidelity_pure(const DensityMatrix& rho, const StateVector& psi) {
    require_same_qubits(rho.n_qubits(), psi.n_qubits(), "fidelity_pure");
    Eigen::VectorXcd v(rho.dim());
    for (std::int64_t i = 0; i < rho.dim(); ++i) v(i) = psi[static_cast<std::uint64_t>(i)];
    return (v.adjoint() * rho.matrix() * v)(0).real();
}

double expectation(const PauliSum& h, const DensityMatrix& rho) {
    require_same_qubits(h.n_qubits(), rho.n_qubits(), "expectation");
    if (!h.is_hermitian(1e-9)) {
        throw contract_error("expectation: operator is not hermitian");
    }
    const std::int64_t dim = rho.dim();
    cplx e(0, 0);
    for (const auto& [str, coeff] : h) {
        const std::uint64_t flip = str.flip_mask();
        const std::uint64_t pm = str.phase_mask();
        const int yc = str.y_count();
        // tr(P rho) = sum_col P_{row,col} rho(row, col) with row = col ^ flip
        // and P_{row,col} = phase(row).
        cplx tr(0, 0);
        for (std::int64_t col = 0; col < dim; ++col) {
            const std::uint64_t row = static_cast<std::uint64_t>(col) ^ flip;
            tr += string_phase(yc, row, pm) * rho.matrix()(static_cast<std::int64_t>(row), col);
        }
        e += coeff * tr;
    }
    return e.real();
}

CompositionReport determinant_composition(const StateVector& s, OrbitalOrdering ordering,
                                          int n_electrons) {
    CompositionReport rep;
    const int n = s.n_qubits();
    const int target_alpha = (n_electrons + 1) / 2;
    const int target_beta = n_electrons / 2;
    const double target_sz2 = target_alpha - target_beta;  // 2*Sz
    for (std::uint64_t b = 0; b < s.dim(); ++b) {
        const double p = std::norm(s[b]);
        if (p <= 1e-8) continue;
        int n_particles = std::popcount(b);
        int n_alpha = 0;
        for (int k = 0; k < n; ++k) {
            if ((b >> k) & 1) n_alpha += is_alpha(ordering, k, n) ? 1 : 0;
        }
        const double sz2 = 2 * n_alpha - n_particles;
        if (n_particles != n_electrons) {
            ++rep.altered_particle_count;
            rep.altered_particle_probability += p;
        } else if (sz2 != target_sz2) {
            ++rep.altered_sz_count;
            rep.altered_sz_probability += p;
        } else {
            ++rep.correct_count;
            rep.correct_probability += p;
        }
    }
    return rep;
}

}  // namespace vqe
