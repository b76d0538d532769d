#include "vqe/engine.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include <omp.h>

namespace vqe {

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t salt) {
    std::uint64_t z = seed + 0x9e3779b97f4a7c15ull * (salt + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
}

void OptimizerConfig::validate() const {
    if (x_tolerance <= 0 || f_tolerance <= 0) throw contract_error("optimizer tolerances must be > 0");
    if (max_evaluations < 1) throw contract_error("optimizer max_evaluations must be >= 1");
    if (kind == Kind::nelder_mead && initial_simplex_scale <= 0) {
        throw contract_error("initial_simplex_scale must be > 0");
    }
    if (kind == Kind::quasi_newton_fd && fd_step <= 0) throw contract_error("fd_step must be > 0");
}

void AdaptConfig::validate() const {
    if (epsilon <= 0) throw contract_error("adapt epsilon must be > 0");
    if (max_iterations < 0) throw contract_error("adapt max_iterations must be >= 0");
    if (growth == Growth::removal) {
        if (!(removal_r > 0 && removal_r < 1)) throw contract_error("removal r must be in (0,1)");
        if (!(removal_t > 1)) throw contract_error("removal t must be > 1");
        if (removal_window < 1) throw contract_error("removal window must be >= 1");
    }
    if (growth == Growth::conservative && conservative_n < 1) {
        throw contract_error("conservative N must be >= 1");
    }
    optimizer.validate();
}

namespace {

using Objective = std::function<double(const std::vector<double>&)>;

OptimizerResult nelder_mead(const Objective& f, const std::vector<double>& initial,
                            const OptimizerConfig& cfg) {
    const std::size_t d = initial.size();
    OptimizerResult res;
    if (d == 0) {
        res.params = {};
        res.value = f(initial);
        res.evaluations = 1;
        res.converged = true;
        return res;
    }
    std::vector<std::vector<double>> x(d + 1, initial);
    for (std::size_t i = 0; i < d; ++i) x[i + 1][i] += cfg.initial_simplex_scale;
    std::vector<double> fx(d + 1);
    int evals = 0;
    auto eval = [&](const std::vector<double>& p) {
        ++evals;
        return f(p);
    };
    for (std::size_t i = 0; i <= d; ++i) fx[i] = eval(x[i]);

    std::vector<std::size_t> order(d + 1);
    bool converged = false;
    while (evals < cfg.max_evaluations) {
        std::iota(order.begin(), order.end(), std::size_t{0});
        std::sort(order.begin(), order.end(), [&](auto a, auto b) { return fx[a] < fx[b]; });
        const std::size_t best = order[0], worst = order[d];
        const std::size_t second_worst = order[d - 1];

        double spread = 0;
        for (std::size_t i = 0; i <= d; ++i) {
            for (std::size_t k = 0; k < d; ++k) {
                spread = std::max(spread, std::abs(x[i][k] - x[best][k]));
            }
        }
        if (spread < cfg.x_tolerance && fx[worst] - fx[best] < cfg.f_tolerance) {
            converged = true;
            break;
        }

        std::vector<double> centroid(d, 0.0);
        for (std::size_t i = 0; i <= d; ++i) {
            if (i == worst) continue;
            for (std::size_t k = 0; k < d; ++k) centroid[k] += x[i][k] / double(d);
        }
        auto point = [&](double coef) {
            std::vector<double> p(d);
            for (std::size_t k = 0; k < d; ++k) {
                p[k] = centroid[k] + coef * (x[worst][k] - centroid[k]);
            }
            return p;
        };

        auto xr = point(-1.0);
        const double fr = eval(xr);
        if (fr < fx[order[0]]) {
            auto xe = point(-2.0);
            const double fe = eval(xe);
            if (fe < fr) {
                x[worst] = std::move(xe);
                fx[worst] = fe;
            } else {
                x[worst] = std::move(xr);
                fx[worst] = fr;
            }
        } else if (fr < fx[second_worst]) {
            x[worst] = std::move(xr);
            fx[worst] = fr;
        } else {
            const bool outside = fr < fx[worst];
            auto xc = point(outside ? -0.5 : 0.5);
            const double fc = eval(xc);
            if (fc < std::min(fr, fx[worst])) {
                x[worst] = std::move(xc);
                fx[worst] = fc;
            } else {
                // Shrink toward the best vertex.
                for (std::size_t i = 0; i <= d; ++i) {
                    if (i == best) continue;
                    for (std::size_t k = 0; k < d; ++k) {
                        x[i][k] = x[best][k] + 0.5 * (x[i][k] - x[best][k]);
                    }
                    fx[i] = eval(x[i]);
                    if (evals >= cfg.max_evaluations) break;
                }
            }
        }
    }

    std::size_t best = 0;
    for (std::size_t i = 1; i <= d; ++i) {
        if (fx[i] < fx[best]) best = i;
    }
    res.params = x[best];
    res.value = fx[best];
    res.evaluations = evals;
    res.converged = converged;
    return res;
}

OptimizerResult quasi_newton_fd(const Objective& f, const std::vector<double>& initial,
                                const OptimizerConfig& cfg) {
    const std::size_t d = initial.size();
    OptimizerResult res;
    int evals = 0;
    auto eval = [&](const std::vector<double>& p) {
        ++evals;
        return f(p);
    };
    if (d == 0) {
        res.value = eval(initial);
        res.evaluations = evals;
        res.converged = true;
        return res;
    }
    auto gradient = [&](const std::vector<double>& p) {
        std::vector<double> g(d);
        std::vector<double> q = p;
        for (std::size_t k = 0; k < d; ++k) {
            q[k] = p[k] + cfg.fd_step;
            const double fp = eval(q);
            q[k] = p[k] - cfg.fd_step;
            const double fm = eval(q);
            q[k] = p[k];
            g[k] = (fp - fm) / (2 * cfg.fd_step);
        }
        return g;
    };

    std::vector<double> x = initial;
    double fx = eval(x);
    std::vector<double> g = gradient(x);
    // Inverse Hessian approximation, dense row-major.
    std::vector<double> B(d * d, 0.0);
    for (std::size_t k = 0; k < d; ++k) B[k * d + k] = 1.0;

    bool converged = false;
    while (evals < cfg.max_evaluations) {
        double gmax = 0;
        for (double v : g) gmax = std::max(gmax, std::abs(v));
        if (gmax < 1e-9) {
            converged = true;
            break;
        }
        std::vector<double> p(d, 0.0);
        for (std::size_t i = 0; i < d; ++i) {
            for (std::size_t k = 0; k < d; ++k) p[i] -= B[i * d + k] * g[k];
        }
        double slope = 0;
        for (std::size_t k = 0; k < d; ++k) slope += p[k] * g[k];
        if (slope >= 0) {  // not a descent direction, reset
            for (std::size_t k = 0; k < d; ++k) p[k] = -g[k];
            slope = 0;
            for (std::size_t k = 0; k < d; ++k) slope -= g[k] * g[k];
        }
        double step = 1.0;
        std::vector<double> xn(d);
        double fn = fx;
        bool accepted = false;
        for (int ls = 0; ls < 40 && evals < cfg.max_evaluations; ++ls) {
            for (std::size_t k = 0; k < d; ++k) xn[k] = x[k] + step * p[k];
            fn = eval(xn);
            if (fn <= fx + 1e-4 * step * slope) {
                accepted = true;
                break;
            }
            step *= 0.5;
        }
        if (!accepted) {
            converged = true;  // no further progress possible along descent
            break;
        }
        std::vector<double> gn = gradient(xn);
        std::vector<double> s(d), y(d);
        double sy = 0, dx_max = 0;
        for (std::size_t k = 0; k < d; ++k) {
            s[k] = xn[k] - x[k];
            y[k] = gn[k] - g[k];
            sy += s[k] * y[k];
            dx_max = std::max(dx_max, std::abs(s[k]));
        }
        const double df = fx - fn;
        x = std::move(xn);
        fx = fn;
        g = std::move(gn);
        if (dx_max < cfg.x_tolerance || df < cfg.f_tolerance) {
            converged = true;
            break;
        }
        if (sy > 1e-12) {
            // BFGS inverse update: B <- (I - s y^T/sy) B (I - y s^T/sy) + s s^T/sy.
            std::vector<double> By(d, 0.0);
            for (std::size_t i = 0; i < d; ++i) {
                for (std::size_t k = 0; k < d; ++k) By[i] += B[i * d + k] * y[k];
            }
            double yBy = 0;
            for (std::size_t k = 0; k < d; ++k) yBy += y[k] * By[k];
            for (std::size_t i = 0; i < d; ++i) {
                for (std::size_t k = 0; k < d; ++k) {
                    B[i * d + k] += ((sy + yBy) * s[i] * s[k]) / (sy * sy) -
                                    (By[i] * s[k] + s[i] * By[k]) / sy;
                }
            }
        } else {
            for (std::size_t i = 0; i < d; ++i) {
                for (std::size_t k = 0; k < d; ++k) B[i * d + k] = (i == k) ? 1.0 : 0.0;
            }
        }
    }
    res.params = std::move(x);
    res.value = fx;
    res.evaluations = evals;
    res.converged = converged;
    return res;
}

}  // namespace

OptimizerResult minimize(const Objective& f, const std::vector<double>& initial,
                         const OptimizerConfig& config) {
    config.validate();
    for (double v : initial) {
        if (!std::isfinite(v)) throw contract_error("optimizer initial point must be finite");
    }
    return config.kind == OptimizerConfig::Kind::nelder_mead ? nelder_mead(f, initial, config)
                                                             : quasi_newton_fd(f, initial, config);
}

EnergyEvaluator EnergyEvaluator::exact(const MolecularProblem& p) {
    EnergyEvaluator e;
    e.mode_ = Mode::exact;
    e.problem_ = &p;
    return e;
}

EnergyEvaluator EnergyEvaluator::sampled(const MolecularProblem& p, long long shots_per_string,
                                         const NoiseSpec& noise, std::uint64_t seed) {
    if (shots_per_string < 1) throw contract_error("shots_per_string must be >= 1");
    noise.validate();
    EnergyEvaluator e;
    e.mode_ = Mode::sampled;
    e.problem_ = &p;
    e.shots_ = shots_per_string;
    e.noise_ = noise;
    e.seed_ = seed;
    return e;
}

StateVector EnergyEvaluator::prepare_state(const std::vector<const PauliSum*>& ops,
                                           const std::vector<double>& params) const {
    StateVector s = hartree_fock_state(*problem_);
    for (std::size_t k = 0; k < ops.size(); ++k) {
        s = apply_exponential(*ops[k], params[k], s);
    }
    return s;
}

namespace {

// Sampled expectation of a hermitian sum: qubitwise groups measured with a
// fixed shot budget each, per-group stream = base seed XOR group index.
template <typename State>
double sampled_expectation(const PauliSum& h, const State& state, long long shots,
                           const NoiseSpec& noise, std::uint64_t base_seed) {
    const int n = h.n_qubits();
    double total = h.coefficient(PauliString(n)).real();
    const auto groups = group_commuting(h, CommuteMode::qubitwise);
    for (std::size_t g = 0; g < groups.size(); ++g) {
        const auto estimates =
            sample_pauli(groups[g], state, shots, noise, base_seed ^ std::uint64_t(g));
        for (const auto& str : groups[g]) {
            total += h.coefficient(str).real() * estimates.at(str).value;
        }
    }
    return total;
}

}  // namespace

double EnergyEvaluator::energy(const std::vector<const PauliSum*>& ops,
                               const std::vector<double>& params) const {
    if (ops.size() != params.size()) throw contract_error("ops/params size mismatch");
    const PauliSum& h = problem_->hamiltonian;
    if (mode_ == Mode::exact) {
        return expectation(h, prepare_state(ops, params));
    }
    const std::uint64_t eval_seed = mix_seed(seed_, counter_++);
    if (noise_.is_trivial() || (!noise_.has_relaxation() && noise_.cnot_depolarizing_error == 0)) {
        // SPAM-only (or noiseless) sampling runs on the exact state.
        return sampled_expectation(h, prepare_state(ops, params), shots_, noise_, eval_seed);
    }
    Circuit c(problem_->n_spin_orbitals);
    const StateVector hf = hartree_fock_state(*problem_);
    std::uint64_t hf_index = 0;
    for (std::uint64_t b = 0; b < hf.dim(); ++b) {
        if (std::norm(hf[b]) > 0.5) hf_index = b;
    }
    for (int q = 0; q < problem_->n_spin_orbitals; ++q) {
        if ((hf_index >> q) & 1) c.append(Gate::x(q));
    }
    for (std::size_t k = 0; k < ops.size(); ++k) {
        c.append(compile_exponential_sum(*ops[k], params[k]));
    }
    const DensityMatrix rho = execute_density(c, noise_);
    return sampled_expectation(h, rho, shots_, noise_, eval_seed);
}

double EnergyEvaluator::observe(const PauliSum& observable, const StateVector& state) const {
    if (!observable.is_hermitian()) throw contract_error("observe requires a hermitian sum");
    if (mode_ == Mode::exact) return expectation(observable, state);
    const std::uint64_t eval_seed = mix_seed(seed_, counter_++);
    return sampled_expectation(observable, state, shots_, noise_, eval_seed);
}

StateVector prepare(const Ansatz& ansatz, const Pool& pool, const StateVector& reference) {
    StateVector s = reference;
    for (const auto& el : ansatz.elements) {
        if (!std::isfinite(el.parameter)) throw contract_error("ansatz parameter must be finite");
        s = apply_exponential(pool.operators.at(std::size_t(el.pool_index)).op, el.parameter, s);
    }
    return s;
}

double gradient_at_zero(const PauliSum& pool_op, const StateVector& state, const PauliSum& h,
                        const EnergyEvaluator& evaluator) {
    if (!h.is_hermitian()) throw contract_error("gradient_at_zero: h must be hermitian");
    if (!pool_op.is_antihermitian()) {
        throw contract_error("gradient_at_zero: pool operator must be antihermitian");
    }
    if (evaluator.mode() == EnergyEvaluator::Mode::exact) {
        const StateVector hpsi = apply_sum(h, state);
        const StateVector apsi = apply_sum(pool_op, state);
        return 2.0 * inner_product(hpsi, apsi).real();
    }
    return evaluator.observe(commutator(h, pool_op), state);
}

VqeResult vqe_minimize(const Ansatz& ansatz, const Pool& pool,
                       const std::vector<double>& initial_params,
                       const EnergyEvaluator& evaluator, const OptimizerConfig& optimizer) {
    if (initial_params.size() != ansatz.elements.size()) {
        throw contract_error("vqe_minimize: parameter count mismatch");
    }
    std::vector<const PauliSum*> ops;
    ops.reserve(ansatz.elements.size());
    for (const auto& el : ansatz.elements) {
        ops.push_back(&pool.operators.at(std::size_t(el.pool_index)).op);
    }
    const auto r = minimize([&](const std::vector<double>& p) { return evaluator.energy(ops, p); },
                            initial_params, optimizer);
    return VqeResult{r.params, r.value, r.evaluations, r.converged};
}

long long ansatz_cnot_count(const Ansatz& ansatz, const Pool& pool) {
    long long count = 0;
    for (const auto& el : ansatz.elements) {
        for (const auto& [str, coeff] : pool.operators.at(std::size_t(el.pool_index)).op) {
            const int w = str.weight();
            if (w > 1) count += 2 * (w - 1);
        }
    }
    return count;
}

std::string run_record_csv(const RunRecord& record, bool include_removals) {
    std::ostringstream out;
    out.precision(12);
    out << "iteration,energy,error,gradient_norm,selected_index,delta_e";
    if (include_removals) out << ",removals";
    out << ",optimizer_evaluations,cumulative_optimizations,cnot_count\n";
    for (const auto& r : record.rows) {
        out << r.iteration << ',' << r.energy << ',' << r.error << ',' << r.gradient_norm << ','
            << r.selected_index << ',' << r.delta_e;
        if (include_removals) out << ',' << r.removals;
        out << ',' << r.optimizer_evaluations << ',' << r.cumulative_optimizations << ','
            << r.cnot_count << '\n';
    }
    return out.str();
}

namespace {

struct PenaltyTable {
    std::map<int, double> ratio_by_pool_index;
    std::vector<double> ratio_log;

    double standard(int window) const {
        if (ratio_log.empty()) return 0;
        const std::size_t k = std::min(ratio_log.size(), std::size_t(window));
        double sum = 0;
        for (std::size_t i = ratio_log.size() - k; i < ratio_log.size(); ++i) sum += ratio_log[i];
        return sum / double(k);
    }

    double penalty(int pool_index, int window) const {
        const auto it = ratio_by_pool_index.find(pool_index);
        if (it == ratio_by_pool_index.end()) return 1.0;
        const double std_ratio = standard(window);
        if (std_ratio <= 0) return 1.0;
        return std::min(1.0, it->second / std_ratio);
    }
};

}  // namespace

RunRecord adapt_run(const MolecularProblem& problem, const Pool& pool, const AdaptConfig& config,
                    const EnergyEvaluator& evaluator) {
    config.validate();
    if (pool.operators.empty()) throw contract_error("adapt_run: empty pool");
    const PauliSum& h = problem.hamiltonian;

    RunRecord record;
    record.ground_energy = exact_ground(h).first;

    Ansatz& ansatz = record.ansatz;
    std::vector<double> params;
    PenaltyTable penalties;
    int cumulative_opts = 0;

    auto collect_ops = [&]() {
        std::vector<const PauliSum*> ops;
        for (const auto& el : ansatz.elements) {
            ops.push_back(&pool.operators[std::size_t(el.pool_index)].op);
        }
        return ops;
    };

    double e_current = evaluator.energy(collect_ops(), params);
    record.initial_energy = e_current;
    const StateVector reference = hartree_fock_state(problem);

    const bool exact_grads = evaluator.mode() == EnergyEvaluator::Mode::exact;
    const std::size_t pool_size = pool.operators.size();

    for (int iteration = 1; iteration <= config.max_iterations; ++iteration) {
        const StateVector state = prepare(ansatz, pool, reference);
        std::vector<double> grads(pool_size, 0.0);
        if (exact_grads) {
            const StateVector hpsi = apply_sum(h, state);
#pragma omp parallel for schedule(dynamic)
            for (std::int64_t i = 0; i < std::int64_t(pool_size); ++i) {
                const StateVector apsi = apply_sum(pool.operators[std::size_t(i)].op, state);
                grads[std::size_t(i)] = 2.0 * inner_product(hpsi, apsi).real();
            }
        } else {
            for (std::size_t i = 0; i < pool_size; ++i) {
                grads[i] = gradient_at_zero(pool.operators[i].op, state, h, evaluator);
            }
        }

        double norm_sq = 0, max_abs = 0;
        for (double g : grads) {
            norm_sq += g * g;
            max_abs = std::max(max_abs, std::abs(g));
        }
        const double norm = std::sqrt(norm_sq);
        if (ansatz.elements.empty() && max_abs <= 1e-10) {
            throw stalled_pool_error("every pool gradient vanishes at the reference state");
        }
        if (norm < config.epsilon) {
            record.converged = true;
            break;
        }

        // Penalties shape selection only; the convergence norm above is raw.
        std::vector<double> effective(pool_size);
        for (std::size_t i = 0; i < pool_size; ++i) {
            effective[i] = std::abs(grads[i]) * penalties.penalty(int(i), config.removal_window);
        }

        IterationRow row;
        row.iteration = iteration;
        row.gradient_norm = norm;
        int evals_this_iteration = 0;

        if (config.growth == AdaptConfig::Growth::conservative) {
            std::vector<std::size_t> order(pool_size);
            std::iota(order.begin(), order.end(), std::size_t{0});
            std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
                if (effective[a] != effective[b]) return effective[a] > effective[b];
                return a < b;
            });
            const std::size_t n_cand = std::min(pool_size, std::size_t(config.conservative_n));
            int best_index = -1;
            double best_energy = 0;
            std::vector<double> best_params;
            int best_evals = 0;
            double best_grad = 0;
            for (std::size_t c = 0; c < n_cand; ++c) {
                const int cand = int(order[c]);
                Ansatz trial = ansatz;
                trial.elements.push_back(AnsatzElement{cand, 0.0, iteration, grads[order[c]]});
                std::vector<double> trial_params = params;
                trial_params.push_back(0.0);
                const auto r = vqe_minimize(trial, pool, trial_params, evaluator, config.optimizer);
                evals_this_iteration += r.evaluations;
                ++cumulative_opts;
                if (best_index < 0 || r.energy < best_energy ||
                    (r.energy == best_energy && cand < best_index)) {
                    best_index = cand;
                    best_energy = r.energy;
                    best_params = r.params;
                    best_evals = r.evaluations;
                    best_grad = grads[order[c]];
                }
            }
            (void)best_evals;
            ansatz.elements.push_back(AnsatzElement{best_index, 0.0, iteration, best_grad});
            params = best_params;
            penalties.ratio_by_pool_index.erase(best_index);
            AnsatzElement& added = ansatz.elements.back();
            added.delta_e = best_energy - e_current;
            added.performance_ratio =
                best_grad != 0 ? std::abs(added.delta_e / best_grad) : 0.0;
            penalties.ratio_log.push_back(added.performance_ratio);
            row.selected_index = best_index;
            row.delta_e = added.delta_e;
            e_current = best_energy;
        } else {
            std::size_t selected = 0;
            for (std::size_t i = 1; i < pool_size; ++i) {
                if (effective[i] > effective[selected]) selected = i;
            }
            ansatz.elements.push_back(
                AnsatzElement{int(selected), 0.0, iteration, grads[selected]});
            penalties.ratio_by_pool_index.erase(int(selected));
            params.push_back(0.0);
            const auto r = vqe_minimize(ansatz, pool, params, evaluator, config.optimizer);
            evals_this_iteration += r.evaluations;
            ++cumulative_opts;
            params = r.params;
            AnsatzElement& added = ansatz.elements.back();
            added.delta_e = r.energy - e_current;
            added.performance_ratio =
                grads[selected] != 0 ? std::abs(added.delta_e / grads[selected]) : 0.0;
            penalties.ratio_log.push_back(added.performance_ratio);
            row.selected_index = int(selected);
            row.delta_e = added.delta_e;
            e_current = r.energy;

            if (config.growth == AdaptConfig::Growth::removal) {
                const double delta_e_j = added.delta_e;
                std::string removed_list;
                std::size_t i = 0;
                while (i + 1 < ansatz.elements.size()) {
                    const AnsatzElement el = ansatz.elements[i];
                    const bool candidate = delta_e_j < 0 && el.delta_e < 0 &&
                                           el.delta_e > config.removal_r * delta_e_j;
                    if (!candidate) {
                        ++i;
                        continue;
                    }
                    const Ansatz saved_ansatz = ansatz;
                    const std::vector<double> saved_params = params;
                    ansatz.elements.erase(ansatz.elements.begin() + std::ptrdiff_t(i));
                    std::vector<double> trial_params = params;
                    trial_params.erase(trial_params.begin() + std::ptrdiff_t(i));
                    const auto rr =
                        vqe_minimize(ansatz, pool, trial_params, evaluator, config.optimizer);
                    evals_this_iteration += rr.evaluations;
                    ++cumulative_opts;
                    const double delta_prime = rr.energy - e_current;
                    if (delta_prime <= config.removal_t * std::abs(el.delta_e)) {
                        penalties.ratio_by_pool_index[el.pool_index] = el.performance_ratio;
                        if (!removed_list.empty()) removed_list += ';';
                        removed_list += std::to_string(el.pool_index);
                        params = rr.params;
                        e_current = rr.energy;
                        // Element i is gone; the same position now holds the next one.
                    } else {
                        ansatz = saved_ansatz;
                        params = saved_params;
                        ++i;
                    }
                }
                row.removals = removed_list;
            }
        }

        for (std::size_t k = 0; k < params.size(); ++k) ansatz.elements[k].parameter = params[k];
        row.energy = e_current;
        row.error = e_current - record.ground_energy;
        row.optimizer_evaluations = evals_this_iteration;
        row.cumulative_optimizations = cumulative_opts;
        row.cnot_count = ansatz_cnot_count(ansatz, pool);
        record.rows.push_back(std::move(row));
    }

    record.params = params;
    record.final_energy = e_current;
    return record;
}

}  // namespace vqe
