#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "vqe/chem.hpp"
#include "vqe/circuit.hpp"
#include "vqe/pools.hpp"
#include "vqe/simstate.hpp"

namespace vqe {

struct AnsatzElement {
    int pool_index = -1;
    double parameter = 0;
    int added_at_iteration = 0;
    double gradient_at_selection = 0;
    double delta_e = 0;
    double performance_ratio = 0;
};

// State preparation is exp(t_n A_n)...exp(t_1 A_1)|ref>, element 0 first.
struct Ansatz {
    std::vector<AnsatzElement> elements;
};

struct OptimizerConfig {
    enum class Kind { nelder_mead, quasi_newton_fd };
    Kind kind = Kind::nelder_mead;
    int max_evaluations = 50000;
    double x_tolerance = 1e-9;
    double f_tolerance = 1e-12;
    double initial_simplex_scale = 0.1;
    double fd_step = 1e-6;

    void validate() const;
};

struct OptimizerResult {
    std::vector<double> params;
    double value = 0;
    int evaluations = 0;
    bool converged = false;
};

// Derivative-free / finite-difference local minimizers.
OptimizerResult minimize(const std::function<double(const std::vector<double>&)>& f,
                         const std::vector<double>& initial, const OptimizerConfig& config);

// Evaluates ansatz energies either exactly (statevector expectation) or by
// simulated measurement (shot sampling, optional noise channels). Sampled
// mode is deterministic given the seed; each evaluation advances an internal
// counter mixed into the per-group RNG streams.
class EnergyEvaluator {
public:
    enum class Mode { exact, sampled };

    static EnergyEvaluator exact(const MolecularProblem& p);
    static EnergyEvaluator sampled(const MolecularProblem& p, long long shots_per_string,
                                   const NoiseSpec& noise, std::uint64_t seed);

    Mode mode() const { return mode_; }
    const MolecularProblem& problem() const { return *problem_; }
    long long shots_per_string() const { return shots_; }
    const NoiseSpec& noise() const { return noise_; }

    // Energy of exp(t_k a_k)...exp(t_1 a_1)|HF>.
    double energy(const std::vector<const PauliSum*>& ops,
                  const std::vector<double>& params) const;

    // Expectation of an arbitrary hermitian observable in the prepared state.
    double observe(const PauliSum& observable, const StateVector& state) const;

private:
    EnergyEvaluator() = default;

    StateVector prepare_state(const std::vector<const PauliSum*>& ops,
                              const std::vector<double>& params) const;

    Mode mode_ = Mode::exact;
    const MolecularProblem* problem_ = nullptr;
    long long shots_ = 0;
    NoiseSpec noise_ = NoiseSpec::none();
    std::uint64_t seed_ = 0;
    mutable std::uint64_t counter_ = 0;
};

StateVector prepare(const Ansatz& ansatz, const Pool& pool, const StateVector& reference);

// Energy slope of exp(theta A)|psi> at theta = 0. Exact mode evaluates
// 2 Re<psi|H A|psi>; sampled mode measures the commutator [H, A] string by
// string on |psi>.
double gradient_at_zero(const PauliSum& pool_op, const StateVector& state, const PauliSum& h,
                        const EnergyEvaluator& evaluator);

struct VqeResult {
    std::vector<double> params;
    double energy = 0;
    int evaluations = 0;
    bool converged = false;
};

VqeResult vqe_minimize(const Ansatz& ansatz, const Pool& pool,
                       const std::vector<double>& initial_params,
                       const EnergyEvaluator& evaluator, const OptimizerConfig& optimizer);

struct AdaptConfig {
    double epsilon = 0.01;
    int max_iterations = 100;
    enum class Growth { plain, removal, conservative };
    Growth growth = Growth::plain;
    double removal_r = 0.5;
    double removal_t = 1.5;
    int removal_window = 10;
    int conservative_n = 5;
    OptimizerConfig optimizer;

    void validate() const;
};

struct IterationRow {
    int iteration = 0;
    double energy = 0;
    double error = 0;  // energy - dense ground energy
    double gradient_norm = 0;
    int selected_index = -1;
    double delta_e = 0;
    std::string removals;  // ';'-joined pool indices removed this iteration
    int optimizer_evaluations = 0;
    int cumulative_optimizations = 0;
    long long cnot_count = 0;
};

struct RunRecord {
    std::vector<IterationRow> rows;
    Ansatz ansatz;
    std::vector<double> params;
    double initial_energy = 0;
    double final_energy = 0;
    double ground_energy = 0;
    bool converged = false;  // gradient norm fell below epsilon
};

// CSV with one row per iteration. Removal-mode output adds a `removals`
// column; the plain schema is a strict subset.
std::string run_record_csv(const RunRecord& record, bool include_removals);

RunRecord adapt_run(const MolecularProblem& problem, const Pool& pool, const AdaptConfig& config,
                    const EnergyEvaluator& evaluator);

// CNOT cost of one ladder-compiled exponential per ansatz element.
long long ansatz_cnot_count(const Ansatz& ansatz, const Pool& pool);

// splitmix64-style mixing for derived RNG streams.
std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t salt);

}  // namespace vqe
