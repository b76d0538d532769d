#include <omp.h>

#include <algorithm>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "vqe/engine.hpp"

namespace {

constexpr int kExitUsage = 2;
constexpr int kExitData = 3;
constexpr int kExitResource = 4;

struct Config {
    std::vector<std::string> problems;
    std::map<std::string, std::string> values;

    bool has(const std::string& k) const { return values.count(k) != 0; }
    std::string get(const std::string& k, const std::string& fallback = "") const {
        const auto it = values.find(k);
        return it == values.end() ? fallback : it->second;
    }
    double get_double(const std::string& k, double fallback) const {
        const auto it = values.find(k);
        return it == values.end() ? fallback : std::stod(it->second);
    }
    long long get_int(const std::string& k, long long fallback) const {
        const auto it = values.find(k);
        return it == values.end() ? fallback : std::stoll(it->second);
    }
};

Config load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw vqe::parse_error("cannot open config file: " + path, 0);
    Config cfg;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        const auto first = line.find_first_not_of(" \t\r");
        if (first == std::string::npos) continue;
        const auto last = line.find_last_not_of(" \t\r");
        line = line.substr(first, last - first + 1);
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw vqe::parse_error("config line is not key=value: " + line, line_no);
        }
        const std::string key = line.substr(0, eq);
        const std::string value = line.substr(eq + 1);
        if (key == "problem") {
            cfg.problems.push_back(value);
        } else {
            cfg.values[key] = value;
        }
    }
    return cfg;
}

vqe::OptimizerConfig optimizer_from(const Config& cfg) {
    vqe::OptimizerConfig opt;
    const std::string kind = cfg.get("optimizer", "nelder_mead");
    if (kind == "nelder_mead") {
        opt.kind = vqe::OptimizerConfig::Kind::nelder_mead;
    } else if (kind == "quasi_newton_fd") {
        opt.kind = vqe::OptimizerConfig::Kind::quasi_newton_fd;
    } else {
        throw vqe::contract_error("unknown optimizer: " + kind);
    }
    opt.max_evaluations = int(cfg.get_int("max_evaluations", opt.max_evaluations));
    opt.x_tolerance = cfg.get_double("x_tolerance", opt.x_tolerance);
    opt.f_tolerance = cfg.get_double("f_tolerance", opt.f_tolerance);
    opt.initial_simplex_scale = cfg.get_double("simplex_scale", opt.initial_simplex_scale);
    opt.fd_step = cfg.get_double("fd_step", opt.fd_step);
    return opt;
}

vqe::NoiseSpec noise_from(const Config& cfg) {
    vqe::NoiseSpec noise = vqe::NoiseSpec::none();
    noise.t1 = cfg.get_double("t1", 0);
    noise.t2 = cfg.get_double("t2", 0);
    noise.gate_time_1q = cfg.get_double("gate_time_1q", noise.gate_time_1q);
    noise.gate_time_2q = cfg.get_double("gate_time_2q", noise.gate_time_2q);
    noise.cnot_depolarizing_error = cfg.get_double("cnot_error", 0);
    noise.p_meas0_prep1 = cfg.get_double("p_meas0_prep1", 0);
    noise.p_meas1_prep0 = cfg.get_double("p_meas1_prep0", 0);
    noise.validate();
    return noise;
}

vqe::EnergyEvaluator evaluator_from(const Config& cfg, const vqe::MolecularProblem& problem,
                                    std::uint64_t seed) {
    const std::string mode = cfg.get("evaluator", "exact");
    if (mode == "exact") return vqe::EnergyEvaluator::exact(problem);
    if (mode == "shots") {
        return vqe::EnergyEvaluator::sampled(problem, cfg.get_int("shots", 4096),
                                             noise_from(cfg), seed);
    }
    throw vqe::contract_error("unknown evaluator mode: " + mode);
}

vqe::AdaptConfig adapt_from(const Config& cfg) {
    vqe::AdaptConfig a;
    a.epsilon = cfg.get_double("epsilon", a.epsilon);
    a.max_iterations = int(cfg.get_int("max_iterations", a.max_iterations));
    const std::string growth = cfg.get("growth", "plain");
    if (growth == "plain") {
        a.growth = vqe::AdaptConfig::Growth::plain;
    } else if (growth == "removal") {
        a.growth = vqe::AdaptConfig::Growth::removal;
    } else if (growth == "conservative") {
        a.growth = vqe::AdaptConfig::Growth::conservative;
    } else {
        throw vqe::contract_error("unknown growth strategy: " + growth);
    }
    a.removal_r = cfg.get_double("removal_r", a.removal_r);
    a.removal_t = cfg.get_double("removal_t", a.removal_t);
    a.removal_window = int(cfg.get_int("removal_window", a.removal_window));
    a.conservative_n = int(cfg.get_int("conservative_n", a.conservative_n));
    a.optimizer = optimizer_from(cfg);
    return a;
}

vqe::OrbitalOrdering ordering_from(const std::string& s) {
    if (s == "alternating") return vqe::OrbitalOrdering::alternating;
    if (s == "block") return vqe::OrbitalOrdering::block;
    throw vqe::contract_error("unknown ordering: " + s);
}

vqe::Pool pool_from(const Config& cfg, const vqe::MolecularProblem& problem) {
    const std::string family = cfg.get("pool", "QUBIT_NO_Z");
    const std::string format = cfg.get("format", "XXYX");
    if (family == "UCCSD") return vqe::build_uccsd(problem);
    return vqe::build_pool(family, problem.n_spin_orbitals, problem.ordering, format);
}

void write_output(const std::string& out_path, const std::string& text) {
    if (out_path.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream out(out_path);
    if (!out) throw vqe::parse_error("cannot open output file: " + out_path, 0);
    out << text;
}

double median(std::vector<double> v) {
    std::sort(v.begin(), v.end());
    const std::size_t n = v.size();
    return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

double quantile(std::vector<double> v, double q) {
    std::sort(v.begin(), v.end());
    if (v.size() == 1) return v[0];
    const double pos = q * double(v.size() - 1);
    const std::size_t lo = std::size_t(pos);
    const double frac = pos - double(lo);
    if (lo + 1 >= v.size()) return v.back();
    return v[lo] * (1 - frac) + v[lo + 1] * frac;
}

double mean(const std::vector<double>& v) {
    double s = 0;
    for (double x : v) s += x;
    return s / double(v.size());
}

struct CommonArgs {
    std::string config_path;
    std::string out_path;
    std::uint64_t seed = 0;
    int runs = 0;  // 0 = take from config
    int threads = 0;
};

Config make_config(const CommonArgs& args) {
    Config cfg;
    if (!args.config_path.empty()) cfg = load_config(args.config_path);
    if (args.runs > 0) cfg.values["runs"] = std::to_string(args.runs);
    if (args.seed != 0 || !cfg.has("seed")) cfg.values["seed"] = std::to_string(args.seed);
    return cfg;
}

// One adapt run per (run index); returns the error vs dense ground energy.
std::vector<double> adapt_errors(const Config& cfg, const vqe::MolecularProblem& problem,
                                 int runs, std::uint64_t master_seed) {
    const vqe::Pool pool = pool_from(cfg, problem);
    const vqe::AdaptConfig adapt_cfg = adapt_from(cfg);
    std::vector<double> errors;
    for (int run = 0; run < runs; ++run) {
        const auto evaluator =
            evaluator_from(cfg, problem, master_seed ^ std::uint64_t(run));
        const auto record = vqe::adapt_run(problem, pool, adapt_cfg, evaluator);
        errors.push_back(record.final_energy - record.ground_energy);
    }
    return errors;
}

int cmd_diag(const std::string& path, bool hf_only) {
    const auto problem = vqe::load_problem(path);
    std::cout.precision(12);
    const double hf = vqe::expectation(problem.hamiltonian, vqe::hartree_fock_state(problem));
    if (hf_only) {
        std::cout << "hf_energy=" << hf << "\n";
        return 0;
    }
    const double fci = vqe::exact_ground(problem.hamiltonian).first;
    std::cout << "problem=" << problem.name << "\n"
              << "n_qubits=" << problem.n_spin_orbitals << "\n"
              << "fci_energy=" << fci << "\n"
              << "hf_energy=" << hf << "\n"
              << "chemical_accuracy_band=" << fci - vqe::kChemicalAccuracy << ".."
              << fci + vqe::kChemicalAccuracy << "\n";
    return 0;
}

int cmd_pool(const std::string& family, int n, const std::string& ordering,
             const std::string& format) {
    const vqe::Pool pool = vqe::build_pool(family, n, ordering_from(ordering), format);
    std::cout << pool.size() << " operators\n";
    int singles = 0, doubles = 0;
    long long strings = 0;
    for (const auto& op : pool.operators) {
        (op.kind == vqe::PoolOperator::Kind::single ? singles : doubles) += 1;
        strings += static_cast<long long>(op.op.size());
    }
    std::cout << "family=" << pool.family << " n=" << n << " singles=" << singles
              << " doubles=" << doubles << " pauli_strings=" << strings << "\n";
    return 0;
}

int cmd_compile(const std::string& word, double angle, const std::string& family, int n,
                int index, const std::string& ordering, const std::string& format) {
    vqe::Circuit c;
    if (!word.empty()) {
        c = vqe::compile_pauli_exponential(vqe::PauliString::parse(word), angle);
    } else if (!family.empty()) {
        const vqe::Pool pool = vqe::build_pool(family, n, ordering_from(ordering), format);
        if (index < 0 || std::size_t(index) >= pool.size()) {
            throw vqe::contract_error("pool index out of range");
        }
        c = vqe::compile_exponential_sum(pool.operators[std::size_t(index)].op, angle);
    } else {
        std::cerr << "compile: need --string or --pool\n";
        return kExitUsage;
    }
    std::cout << c.text() << "cnots=" << c.cnot_count() << "\n";
    return 0;
}

int cmd_vqe(const CommonArgs& args) {
    const Config cfg = make_config(args);
    if (cfg.problems.empty()) {
        std::cerr << "vqe: config must list at least one problem=\n";
        return kExitUsage;
    }
    const auto problem = vqe::load_problem(cfg.problems.front());
    const vqe::Pool pool =
        cfg.get("pool", "UCCSD") == "UCCSD"
            ? vqe::build_uccsd(problem)
            : vqe::build_pool(cfg.get("pool"), problem.n_spin_orbitals, problem.ordering,
                              cfg.get("format", "XXYX"));
    vqe::Ansatz ansatz;
    for (std::size_t i = 0; i < pool.size(); ++i) {
        ansatz.elements.push_back(vqe::AnsatzElement{int(i), 0.0, 0, 0.0});
    }
    const std::uint64_t seed = std::uint64_t(cfg.get_int("seed", 0));
    const auto evaluator = evaluator_from(cfg, problem, seed);
    const auto r = vqe::vqe_minimize(ansatz, pool, std::vector<double>(pool.size(), 0.0),
                                     evaluator, optimizer_from(cfg));
    const double ground = vqe::exact_ground(problem.hamiltonian).first;
    std::ostringstream out;
    out.precision(12);
    out << "energy,error,evaluations,converged,parameters\n"
        << r.energy << ',' << r.energy - ground << ',' << r.evaluations << ',' << r.converged
        << ',' << r.params.size() << '\n';
    write_output(args.out_path, out.str());
    std::cerr << "vqe: energy=" << r.energy << " error=" << r.energy - ground << "\n";
    return 0;
}

int cmd_adapt(const CommonArgs& args) {
    const Config cfg = make_config(args);
    if (cfg.problems.empty()) {
        std::cerr << "adapt: config must list at least one problem=\n";
        return kExitUsage;
    }
    const auto problem = vqe::load_problem(cfg.problems.front());
    const vqe::Pool pool = pool_from(cfg, problem);
    const vqe::AdaptConfig adapt_cfg = adapt_from(cfg);
    const std::uint64_t seed = std::uint64_t(cfg.get_int("seed", 0));
    const auto evaluator = evaluator_from(cfg, problem, seed);
    const auto record = vqe::adapt_run(problem, pool, adapt_cfg, evaluator);
    const bool removal = adapt_cfg.growth == vqe::AdaptConfig::Growth::removal;
    write_output(args.out_path, vqe::run_record_csv(record, removal));
    std::cerr.precision(12);
    std::cerr << "adapt: iterations=" << record.rows.size()
              << " energy=" << record.final_energy
              << " error=" << record.final_energy - record.ground_energy
              << " converged=" << record.converged << "\n";
    return 0;
}

int cmd_scan(const CommonArgs& args) {
    const Config cfg = make_config(args);
    if (cfg.problems.empty()) {
        std::cerr << "scan: config must list at least one problem=\n";
        return kExitUsage;
    }
    const int runs = int(cfg.get_int("runs", 1));
    if (runs < 1) {
        std::cerr << "scan: runs must be >= 1\n";
        return kExitUsage;
    }
    const std::uint64_t seed = std::uint64_t(cfg.get_int("seed", 0));
    std::ostringstream out;
    out.precision(12);
    out << "problem,geometry,runs,energy_mean,energy_median,error_mean,error_median\n";
    for (const auto& path : cfg.problems) {
        const auto problem = vqe::load_problem(path);
        const double ground = vqe::exact_ground(problem.hamiltonian).first;
        const auto errors = adapt_errors(cfg, problem, runs, seed);
        std::vector<double> energies;
        for (double e : errors) energies.push_back(ground + e);
        out << problem.name << ',' << problem.geometry_tag << ',' << runs << ','
            << mean(energies) << ',' << median(energies) << ',' << mean(errors) << ','
            << median(errors) << '\n';
    }
    write_output(args.out_path, out.str());
    return 0;
}

int cmd_noise_sweep(const CommonArgs& args) {
    const Config cfg = make_config(args);
    if (cfg.problems.empty()) {
        std::cerr << "noise-sweep: config must list at least one problem=\n";
        return kExitUsage;
    }
    const std::string axis = cfg.get("sweep");
    if (axis != "shots" && axis != "t1t2" && axis != "spam" && axis != "cnot_error") {
        std::cerr << "noise-sweep: sweep must be shots|t1t2|spam|cnot_error\n";
        return kExitUsage;
    }
    const std::string values_csv = cfg.get("sweep_values");
    if (values_csv.empty()) {
        std::cerr << "noise-sweep: sweep_values is required\n";
        return kExitUsage;
    }
    std::vector<double> values;
    std::stringstream vs(values_csv);
    std::string tok;
    while (std::getline(vs, tok, ',')) values.push_back(std::stod(tok));
    const int runs = int(cfg.get_int("runs", 10));
    const std::uint64_t seed = std::uint64_t(cfg.get_int("seed", 0));
    const double spam_ratio = cfg.get_double("spam_ratio", 1.0);
    const auto problem = vqe::load_problem(cfg.problems.front());

    std::ostringstream out;
    out.precision(12);
    out << "sweep,value,runs,error_median,error_q25,error_q75,error_mean\n";
    for (std::size_t point = 0; point < values.size(); ++point) {
        Config point_cfg = cfg;
        point_cfg.values["evaluator"] = "shots";
        const double v = values[point];
        if (axis == "shots") {
            point_cfg.values["shots"] = std::to_string((long long)(v));
        } else if (axis == "t1t2") {
            point_cfg.values["t1"] = std::to_string(v);
            point_cfg.values["t2"] = std::to_string(v);
        } else if (axis == "spam") {
            point_cfg.values["p_meas0_prep1"] = std::to_string(v);
            point_cfg.values["p_meas1_prep0"] = std::to_string(v * spam_ratio);
        } else {
            point_cfg.values["cnot_error"] = std::to_string(v);
        }
        const auto errors =
            adapt_errors(point_cfg, problem, runs, vqe::mix_seed(seed, point));
        out << axis << ',' << v << ',' << runs << ',' << median(errors) << ','
            << quantile(errors, 0.25) << ',' << quantile(errors, 0.75) << ','
            << mean(errors) << '\n';
    }
    write_output(args.out_path, out.str());
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Variational quantum eigensolver experiment runner"};
    app.require_subcommand(1);

    CommonArgs args;
    std::string problem_path;
    std::string pool_family = "QUBIT_NO_Z";
    std::string ordering = "alternating";
    std::string format = "XXYX";
    std::string compile_word;
    double compile_angle = 0.1;
    std::string compile_family;
    int pool_n = 4;
    int compile_index = 0;

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--config", args.config_path, "key=value config file");
        sub->add_option("--seed", args.seed, "master RNG seed");
        sub->add_option("--out", args.out_path, "output CSV path (default stdout)");
        sub->add_option("--runs", args.runs, "runs per point (overrides config)");
        sub->add_option("--threads", args.threads, "OpenMP thread count");
    };

    auto* diag = app.add_subcommand("diag", "exact and reference energies of a problem file");
    diag->add_option("problem", problem_path, "problem file")->required();
    auto* hf = app.add_subcommand("hf-energy", "reference determinant energy");
    hf->add_option("problem", problem_path, "problem file")->required();
    auto* pool_cmd = app.add_subcommand("pool", "operator pool statistics");
    pool_cmd->add_option("--family", pool_family, "pool family")->required();
    pool_cmd->add_option("--n", pool_n, "spin orbital count")->required();
    pool_cmd->add_option("--ordering", ordering, "alternating|block");
    pool_cmd->add_option("--format", format, "kept double string for ONE/TWO/FOUR");
    auto* compile_cmd = app.add_subcommand("compile", "compile an exponential to gates");
    compile_cmd->add_option("--string", compile_word, "Pauli word, e.g. XXYX");
    compile_cmd->add_option("--angle", compile_angle, "rotation angle");
    compile_cmd->add_option("--pool", compile_family, "pool family to draw from");
    compile_cmd->add_option("--n", pool_n, "spin orbital count");
    compile_cmd->add_option("--index", compile_index, "pool operator index");
    compile_cmd->add_option("--ordering", ordering, "alternating|block");
    compile_cmd->add_option("--format", format, "kept double string for ONE/TWO/FOUR");
    auto* vqe_cmd = app.add_subcommand("vqe", "fixed-ansatz optimization");
    add_common(vqe_cmd);
    auto* adapt_cmd = app.add_subcommand("adapt", "adaptive ansatz growth run");
    add_common(adapt_cmd);
    auto* scan_cmd = app.add_subcommand("scan", "per-geometry runs over a problem list");
    add_common(scan_cmd);
    auto* sweep_cmd = app.add_subcommand("noise-sweep", "median/IQR error vs noise parameter");
    add_common(sweep_cmd);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return e.get_exit_code() == 0 ? 0 : kExitUsage;
    }

    if (args.threads > 0) omp_set_num_threads(args.threads);

    try {
        if (diag->parsed()) return cmd_diag(problem_path, false);
        if (hf->parsed()) return cmd_diag(problem_path, true);
        if (pool_cmd->parsed()) return cmd_pool(pool_family, pool_n, ordering, format);
        if (compile_cmd->parsed()) {
            return cmd_compile(compile_word, compile_angle, compile_family, pool_n,
                               compile_index, ordering, format);
        }
        if (vqe_cmd->parsed()) return cmd_vqe(args);
        if (adapt_cmd->parsed()) return cmd_adapt(args);
        if (scan_cmd->parsed()) return cmd_scan(args);
        if (sweep_cmd->parsed()) return cmd_noise_sweep(args);
    } catch (const vqe::resource_error& e) {
        std::cerr << "resource limit: " << e.what() << "\n";
        return kExitResource;
    } catch (const vqe::parse_error& e) {
        std::cerr << "data error: " << e.what() << "\n";
        return kExitData;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitData;
    }
    return kExitUsage;
}
