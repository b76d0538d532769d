#include "vqe/chem.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

namespace vqe {

void MolecularProblem::validate() const {
    if (hamiltonian.n_qubits() != n_spin_orbitals) {
        throw dimension_error("MolecularProblem: hamiltonian register size (" +
                              std::to_string(hamiltonian.n_qubits()) +
                              ") != n_spin_orbitals (" + std::to_string(n_spin_orbitals) + ")");
    }
    if (n_electrons < 0 || n_electrons > n_spin_orbitals) {
        throw contract_error("MolecularProblem: n_electrons out of range");
    }
    if (!hamiltonian.is_hermitian(1e-9)) {
        throw contract_error("MolecularProblem: hamiltonian is not hermitian");
    }
}

namespace {

bool try_parse_double(const std::string& tok, double& out) {
    std::size_t pos = 0;
    try {
        out = std::stod(tok, &pos);
    } catch (const std::exception&) {
        return false;
    }
    return pos == tok.size();
}

std::string trimmed(const std::string& line) {
    std::string s = line;
    if (auto hash = s.find('#'); hash != std::string::npos) s.erase(hash);
    const auto first = s.find_first_not_of(" \t\r\n");
    if (first == std::string::npos) return "";
    const auto last = s.find_last_not_of(" \t\r\n");
    return s.substr(first, last - first + 1);
}

}  // namespace

MolecularProblem parse_problem(const std::string& text) {
    std::istringstream is(text);
    std::string line;
    int lineno = 0;
    int n_qubits = -1;
    MolecularProblem p;
    bool fermionic_section = false;
    std::vector<std::tuple<int, cplx, std::string>> qubit_terms;   // line, coeff, word
    std::vector<std::tuple<int, cplx, std::string>> ladder_terms;  // line, coeff, tokens
    while (std::getline(is, line)) {
        ++lineno;
        const std::string s = trimmed(line);
        if (s.empty()) continue;
        if (s == "[fermionic]") {
            fermionic_section = true;
            continue;
        }
        if (auto eq = s.find('='); eq != std::string::npos && !fermionic_section &&
                                   s.find(' ') > eq) {
            const std::string key = s.substr(0, eq), value = s.substr(eq + 1);
            if (key == "n_qubits") {
                n_qubits = std::stoi(value);
            } else if (key == "n_electrons") {
                p.n_electrons = std::stoi(value);
            } else if (key == "ordering") {
                if (value == "alternating") {
                    p.ordering = OrbitalOrdering::alternating;
                } else if (value == "block") {
                    p.ordering = OrbitalOrdering::block;
                } else {
                    throw parse_error("unknown ordering '" + value + "'", lineno);
                }
            } else if (key == "name") {
                p.name = value;
            } else if (key == "geometry") {
                p.geometry_tag = value;
            } else {
                throw parse_error("unknown header key '" + key + "'", lineno);
            }
            continue;
        }
        // Term line: <real> [<imag>] <rest>.
        std::istringstream ls(s);
        std::vector<std::string> toks;
        std::string tok;
        while (ls >> tok) toks.push_back(tok);
        double re = 0, im = 0;
        if (toks.empty() || !try_parse_double(toks[0], re)) {
            throw parse_error("expected a coefficient", lineno);
        }
        std::size_t next = 1;
        if (toks.size() > 1 && try_parse_double(toks[1], im)) next = 2;
        std::string rest;
        for (std::size_t k = next; k < toks.size(); ++k) {
            if (!rest.empty()) rest += ' ';
            rest += toks[k];
        }
        if (fermionic_section) {
            ladder_terms.emplace_back(lineno, cplx(re, im), rest);
        } else {
            if (next == 1 && toks.size() > 2) {
                throw parse_error("too many tokens in Pauli term", lineno);
            }
            qubit_terms.emplace_back(lineno, cplx(re, im), rest);
        }
    }
    if (n_qubits <= 0) throw parse_error("missing or invalid n_qubits header");
    p.n_spin_orbitals = n_qubits;
    p.hamiltonian = PauliSum(n_qubits);
    for (const auto& [ln, coeff, word] : qubit_terms) {
        PauliString str(n_qubits);
        if (!word.empty()) {
            if (static_cast<int>(word.size()) != n_qubits) {
                throw parse_error("Pauli word length != n_qubits", ln);
            }
            try {
                str = PauliString::parse(word);
            } catch (const parse_error& e) {
                throw parse_error(e.what(), ln);
            }
        }
        p.hamiltonian.add(str, coeff);
    }
    if (!ladder_terms.empty()) {
        FermionSum f;
        for (const auto& [ln, coeff, tokens] : ladder_terms) {
            std::vector<LadderOp> ops;
            try {
                ops = FermionSum::parse_ops(tokens);
            } catch (const parse_error& e) {
                throw parse_error(e.what(), ln);
            }
            for (const auto& op : ops) {
                if (op.orbital >= n_qubits) {
                    throw parse_error("orbital index out of range", ln);
                }
            }
            f.add(coeff, std::move(ops));
        }
        p.fermionic_hamiltonian = std::move(f);
    }
    p.validate();
    return p;
}

MolecularProblem load_problem(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw parse_error("cannot open problem file '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    try {
        return parse_problem(buf.str());
    } catch (parse_error& e) {
        throw parse_error(path + ": " + e.what(), 0);
    }
}

std::string format_problem(const MolecularProblem& p) {
    std::ostringstream os;
    os.precision(17);
    os << "name=" << p.name << "\n";
    os << "n_qubits=" << p.n_spin_orbitals << "\n";
    os << "n_electrons=" << p.n_electrons << "\n";
    os << "ordering=" << (p.ordering == OrbitalOrdering::alternating ? "alternating" : "block")
       << "\n";
    if (!p.geometry_tag.empty()) os << "geometry=" << p.geometry_tag << "\n";
    for (const auto& [s, c] : p.hamiltonian) {
        os << c.real() << " " << c.imag() << " " << s.str() << "\n";
    }
    if (p.fermionic_hamiltonian) {
        os << "[fermionic]\n";
        for (const auto& t : p.fermionic_hamiltonian->terms) {
            os << t.coeff.real() << " " << t.coeff.imag();
            for (const auto& op : t.ops) os << " " << op.orbital << (op.dagger ? "^" : "");
            os << "\n";
        }
    }
    return os.str();
}

void save_problem(const MolecularProblem& p, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw parse_error("cannot write problem file '" + path + "'");
    out << format_problem(p);
}

MolecularProblem h2_problem() {
    MolecularProblem p;
    p.name = "H2";
    p.n_spin_orbitals = 4;
    p.n_electrons = 2;
    p.ordering = OrbitalOrdering::alternating;
    p.geometry_tag = "0.74";
    p.hamiltonian = PauliSum(4);
    struct Row {
        double coeff;
        const char* word;
    };
    static const Row rows[] = {
        {-0.09706626816762856, "IIII"},
        {-0.04530261550379927, "XXYY"},
        {0.04530261550379927, "XYYX"},
        {0.04530261550379927, "YXXY"},
        {-0.04530261550379927, "YYXX"},
        {0.17141282644776898, "ZIII"},
        {0.1686889817036120, "ZZII"},
        {0.12062523483390417, "ZIZI"},
        {0.16592785033770344, "ZIIZ"},
        {0.17141282644776903, "IZII"},
        {0.16592785033770344, "IZZI"},
        {0.12062523483390417, "IZIZ"},
        {-0.22343153690813572, "IIZI"},
        {0.174412876122616, "IIZZ"},
        {-0.22343153690813572, "IIIZ"},
    };
    for (const auto& r : rows) p.hamiltonian.add(PauliString::parse(r.word), r.coeff);

    FermionSum f;
    auto add = [&f](double c, const std::string& tokens) {
        f.add(cplx(c, 0), FermionSum::parse_ops(tokens));
    };
    f.add(cplx(0.7151043390810812, 0), {});
    add(-1.2533097866459773, "0^ 0");
    add(-1.2533097866459773, "1^ 1");
    add(-0.47506884877217576, "2^ 2");
    add(-0.47506884877217576, "3^ 3");
    add(0.3373779634072241, "0^ 0^ 0 0");
    add(0.09060523100759854, "0^ 0^ 2 2");
    add(0.3373779634072241, "0^ 1^ 1 0");
    add(0.09060523100759854, "0^ 1^ 3 2");
    add(0.09060523100759854, "0^ 2^ 0 2");
    add(0.3318557006754069, "0^ 2^ 2 0");
    add(0.09060523100759854, "0^ 3^ 1 2");
    add(0.3318557006754069, "0^ 3^ 3 0");
    add(0.3373779634072241, "1^ 0^ 0 1");
    add(0.09060523100759854, "1^ 0^ 2 3");
    add(0.3373779634072241, "1^ 1^ 1 1");
    add(0.09060523100759854, "1^ 1^ 3 3");
    add(0.09060523100759854, "1^ 2^ 0 3");
    add(0.3318557006754069, "1^ 2^ 2 1");
    add(0.09060523100759854, "1^ 3^ 1 3");
    add(0.3318557006754069, "1^ 3^ 3 1");
    add(0.3318557006754069, "2^ 0^ 0 2");
    add(0.09060523100759854, "2^ 0^ 2 0");
    add(0.3318557006754069, "2^ 1^ 1 2");
    add(0.09060523100759854, "2^ 1^ 3 0");
    add(0.09060523100759854, "2^ 2^ 0 0");
    add(0.348825752245232, "2^ 2^ 2 2");
    add(0.09060523100759854, "2^ 3^ 1 0");
    add(0.348825752245232, "2^ 3^ 3 2");
    add(0.3318557006754069, "3^ 0^ 0 3");
    add(0.09060523100759854, "3^ 0^ 2 1");
    add(0.3318557006754069, "3^ 1^ 1 3");
    add(0.09060523100759854, "3^ 1^ 3 1");
    add(0.09060523100759854, "3^ 2^ 0 1");
    add(0.348825752245232, "3^ 2^ 2 3");
    add(0.09060523100759854, "3^ 3^ 1 1");
    add(0.348825752245232, "3^ 3^ 3 3");
    p.fermionic_hamiltonian = std::move(f);
    p.validate();
    return p;
}

StateVector hartree_fock_state(const MolecularProblem& p) {
    std::uint64_t index = 0;
    const int n = p.n_spin_orbitals;
    if (p.ordering == OrbitalOrdering::alternating) {
        for (int k = 0; k < p.n_electrons; ++k) index |= 1ull << k;
    } else {
        const int n_alpha = (p.n_electrons + 1) / 2;
        const int n_beta = p.n_electrons / 2;
        for (int k = 0; k < n_alpha; ++k) index |= 1ull << alpha_index(p.ordering, k, n);
        for (int k = 0; k < n_beta; ++k) index |= 1ull << beta_index(p.ordering, k, n);
    }
    return StateVector::basis_state(n, index);
}

long long estimate_shots(const PauliSum& h, double epsilon) {
    if (epsilon <= 0) throw contract_error("estimate_shots: epsilon must be positive");
    double sum = 0;
    for (const auto& [s, c] : h) {
        if (s.is_identity()) continue;
        sum += std::abs(c);
    }
    return static_cast<long long>(std::ceil(sum * sum / (epsilon * epsilon)));
}

ShotPlan make_shot_plan(const PauliSum& h, long long total) {
    if (total < 0) throw contract_error("make_shot_plan: negative total");
    double sum = 0;
    std::vector<std::pair<PauliString, double>> weights;
    for (const auto& [s, c] : h) {
        if (s.is_identity()) continue;
        weights.emplace_back(s, std::abs(c));
        sum += std::abs(c);
    }
    ShotPlan plan;
    plan.total_shots = total;
    if (weights.empty() || sum == 0) return plan;
    // Largest-remainder rounding of the proportional allocation.
    std::vector<double> exact(weights.size());
    long long assigned = 0;
    for (std::size_t i = 0; i < weights.size(); ++i) {
        exact[i] = static_cast<double>(total) * weights[i].second / sum;
        plan.per_string.emplace_back(weights[i].first,
                                     static_cast<long long>(std::floor(exact[i])));
        assigned += plan.per_string.back().second;
    }
    std::vector<std::size_t> order(weights.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return exact[a] - std::floor(exact[a]) > exact[b] - std::floor(exact[b]);
    });
    for (std::size_t k = 0; assigned < total && k < order.size(); ++k, ++assigned) {
        ++plan.per_string[order[k]].second;
    }
    return plan;
}

std::vector<std::vector<PauliString>> group_commuting(const PauliSum& h, CommuteMode mode) {
    std::vector<std::pair<PauliString, double>> entries;
    for (const auto& [s, c] : h) {
        if (!s.is_identity()) entries.emplace_back(s, std::abs(c));
    }
    // Descending weight; ties visit the lexicographically larger string first,
    // which lets high-weight strings seed groups before their substrings.
    std::stable_sort(entries.begin(), entries.end(), [](const auto& a, const auto& b) {
        if (a.second != b.second) return a.second > b.second;
        return b.first < a.first;
    });
    std::vector<std::vector<PauliString>> groups;
    for (const auto& [s, w] : entries) {
        bool placed = false;
        for (auto& g : groups) {
            bool fits = true;
            for (const auto& member : g) {
                if (!commutes(s, member, mode)) {
                    fits = false;
                    break;
                }
            }
            if (fits) {
                g.push_back(s);
                placed = true;
                break;
            }
        }
        if (!placed) groups.push_back({s});
    }
    return groups;
}

}  // namespace vqe
