#include "vqe/pools.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

namespace vqe {

namespace {

const cplx kI(0, 1);

void require_even(int n, const char* who) {
    if (n < 2 || n % 2 != 0) {
        throw contract_error(std::string(who) + ": n_spin_orbitals must be even and >= 2");
    }
}

// Collapses duplicates generated along different paths: operators are
// rescaled so the leading |coefficient| is 1 and the lexicographically first
// term gets a positive imaginary part, then keyed on the full term list.
class PoolBuilder {
public:
    PoolBuilder(std::string family, int n) {
        pool_.family = std::move(family);
        pool_.n_spin_orbitals = n;
    }

    void add(PauliSum op, std::vector<int> sources, PoolOperator::Kind kind) {
        if (op.empty()) return;
        op = normalize_leading(op);
        const auto& lead = *op.begin();
        if (lead.second.imag() < 0 || (lead.second.imag() == 0 && lead.second.real() < 0)) {
            op *= cplx(-1, 0);
        }
        std::ostringstream key;
        key.precision(9);
        for (const auto& [s, c] : op) {
            key << s.str() << ":" << c.real() << ":" << c.imag() << ";";
        }
        if (!seen_.insert(key.str()).second) return;
        std::sort(sources.begin(), sources.end());
        sources.erase(std::unique(sources.begin(), sources.end()), sources.end());
        pool_.operators.push_back(PoolOperator{std::move(op), std::move(sources), kind,
                                               pool_.family});
    }

    Pool take() { return std::move(pool_); }

private:
    Pool pool_;
    std::set<std::string> seen_;
};

FermionTerm product(std::initializer_list<LadderOp> ops, double coeff = 1.0) {
    return FermionTerm{cplx(coeff, 0), std::vector<LadderOp>(ops)};
}

FermionSum minus_hc(const FermionSum& f) {
    FermionSum out = f;
    out -= f.adjoint();
    return out;
}

std::vector<int> term_orbitals(const FermionTerm& t) {
    std::vector<int> out;
    for (const auto& op : t.ops) out.push_back(op.orbital);
    return out;
}

int alpha_count(OrbitalOrdering ord, const std::vector<int>& indices, int n) {
    int c = 0;
    for (int k : indices) c += is_alpha(ord, k, n) ? 1 : 0;
    return c;
}

// All same-spin ordered pairs (i creation > annihilation j not required; i<j
// with the operator a_j^dagger a_i - h.c. fixes one sign, dedup the rest).
std::vector<std::pair<int, int>> same_spin_pairs(int n, OrbitalOrdering ord) {
    std::vector<std::pair<int, int>> pairs;
    for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
            if (is_alpha(ord, i, n) == is_alpha(ord, j, n)) pairs.emplace_back(i, j);
        }
    }
    return pairs;
}

struct Geminal {
    int r, s;  // spatial, r <= s
};

std::vector<Geminal> geminals(int spatial) {
    std::vector<Geminal> out;
    for (int r = 0; r < spatial; ++r) {
        for (int s = r; s < spatial; ++s) out.push_back({r, s});
    }
    return out;
}

// The six two-body products of the spin-adapted / spin-complemented double
// classes, as (creation, annihilation, creation, annihilation) index tuples
// over spin orbitals. Class tags: A (same spin), B (parallel mixed),
// C (cross mixed).
struct DoubleProducts {
    std::vector<FermionTerm> a, b, c;
    std::vector<int> orbitals;
};

DoubleProducts spin_double_products(int n, OrbitalOrdering ord, const Geminal& g1,
                                    const Geminal& g2) {
    const int r = g1.r, s = g1.s, p = g2.r, q = g2.s;
    const auto al = [&](int sp) { return alpha_index(ord, sp, n); };
    const auto be = [&](int sp) { return beta_index(ord, sp, n); };
    DoubleProducts out;
    auto two_body = [](int c1, int a1, int c2, int a2) {
        return product({{c1, true}, {a1, false}, {c2, true}, {a2, false}});
    };
    out.a = {two_body(al(r), al(p), al(s), al(q)), two_body(be(r), be(p), be(s), be(q))};
    out.b = {two_body(al(r), al(p), be(s), be(q)), two_body(be(r), be(p), al(s), al(q))};
    out.c = {two_body(al(r), be(p), be(s), al(q)), two_body(be(r), al(p), al(s), be(q))};
    out.orbitals = {al(r), be(r), al(s), be(s), al(p), be(p), al(q), be(q)};
    return out;
}

PauliSum jw_sum(const std::vector<FermionTerm>& terms, const std::vector<double>& weights,
                int n) {
    FermionSum f;
    for (std::size_t k = 0; k < terms.size(); ++k) {
        FermionTerm t = terms[k];
        t.coeff *= weights[k];
        f.terms.push_back(std::move(t));
    }
    return jordan_wigner(minus_hc(f), n);
}

PauliString format_string(int n, const std::string& format, int q, int p, int s, int r) {
    PauliString str(n);
    const int idx[4] = {q, p, s, r};
    for (int k = 0; k < 4; ++k) str.set(idx[k], letter_from_char(format[k]));
    return str;
}

void validate_format(const std::string& format) {
    if (format.size() != 4) throw contract_error("pool format must have 4 letters");
    int ycount = 0;
    for (char c : format) {
        if (c != 'X' && c != 'Y') throw contract_error("pool format letters must be X or Y");
        ycount += (c == 'Y');
    }
    if (ycount % 2 == 0) throw contract_error("pool format must have an odd Y count");
}

PauliSum zz_factor(int n, int a, int b, double sign) {
    PauliSum f(n);
    f.add(PauliString(n), 1.0);
    PauliString zz(n);
    zz.set(a, Letter::Z);
    zz.set(b, Letter::Z);
    f.add(zz, sign);
    return f;
}

PauliSum z4_factor(int n, int q, int p, int s, int r) {
    PauliSum f(n);
    f.add(PauliString(n), 1.0);
    PauliString z4(n);
    for (int k : {q, p, s, r}) z4.set(k, Letter::Z);
    f.add(z4, 1.0);
    return f;
}

// Spin-conserving 4-subsets {i0<i1<i2<i3} assigned to (q,p,s,r) in index
// order; the alpha count is 2 (balanced) or 4/0 (uniform).
std::vector<std::array<int, 4>> excitation_quadruples(int n, OrbitalOrdering ord) {
    std::vector<std::array<int, 4>> out;
    for (int a = 0; a < n; ++a) {
        for (int b = a + 1; b < n; ++b) {
            for (int c = b + 1; c < n; ++c) {
                for (int d = c + 1; d < n; ++d) {
                    const int ac = alpha_count(ord, {a, b, c, d}, n);
                    if (ac == 2 || ac == 0 || ac == 4) out.push_back({a, b, c, d});
                }
            }
        }
    }
    return out;
}

}  // namespace

Pool build_gsd(int n, OrbitalOrdering ord) {
    require_even(n, "build_gsd");
    PoolBuilder b("GSD", n);
    for (auto [i, j] : same_spin_pairs(n, ord)) {
        FermionSum f;
        f.terms.push_back(product({{j, true}, {i, false}}));
        b.add(jordan_wigner(minus_hc(f), n), {i, j}, PoolOperator::Kind::single);
    }
    // Doubles: creation pair (p<q), annihilation pair (r<s), spin-conserving.
    for (int p = 0; p < n; ++p) {
        for (int q = p + 1; q < n; ++q) {
            for (int r = 0; r < n; ++r) {
                for (int s = r + 1; s < n; ++s) {
                    if (std::make_pair(p, q) >= std::make_pair(r, s)) continue;
                    const int ca = alpha_count(ord, {p, q}, n);
                    const int aa = alpha_count(ord, {r, s}, n);
                    if (ca != aa) continue;
                    FermionSum f;
                    f.terms.push_back(product({{p, true}, {q, true}, {r, false}, {s, false}}));
                    b.add(jordan_wigner(minus_hc(f), n), {p, q, r, s},
                          PoolOperator::Kind::double_);
                }
            }
        }
    }
    return b.take();
}

Pool build_sgsd(int n, OrbitalOrdering ord) {
    require_even(n, "build_sgsd");
    PoolBuilder b("SGSD", n);
    const int spatial = n / 2;
    for (int p = 0; p < spatial; ++p) {
        for (int q = p + 1; q < spatial; ++q) {
            FermionSum f;
            f.terms.push_back(product({{alpha_index(ord, q, n), true},
                                       {alpha_index(ord, p, n), false}}));
            f.terms.push_back(product({{beta_index(ord, q, n), true},
                                       {beta_index(ord, p, n), false}}));
            b.add(jordan_wigner(minus_hc(f), n),
                  {alpha_index(ord, p, n), beta_index(ord, p, n), alpha_index(ord, q, n),
                   beta_index(ord, q, n)},
                  PoolOperator::Kind::single);
        }
    }
    const auto gems = geminals(spatial);
    const double w12 = 1.0 / std::sqrt(12.0);
    for (std::size_t i = 0; i < gems.size(); ++i) {
        for (std::size_t j = i + 1; j < gems.size(); ++j) {
            const auto& g1 = gems[i];
            const auto& g2 = gems[j];
            auto prod = spin_double_products(n, ord, g1, g2);
            // Triplet combination; only defined for non-degenerate geminals.
            if (g1.r != g1.s && g2.r != g2.s) {
                std::vector<FermionTerm> terms = {prod.a[0], prod.a[1], prod.b[0],
                                                  prod.b[1], prod.c[0], prod.c[1]};
                b.add(jw_sum(terms, {2 * w12, 2 * w12, w12, w12, w12, w12}, n), prod.orbitals,
                      PoolOperator::Kind::double_);
            }
            // Singlet combination.
            std::vector<FermionTerm> terms = {prod.b[0], prod.b[1], prod.c[0], prod.c[1]};
            b.add(jw_sum(terms, {0.5, 0.5, -0.5, -0.5}, n), prod.orbitals,
                  PoolOperator::Kind::double_);
        }
    }
    return b.take();
}

Pool build_scgsd(int n, OrbitalOrdering ord) {
    require_even(n, "build_scgsd");
    PoolBuilder b("SCGSD", n);
    const int spatial = n / 2;
    for (int p = 0; p < spatial; ++p) {
        for (int q = p + 1; q < spatial; ++q) {
            FermionSum f;
            f.terms.push_back(product({{alpha_index(ord, q, n), true},
                                       {alpha_index(ord, p, n), false}}));
            f.terms.push_back(product({{beta_index(ord, q, n), true},
                                       {beta_index(ord, p, n), false}}));
            b.add(jordan_wigner(minus_hc(f), n),
                  {alpha_index(ord, p, n), beta_index(ord, p, n), alpha_index(ord, q, n),
                   beta_index(ord, q, n)},
                  PoolOperator::Kind::single);
        }
    }
    const auto gems = geminals(spatial);
    for (std::size_t i = 0; i < gems.size(); ++i) {
        for (std::size_t j = i + 1; j < gems.size(); ++j) {
            const auto& g1 = gems[i];
            const auto& g2 = gems[j];
            auto prod = spin_double_products(n, ord, g1, g2);
            if (g1.r != g1.s && g2.r != g2.s) {
                b.add(jw_sum(prod.a, {1, 1}, n), prod.orbitals, PoolOperator::Kind::double_);
            }
            b.add(jw_sum(prod.b, {1, 1}, n), prod.orbitals, PoolOperator::Kind::double_);
            b.add(jw_sum(prod.c, {1, 1}, n), prod.orbitals, PoolOperator::Kind::double_);
        }
    }
    return b.take();
}

Pool build_qubit_pool(int n, OrbitalOrdering ord, bool keep_z_chain) {
    require_even(n, "build_qubit_pool");
    PoolBuilder b(keep_z_chain ? "QUBIT" : "QUBIT_NO_Z", n);
    // Every distinct string in the spin-complemented pool output becomes its
    // own i*P operator. For the no-chain variant the anticommutation chain is
    // stripped against the source operator's orbitals; any Z letters that
    // survive are then kept only in strings whose X/Y letters already touch
    // every spatial orbital (on larger registers such leftovers only dress
    // spectator orbitals, and the reference pool sizes require them cleared).
    const Pool scgsd = build_scgsd(n, ord);
    const int spatial = n / 2;
    for (const auto& source : scgsd.operators) {
        PauliSum mapped = source.op;
        if (!keep_z_chain) {
            mapped = strip_z_chain(
                mapped, std::set<int>(source.source_orbitals.begin(),
                                      source.source_orbitals.end()));
        }
        for (const auto& [str, coeff] : mapped) {
            PauliString out = str;
            if (!keep_z_chain) {
                std::set<int> xy_spatial;
                for (int k = 0; k < n; ++k) {
                    const Letter l = str.at(k);
                    if (l == Letter::X || l == Letter::Y) {
                        xy_spatial.insert(ord == OrbitalOrdering::alternating ? k / 2
                                                                              : k % spatial);
                    }
                }
                if (int(xy_spatial.size()) != spatial) {
                    for (int k = 0; k < n; ++k) {
                        if (out.at(k) == Letter::Z) out.set(k, Letter::I);
                    }
                }
            }
            std::vector<int> sources;
            for (int k = 0; k < n; ++k) {
                if (out.at(k) != Letter::I) sources.push_back(k);
            }
            PauliSum single(n);
            single.add(out, kI);
            b.add(std::move(single), std::move(sources), source.kind);
        }
    }
    return b.take();
}

namespace {

void add_format_singles(PoolBuilder& b, int n, OrbitalOrdering ord, bool with_parity_factor) {
    for (auto [i, j] : same_spin_pairs(n, ord)) {
        // Excitation i -> j keeps Y on the annihilated, X on the created index.
        PauliString yx(n);
        yx.set(i, Letter::Y);
        yx.set(j, Letter::X);
        PauliSum op(n);
        op.add(yx, kI);
        if (with_parity_factor) op = op * zz_factor(n, i, j, -1.0);
        b.add(std::move(op), {i, j}, PoolOperator::Kind::single);
    }
}

}  // namespace

Pool build_one_pool(int n, OrbitalOrdering ord, const std::string& format) {
    require_even(n, "build_one_pool");
    validate_format(format);
    PoolBuilder b("ONE(" + format + ")", n);
    add_format_singles(b, n, ord, false);
    for (const auto& quad : excitation_quadruples(n, ord)) {
        PauliSum op(n);
        op.add(format_string(n, format, quad[0], quad[1], quad[2], quad[3]), kI);
        b.add(std::move(op), {quad[0], quad[1], quad[2], quad[3]},
              PoolOperator::Kind::double_);
    }
    return b.take();
}

Pool build_two_pool(int n, OrbitalOrdering ord, const std::string& format) {
    require_even(n, "build_two_pool");
    validate_format(format);
    PoolBuilder b("TWO(" + format + ")", n);
    add_format_singles(b, n, ord, true);
    for (const auto& quad : excitation_quadruples(n, ord)) {
        PauliSum op(n);
        op.add(format_string(n, format, quad[0], quad[1], quad[2], quad[3]), kI);
        op = op * z4_factor(n, quad[0], quad[1], quad[2], quad[3]);
        b.add(std::move(op), {quad[0], quad[1], quad[2], quad[3]},
              PoolOperator::Kind::double_);
    }
    return b.take();
}

Pool build_four_pool(int n, OrbitalOrdering ord, const std::string& format) {
    require_even(n, "build_four_pool");
    validate_format(format);
    PoolBuilder b("FOUR(" + format + ")", n);
    add_format_singles(b, n, ord, true);
    for (const auto& quad : excitation_quadruples(n, ord)) {
        const int q = quad[0], p = quad[1], s = quad[2], r = quad[3];
        PauliSum base(n);
        base.add(format_string(n, format, q, p, s, r), kI);
        base = base * z4_factor(n, q, p, s, r);
        const bool a_q = is_alpha(ord, q, n), a_p = is_alpha(ord, p, n);
        const bool a_s = is_alpha(ord, s, n), a_r = is_alpha(ord, r, n);
        std::vector<std::pair<int, int>> factors;
        if (a_q == a_p && a_p == a_s && a_s == a_r) {
            // Case D: uniform spin, all three parity factors.
            factors = {{p, r}, {s, r}, {q, r}};
        } else if (a_q != a_p && a_q == a_s && a_p == a_r) {
            factors = {{p, r}};  // case A
        } else if (a_q == a_p && a_s == a_r) {
            factors = {{s, r}};  // case B
        } else {
            factors = {{q, r}};  // case C
        }
        for (auto [fa, fb] : factors) {
            b.add(base * zz_factor(n, fa, fb, -1.0), {q, p, s, r},
                  PoolOperator::Kind::double_);
        }
    }
    return b.take();
}

Pool build_eight_pool(int n, OrbitalOrdering ord) {
    require_even(n, "build_eight_pool");
    PoolBuilder b("EIGHT", n);
    // GSD operators with the Z chain stripped against each product's support.
    auto add_stripped = [&](const FermionTerm& t, std::vector<int> sources,
                            PoolOperator::Kind kind) {
        FermionSum f;
        f.terms.push_back(t);
        PauliSum mapped = jordan_wigner(minus_hc(f), n);
        const auto orbs = term_orbitals(t);
        mapped = strip_z_chain(mapped, std::set<int>(orbs.begin(), orbs.end()));
        b.add(std::move(mapped), std::move(sources), kind);
    };
    for (auto [i, j] : same_spin_pairs(n, ord)) {
        add_stripped(product({{j, true}, {i, false}}), {i, j}, PoolOperator::Kind::single);
    }
    for (int p = 0; p < n; ++p) {
        for (int q = p + 1; q < n; ++q) {
            for (int r = 0; r < n; ++r) {
                for (int s = r + 1; s < n; ++s) {
                    if (std::make_pair(p, q) >= std::make_pair(r, s)) continue;
                    if (alpha_count(ord, {p, q}, n) != alpha_count(ord, {r, s}, n)) continue;
                    add_stripped(product({{p, true}, {q, true}, {r, false}, {s, false}}),
                                 {p, q, r, s}, PoolOperator::Kind::double_);
                }
            }
        }
    }
    return b.take();
}

Pool build_min_g(int n) {
    if (n < 2) throw contract_error("build_min_g: need at least 2 qubits");
    PoolBuilder b("MIN_G", n);
    for (int k = 0; k + 1 < n; ++k) {
        PauliString zy(n);
        zy.set(k, Letter::Z);
        zy.set(k + 1, Letter::Y);
        PauliSum op(n);
        op.add(zy, kI);
        b.add(std::move(op), {k, k + 1}, PoolOperator::Kind::single);
    }
    for (int k = 0; k + 1 < n; ++k) {
        PauliString y(n);
        y.set(k, Letter::Y);
        PauliSum op(n);
        op.add(y, kI);
        b.add(std::move(op), {k}, PoolOperator::Kind::single);
    }
    return b.take();
}

Pool build_uccsd(const MolecularProblem& problem) {
    const int n = problem.n_spin_orbitals;
    const OrbitalOrdering ord = problem.ordering;
    std::vector<int> occupied, virt;
    {
        StateVector hf = hartree_fock_state(problem);
        std::uint64_t index = 0;
        for (std::uint64_t b = 0; b < hf.dim(); ++b) {
            if (std::norm(hf[b]) > 0.5) index = b;
        }
        for (int k = 0; k < n; ++k) {
            ((index >> k) & 1 ? occupied : virt).push_back(k);
        }
    }
    PoolBuilder b("UCCSD", n);
    for (int i : occupied) {
        for (int a : virt) {
            if (is_alpha(ord, i, n) != is_alpha(ord, a, n)) continue;
            FermionSum f;
            f.terms.push_back(product({{a, true}, {i, false}}));
            b.add(jordan_wigner(minus_hc(f), n), {i, a}, PoolOperator::Kind::single);
        }
    }
    for (std::size_t x = 0; x < occupied.size(); ++x) {
        for (std::size_t y = x + 1; y < occupied.size(); ++y) {
            for (std::size_t u = 0; u < virt.size(); ++u) {
                for (std::size_t v = u + 1; v < virt.size(); ++v) {
                    const int i = occupied[x], j = occupied[y];
                    const int a = virt[u], c = virt[v];
                    if (alpha_count(ord, {i, j}, n) != alpha_count(ord, {a, c}, n)) continue;
                    FermionSum f;
                    f.terms.push_back(product({{a, true}, {c, true}, {j, false}, {i, false}}));
                    b.add(jordan_wigner(minus_hc(f), n), {i, j, a, c},
                          PoolOperator::Kind::double_);
                }
            }
        }
    }
    return b.take();
}

Pool build_pool(const std::string& family, int n, OrbitalOrdering ord,
                const std::string& format) {
    if (family == "GSD") return build_gsd(n, ord);
    if (family == "SGSD") return build_sgsd(n, ord);
    if (family == "SCGSD") return build_scgsd(n, ord);
    if (family == "QUBIT") return build_qubit_pool(n, ord, true);
    if (family == "QUBIT_NO_Z") return build_qubit_pool(n, ord, false);
    if (family == "ONE") return build_one_pool(n, ord, format);
    if (family == "TWO") return build_two_pool(n, ord, format);
    if (family == "FOUR") return build_four_pool(n, ord, format);
    if (family == "EIGHT") return build_eight_pool(n, ord);
    if (family == "MIN_G") return build_min_g(n);
    throw contract_error("unknown pool family '" + family + "'");
}

}  // namespace vqe
