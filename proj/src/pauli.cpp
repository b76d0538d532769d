#include "vqe/pauli.hpp"

#include <cmath>
#include <sstream>

namespace vqe {

namespace {

const cplx kI(0.0, 1.0);

void require_same_qubits(int a, int b, const char* where) {
    if (a != b) {
        throw dimension_error(std::string(where) + ": qubit count mismatch (" +
                              std::to_string(a) + " vs " + std::to_string(b) + ")");
    }
}

}  // namespace

char letter_char(Letter l) {
    switch (l) {
        case Letter::I: return 'I';
        case Letter::X: return 'X';
        case Letter::Y: return 'Y';
        case Letter::Z: return 'Z';
    }
    return '?';
}

Letter letter_from_char(char c) {
    switch (c) {
        case 'I': return Letter::I;
        case 'X': return Letter::X;
        case 'Y': return Letter::Y;
        case 'Z': return Letter::Z;
    }
    throw parse_error(std::string("unknown Pauli letter '") + c + "'");
}

PauliString PauliString::parse(const std::string& word) {
    PauliString p(static_cast<int>(word.size()));
    for (std::size_t k = 0; k < word.size(); ++k) {
        p.set(static_cast<int>(k), letter_from_char(word[k]));
    }
    return p;
}

int PauliString::weight() const {
    int w = 0;
    for (Letter l : letters_) w += (l != Letter::I);
    return w;
}

int PauliString::y_count() const {
    int w = 0;
    for (Letter l : letters_) w += (l == Letter::Y);
    return w;
}

std::uint64_t PauliString::flip_mask() const {
    std::uint64_t m = 0;
    for (std::size_t k = 0; k < letters_.size(); ++k) {
        if (letters_[k] == Letter::X || letters_[k] == Letter::Y) m |= (1ull << k);
    }
    return m;
}

std::uint64_t PauliString::phase_mask() const {
    std::uint64_t m = 0;
    for (std::size_t k = 0; k < letters_.size(); ++k) {
        if (letters_[k] == Letter::Y || letters_[k] == Letter::Z) m |= (1ull << k);
    }
    return m;
}

std::string PauliString::str() const {
    std::string s;
    s.reserve(letters_.size());
    for (Letter l : letters_) s.push_back(letter_char(l));
    return s;
}

StringProduct multiply_strings(const PauliString& a, const PauliString& b) {
    require_same_qubits(a.n_qubits(), b.n_qubits(), "multiply_strings");
    PauliString prod(a.n_qubits());
    // Phase tracked as an exponent of i modulo 4.
    int ipow = 0;
    for (int k = 0; k < a.n_qubits(); ++k) {
        auto la = a.at(k), lb = b.at(k);
        prod.set(k, static_cast<Letter>(static_cast<int>(la) ^ static_cast<int>(lb)));
        if (la == Letter::I || lb == Letter::I || la == lb) continue;
        // Cyclic order XY, YZ, ZX contributes +i, the reverse -i.
        int ia = static_cast<int>(la), ib = static_cast<int>(lb);
        bool forward = (ib - ia + 3) % 3 == 1;  // X->Y->Z->X
        ipow += forward ? 1 : 3;
    }
    static const cplx phases[4] = {cplx(1, 0), cplx(0, 1), cplx(-1, 0), cplx(0, -1)};
    return {phases[ipow % 4], prod};
}

bool commutes(const PauliString& a, const PauliString& b, CommuteMode mode) {
    require_same_qubits(a.n_qubits(), b.n_qubits(), "commutes");
    int anti = 0;
    for (int k = 0; k < a.n_qubits(); ++k) {
        auto la = a.at(k), lb = b.at(k);
        bool pos_commutes = la == Letter::I || lb == Letter::I || la == lb;
        if (!pos_commutes) {
            if (mode == CommuteMode::qubitwise) return false;
            ++anti;
        }
    }
    return anti % 2 == 0;
}

void PauliSum::add(const PauliString& s, cplx coeff) {
    require_same_qubits(n_qubits_, s.n_qubits(), "PauliSum::add");
    auto it = terms_.find(s);
    if (it == terms_.end()) {
        if (std::abs(coeff) >= kDropTolerance) terms_.emplace(s, coeff);
        return;
    }
    it->second += coeff;
    if (std::abs(it->second) < kDropTolerance) terms_.erase(it);
}

cplx PauliSum::coefficient(const PauliString& s) const {
    auto it = terms_.find(s);
    return it == terms_.end() ? cplx(0, 0) : it->second;
}

bool PauliSum::is_hermitian(double tol) const {
    for (const auto& [s, c] : terms_) {
        if (std::abs(c.imag()) > tol) return false;
    }
    return true;
}

bool PauliSum::is_antihermitian(double tol) const {
    for (const auto& [s, c] : terms_) {
        if (std::abs(c.real()) > tol) return false;
    }
    return true;
}

double PauliSum::leading_magnitude() const {
    double m = 0;
    for (const auto& [s, c] : terms_) m = std::max(m, std::abs(c));
    return m;
}

PauliSum& PauliSum::operator+=(const PauliSum& o) {
    require_same_qubits(n_qubits_, o.n_qubits_, "PauliSum::operator+=");
    for (const auto& [s, c] : o.terms_) add(s, c);
    return *this;
}

PauliSum& PauliSum::operator-=(const PauliSum& o) {
    require_same_qubits(n_qubits_, o.n_qubits_, "PauliSum::operator-=");
    for (const auto& [s, c] : o.terms_) add(s, -c);
    return *this;
}

PauliSum& PauliSum::operator*=(cplx c) {
    if (std::abs(c) < kDropTolerance) {
        terms_.clear();
        return *this;
    }
    for (auto& [s, v] : terms_) v *= c;
    // Rescaling may push terms below the drop tolerance.
    for (auto it = terms_.begin(); it != terms_.end();) {
        it = std::abs(it->second) < kDropTolerance ? terms_.erase(it) : std::next(it);
    }
    return *this;
}

PauliSum operator*(const PauliSum& a, const PauliSum& b) {
    require_same_qubits(a.n_qubits(), b.n_qubits(), "PauliSum::operator*");
    PauliSum out(a.n_qubits());
    for (const auto& [sa, ca] : a) {
        for (const auto& [sb, cb] : b) {
            auto [phase, prod] = multiply_strings(sa, sb);
            out.add(prod, ca * cb * phase);
        }
    }
    return out;
}

std::string PauliSum::str() const {
    std::ostringstream os;
    os.precision(12);
    bool first = true;
    for (const auto& [s, c] : terms_) {
        if (!first) os << " + ";
        first = false;
        os << "(" << c.real() << (c.imag() < 0 ? "-" : "+") << std::abs(c.imag()) << "i)";
        os << "*" << s.str();
    }
    if (first) os << "0";
    return os.str();
}

PauliSum commutator(const PauliSum& h, const PauliSum& a) {
    require_same_qubits(h.n_qubits(), a.n_qubits(), "commutator");
    PauliSum out(h.n_qubits());
    for (const auto& [sh, ch] : h) {
        for (const auto& [sa, ca] : a) {
            // [P, Q] vanishes exactly when the strings commute.
            if (commutes(sh, sa, CommuteMode::general)) continue;
            auto [phase, prod] = multiply_strings(sh, sa);
            out.add(prod, 2.0 * ch * ca * phase);  // PQ - QP = 2 PQ when anticommuting
        }
    }
    return out;
}

PauliSum strip_z_chain(const PauliSum& p, const std::set<int>& support) {
    PauliSum out(p.n_qubits());
    for (const auto& [s, c] : p) {
        PauliString stripped = s;
        for (int k = 0; k < s.n_qubits(); ++k) {
            if (s.at(k) == Letter::Z && !support.count(k)) stripped.set(k, Letter::I);
        }
        out.add(stripped, c);
    }
    return out;
}

PauliSum normalize_leading(const PauliSum& p) {
    double lead = p.leading_magnitude();
    if (lead == 0) return p;
    PauliSum out = p;
    out *= cplx(1.0 / lead, 0.0);
    return out;
}

void FermionSum::add(cplx coeff, std::vector<LadderOp> ops) {
    terms.push_back(FermionTerm{coeff, std::move(ops)});
}

FermionSum FermionSum::adjoint() const {
    FermionSum out;
    for (const auto& t : terms) {
        FermionTerm a;
        a.coeff = std::conj(t.coeff);
        for (auto it = t.ops.rbegin(); it != t.ops.rend(); ++it) {
            a.ops.push_back(LadderOp{it->orbital, !it->dagger});
        }
        out.terms.push_back(std::move(a));
    }
    return out;
}

FermionSum& FermionSum::operator+=(const FermionSum& o) {
    terms.insert(terms.end(), o.terms.begin(), o.terms.end());
    return *this;
}

FermionSum& FermionSum::operator-=(const FermionSum& o) {
    for (const auto& t : o.terms) terms.push_back(FermionTerm{-t.coeff, t.ops});
    return *this;
}

std::vector<LadderOp> FermionSum::parse_ops(const std::string& tokens) {
    std::vector<LadderOp> ops;
    std::istringstream is(tokens);
    std::string tok;
    while (is >> tok) {
        bool dag = false;
        if (tok.size() > 1 && tok.back() == '^') {
            dag = true;
            tok.pop_back();
        }
        std::size_t pos = 0;
        int orbital;
        try {
            orbital = std::stoi(tok, &pos);
        } catch (const std::exception&) {
            throw parse_error("bad ladder token '" + tok + "'");
        }
        if (pos != tok.size() || orbital < 0) {
            throw parse_error("bad ladder token '" + tok + "'");
        }
        ops.push_back(LadderOp{orbital, dag});
    }
    return ops;
}

std::string FermionSum::str() const {
    std::ostringstream os;
    os.precision(12);
    bool first = true;
    for (const auto& t : terms) {
        if (!first) os << " + ";
        first = false;
        os << "(" << t.coeff.real() << (t.coeff.imag() < 0 ? "-" : "+")
           << std::abs(t.coeff.imag()) << "i)";
        for (const auto& op : t.ops) {
            os << " " << op.orbital << (op.dagger ? "^" : "");
        }
    }
    if (first) os << "0";
    return os.str();
}

PauliSum jordan_wigner(const LadderOp& op, int n_qubits) {
    if (op.orbital >= n_qubits) {
        throw dimension_error("jordan_wigner: orbital " + std::to_string(op.orbital) +
                              " out of range for " + std::to_string(n_qubits) + " qubits");
    }
    PauliString x(n_qubits), y(n_qubits);
    for (int k = 0; k < op.orbital; ++k) {
        x.set(k, Letter::Z);
        y.set(k, Letter::Z);
    }
    x.set(op.orbital, Letter::X);
    y.set(op.orbital, Letter::Y);
    PauliSum out(n_qubits);
    out.add(x, cplx(0.5, 0));
    // Creation carries -i/2 Y, annihilation +i/2 Y.
    out.add(y, op.dagger ? cplx(0, -0.5) : cplx(0, 0.5));
    return out;
}

PauliSum jordan_wigner(const FermionSum& f, int n_qubits) {
    PauliSum out(n_qubits);
    for (const auto& term : f.terms) {
        PauliSum acc(n_qubits);
        acc.add(PauliString(n_qubits), term.coeff);
        for (const auto& op : term.ops) {
            acc = acc * jordan_wigner(op, n_qubits);
        }
        out += acc;
    }
    return out;
}

}  // namespace vqe
