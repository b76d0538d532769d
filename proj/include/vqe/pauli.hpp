#pragma once

#include <complex>
#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "vqe/errors.hpp"

namespace vqe {

using cplx = std::complex<double>;

// Coefficients below this magnitude are dropped after every simplification.
inline constexpr double kDropTolerance = 1e-12;

enum class Letter : std::uint8_t { I = 0, X = 1, Y = 2, Z = 3 };

char letter_char(Letter l);
Letter letter_from_char(char c);

// Tensor product of single-qubit Paulis, one letter per qubit.
// letters[k] acts on qubit k (qubit 0 = least significant bit downstream).
class PauliString {
public:
    PauliString() = default;
    explicit PauliString(int n_qubits) : letters_(static_cast<std::size_t>(n_qubits), Letter::I) {}

    // Word format: character k is the letter on qubit k, e.g. "ZIXY" = Z0 X2 Y3.
    static PauliString parse(const std::string& word);

    int n_qubits() const { return static_cast<int>(letters_.size()); }
    Letter at(int k) const { return letters_[static_cast<std::size_t>(k)]; }
    void set(int k, Letter l) { letters_[static_cast<std::size_t>(k)] = l; }

    int weight() const;
    bool is_identity() const { return weight() == 0; }
    int y_count() const;

    // Bit masks over qubits, used by the simulator kernels.
    std::uint64_t flip_mask() const;   // X and Y positions
    std::uint64_t phase_mask() const;  // Y and Z positions

    std::string str() const;

    auto operator<=>(const PauliString&) const = default;

private:
    std::vector<Letter> letters_;
};

struct StringProduct {
    cplx phase;  // one of {1, i, -1, -i}
    PauliString product;
};

// phase * product == a * b as operators.
StringProduct multiply_strings(const PauliString& a, const PauliString& b);

enum class CommuteMode { qubitwise, general };

bool commutes(const PauliString& a, const PauliString& b, CommuteMode mode);

// Complex-weighted combination of Pauli strings on a fixed register.
class PauliSum {
public:
    PauliSum() : n_qubits_(0) {}
    explicit PauliSum(int n_qubits) : n_qubits_(n_qubits) {}

    int n_qubits() const { return n_qubits_; }
    std::size_t size() const { return terms_.size(); }
    bool empty() const { return terms_.empty(); }

    // Accumulates; terms falling below the drop tolerance disappear.
    void add(const PauliString& s, cplx coeff);
    cplx coefficient(const PauliString& s) const;

    const std::map<PauliString, cplx>& terms() const { return terms_; }
    auto begin() const { return terms_.begin(); }
    auto end() const { return terms_.end(); }

    bool is_hermitian(double tol = kDropTolerance) const;
    bool is_antihermitian(double tol = kDropTolerance) const;

    // Largest coefficient magnitude; 0 for the empty sum.
    double leading_magnitude() const;

    PauliSum& operator+=(const PauliSum& o);
    PauliSum& operator-=(const PauliSum& o);
    PauliSum& operator*=(cplx c);
    friend PauliSum operator+(PauliSum a, const PauliSum& b) { return a += b; }
    friend PauliSum operator-(PauliSum a, const PauliSum& b) { return a -= b; }
    friend PauliSum operator*(PauliSum a, cplx c) { return a *= c; }
    friend PauliSum operator*(cplx c, PauliSum a) { return a *= c; }
    friend PauliSum operator*(const PauliSum& a, const PauliSum& b);

    std::string str() const;

private:
    int n_qubits_;
    std::map<PauliString, cplx> terms_;
};

PauliSum commutator(const PauliSum& h, const PauliSum& a);

// Replaces Z letters on qubits outside `support` by I; merges duplicates.
PauliSum strip_z_chain(const PauliSum& p, const std::set<int>& support);

// Rescales so the largest coefficient magnitude is 1; empty sums pass through.
PauliSum normalize_leading(const PauliSum& p);

// Fermionic ladder operator a_orbital (dagger: creation).
struct LadderOp {
    int orbital;
    bool dagger;
    auto operator<=>(const LadderOp&) const = default;
};

struct FermionTerm {
    cplx coeff;
    std::vector<LadderOp> ops;  // operator order is significant
};

// Plain term list; not normal-ordered. The empty list term is the identity.
struct FermionSum {
    std::vector<FermionTerm> terms;

    void add(cplx coeff, std::vector<LadderOp> ops);
    FermionSum adjoint() const;
    FermionSum& operator+=(const FermionSum& o);
    FermionSum& operator-=(const FermionSum& o);

    // Token syntax: "3^ 1" means a3^dagger a1.
    static std::vector<LadderOp> parse_ops(const std::string& tokens);
    std::string str() const;
};

// a_i^dagger -> 1/2 (prod_{k<i} Z_k)(X_i - i Y_i); a_i -> the +i counterpart.
// |1> = occupied. Products map term by term; the result is simplified.
PauliSum jordan_wigner(const FermionSum& f, int n_qubits);
PauliSum jordan_wigner(const LadderOp& op, int n_qubits);

}  // namespace vqe
