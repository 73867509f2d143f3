#pragma once

#include <complex>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace effham {

using cplx = std::complex<double>;

/// One n-qubit Pauli string with a complex coefficient.
///
/// Qubit k carries X if bit k of x_mask is set, Z if bit k of z_mask is set,
/// and Y if both are set. The stored operator is coeff * (product of literal
/// X/Y/Z letters), not the symplectic X^x Z^z form, so Hermitian strings have
/// real coefficients.
struct PauliTerm {
    std::uint64_t x_mask = 0;
    std::uint64_t z_mask = 0;
    cplx coeff{1.0, 0.0};
    int n_qubits = 0;

    std::uint64_t support() const { return x_mask | z_mask; }
    int weight() const { return __builtin_popcountll(support()); }
    bool is_identity() const { return support() == 0; }

    /// Letter at qubit k: 'I', 'X', 'Y' or 'Z'.
    char letter(int k) const;

    /// e.g. "XIYZ" with qubit 0 leftmost.
    std::string letters() const;

    /// P|i> = phase * |i ^ x_mask>; returns the phase excluding coeff.
    cplx basis_phase(std::uint64_t basis_index) const;
};

/// Exact product of two Pauli strings (coefficient picks up the +-1/+-i
/// phase from the per-qubit Pauli multiplication table).
PauliTerm pauli_multiply(const PauliTerm& a, const PauliTerm& b);

/// True iff the strings commute (symplectic inner product is even).
bool paulis_commute(const PauliTerm& a, const PauliTerm& b);

/// True iff the strings commute qubit-by-qubit (equal letters or identity at
/// every position).
bool qubitwise_commute(const PauliTerm& a, const PauliTerm& b);

/// A coefficient-merged collection of Pauli terms on a fixed qubit count.
/// Terms are canonical: no two share masks and exact zeros are dropped, so
/// equality and emptiness tests are exact.
class PauliSum {
  public:
    using Key = std::pair<std::uint64_t, std::uint64_t>; // (x_mask, z_mask)

    PauliSum() = default;
    explicit PauliSum(int n_qubits) : n_qubits_(n_qubits) {}

    int n_qubits() const { return n_qubits_; }
    std::size_t size() const { return terms_.size(); }
    bool empty() const { return terms_.empty(); }

    void add(const PauliTerm& t);
    void add(std::uint64_t x, std::uint64_t z, cplx c);
    void add_identity(cplx c) { add(0, 0, c); }

    cplx coefficient(std::uint64_t x, std::uint64_t z) const;
    cplx identity_coefficient() const { return coefficient(0, 0); }

    /// Terms in deterministic (x_mask, z_mask) order.
    std::vector<PauliTerm> terms() const;

    PauliSum& operator+=(const PauliSum& other);
    PauliSum& operator*=(cplx scale);
    friend PauliSum operator+(PauliSum a, const PauliSum& b) { return a += b; }
    friend PauliSum operator*(PauliSum a, cplx s) { return a *= s; }

    /// Full operator product (all cross terms, merged).
    PauliSum multiplied_by(const PauliSum& other) const;

    /// Sum of |coeff| over non-identity terms.
    double weight() const;

    /// Largest |Im coeff| over all terms.
    double max_imag() const;
    bool is_hermitian(double tol = 1e-10) const { return max_imag() <= tol; }

    /// Removes terms with |coeff| < eps; returns the discarded weight.
    double prune(double eps);

    bool operator==(const PauliSum& other) const { return n_qubits_ == other.n_qubits_ && terms_ == other.terms_; }

    /// "coeff string" per line, e.g. "0.5 XIYZ". Imaginary parts are emitted
    /// as "(re,im)". Round-trips exactly.
    std::string to_text() const;
    static PauliSum from_text(const std::string& text);

    std::string to_json() const;
    static PauliSum from_json(const std::string& json_text);

  private:
    int n_qubits_ = 0;
    std::map<Key, cplx> terms_;
};

/// AB - BA. Qubit-wise (indeed, fully) commuting term pairs contribute zero
/// exactly and are skipped; anticommuting pairs contribute 2*AB.
PauliSum commutator(const PauliSum& a, const PauliSum& b);

/// Parse a single letter string like "XIYZ" (qubit 0 leftmost) into a term.
PauliTerm parse_pauli_letters(const std::string& letters, cplx coeff = cplx{1.0, 0.0});

} // namespace effham
