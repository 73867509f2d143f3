#pragma once

#include <vector>

#include "effham/circuit.hpp"
#include "effham/fermion_hamiltonian.hpp"
#include "effham/pauli.hpp"

namespace effham {

/// JW images of the ladder operators. a+_p maps to
/// (1/2)(X_p - iY_p) Z_{p-1} ... Z_0 (Z string on the qubits below p).
PauliSum jw_creation(int p, int n_qubits);
PauliSum jw_annihilation(int p, int n_qubits);

/// Total-number operator N = sum_p a+_p a_p in the qubit picture.
PauliSum jw_number_operator(int n_qubits);

/// Map a spin-orbital Hamiltonian to a Pauli sum. The identity coefficient
/// carries e_core. Output is Hermitian for Hermitian input (real
/// coefficients); the imaginary residue is asserted below 1e-10 and dropped.
PauliSum jordan_wigner(const FermionHamiltonian& h);

/// True iff [S, JW(N)] is empty after pruning at 1e-10.
bool check_number_symmetry(const PauliSum& s, int n_qubits);

/// A single or double excitation generator, or a bare Pauli-string generator
/// for the qubit-minimal pool. The fermionic realizations are
///   single (p,q):     a+_p a_q - a+_q a_p
///   double (p,r,q,s): a+_p a+_r a_q a_s - a+_s a+_q a_r a_p
/// all anti-Hermitian. The Pauli realization stands for A = -i/2 P, so
/// exp(theta A) is the rotation exp(-i theta/2 P).
struct ExcitationGenerator {
    enum class Kind { Single, Double, PauliString };
    Kind kind;
    std::array<int, 4> indices{};  // (p,q,-,-) for singles
    PauliTerm pauli;               // PauliString kind only

    static ExcitationGenerator single(int p, int q) {
        return {Kind::Single, {p, q, 0, 0}, {}};
    }
    static ExcitationGenerator pair(int p, int r, int q, int s) {
        return {Kind::Double, {p, r, q, s}, {}};
    }
    static ExcitationGenerator pauli_string(PauliTerm t) {
        return {Kind::PauliString, {}, t};
    }
};

/// The generator as an anti-Hermitian Pauli sum on n_qubits.
PauliSum generator_operator(const ExcitationGenerator& g, int n_qubits);

/// Rotations whose product of exponentials equals exp(theta * g) exactly
/// (the strings in a fermionic generator's JW image mutually commute).
/// Singles yield 2 rotations, doubles 8, Pauli generators 1.
std::vector<Rotation> jw_excitation_evolution(const ExcitationGenerator& g, double theta,
                                              int n_qubits);

} // namespace effham
