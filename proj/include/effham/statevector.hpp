#pragma once

#include <complex>
#include <cstdint>
#include <map>
#include <random>
#include <set>
#include <vector>

#include "effham/circuit.hpp"
#include "effham/pauli.hpp"

namespace effham {

/// Depolarizing noise attached to 2-qubit gates: after each tallied 2-qubit
/// gate a uniformly random non-identity 2-qubit Pauli is applied with
/// probability p2 (trajectory method).
struct NoiseModel {
    double p2 = 0.0;
    std::uint64_t rng_seed = 0;
};

/// Dense 2^n-amplitude state vector, qubit 0 least significant.
class State {
  public:
    explicit State(int n_qubits);

    int n_qubits() const { return n_qubits_; }
    std::size_t dim() const { return amps_.size(); }
    cplx amplitude(std::uint64_t i) const { return amps_[i]; }
    cplx& amplitude(std::uint64_t i) { return amps_[i]; }
    const std::vector<cplx>& amplitudes() const { return amps_; }

    double norm() const;
    void normalize();

    void apply_h(int q);
    void apply_s(int q);
    void apply_sdg(int q);
    void apply_rz(int q, double theta);
    void apply_cnot(int control, int target);
    void apply_x(int q);
    /// Multiply by a Pauli string in place (coeff included).
    void apply_pauli(const PauliTerm& p);

    /// state <- exp(-i theta/2 * P) state; P must carry unit coefficient.
    void apply_pauli_exp(const PauliTerm& p, double theta);

    void apply_gate(const Gate& g);

    cplx inner_product(const State& other) const; // <this|other>

    /// Exact <psi|S|psi> for Hermitian S; throws NonHermitianInput otherwise.
    double expectation(const PauliSum& s) const;
    cplx expectation_term(const PauliTerm& t) const;

    /// |out> = S|this> (linear action of a Pauli sum).
    State applied(const PauliSum& s) const;

    /// Little-endian interleaved re/im doubles.
    void dump_binary(const std::string& path) const;
    static State load_binary(const std::string& path);

  private:
    int n_qubits_;
    std::vector<cplx> amps_;
};

/// Computational-basis state with 1-bits at the occupied spin orbitals.
State init_reference(int n_qubits, const std::set<int>& occupied);

/// Apply a rotation list in order; tallies 2(w-1) CNOT-staircase entries per
/// weight-w rotation. With a noise model, each tallied 2-qubit gate is
/// followed by a random 2-qubit Pauli with probability p2 (one trajectory).
GateTally run_circuit(State& state, const Circuit& circuit, const NoiseModel* noise = nullptr,
                      std::mt19937_64* rng = nullptr);

/// Same, on an already-lowered gate sequence.
GateTally run_gates(State& state, const GateSequence& gates, const NoiseModel* noise = nullptr,
                    std::mt19937_64* rng = nullptr);

/// Rotate a copy of the state into the joint eigenbasis given by the basis
/// masks (H for X, S+H for Y per qubit) and sample computational-basis
/// outcomes from |amp|^2. Deterministic for a fixed engine state.
std::map<std::uint64_t, long> sample_in_basis(const State& state, std::uint64_t basis_x,
                                              std::uint64_t basis_z, long shots,
                                              std::mt19937_64& rng);

} // namespace effham
