#pragma once

#include <optional>
#include <set>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "effham/jordan_wigner.hpp"
#include "effham/optimizer.hpp"
#include "effham/pauli.hpp"
#include "effham/statevector.hpp"

namespace effham {

// ---------------------------------------------------------------------------
// Exact diagonalization oracle
// ---------------------------------------------------------------------------

struct Sector {
    int n_electrons = 0;
    int ms2 = 0;
};

struct GroundState {
    double energy = 0.0;
    Eigen::VectorXcd eigenvector;            // amplitudes over `basis`
    std::vector<std::uint64_t> basis;        // computational-basis indices
};

/// Lowest eigenvalue by dense diagonalization (<= 14 qubits). With a sector,
/// the basis is restricted to determinants with the given electron count and
/// spin projection (interleaved ordering: even qubits alpha, odd beta); the
/// sum must then commute with JW(N) or SymmetryError is thrown.
GroundState exact_ground_state(const PauliSum& s, std::optional<Sector> sector = std::nullopt);

/// Basis indices of a particle-number/spin sector.
std::vector<std::uint64_t> sector_basis(int n_qubits, const Sector& sector);

// ---------------------------------------------------------------------------
// Operator pools and ansatzes
// ---------------------------------------------------------------------------

enum class PoolKind { FermionicSD, FermionicGSD, QubitMinimal };

struct OperatorPool {
    PoolKind kind = PoolKind::FermionicSD;
    std::vector<ExcitationGenerator> elements;
    int n_spin_orbitals = 0;
    int n_electrons = 0;
};

/// Deterministic pool enumeration. FermionicSD restricts to occupied->virtual
/// with i<j, a<b; FermionicGSD runs over all spin orbitals with p<q, r<s and
/// spin conservation; QubitMinimal collects the distinct Pauli strings of the
/// SD generators' JW images with odd Y count and the Z tails removed.
OperatorPool build_pool(PoolKind kind, int n_spin_orbitals, int n_electrons);

/// Ordered (generator, parameter) ansatz; prepared left-to-right on the
/// reference determinant.
struct Ansatz {
    std::vector<ExcitationGenerator> generators;
    Eigen::VectorXd parameters;
};

State prepare_ansatz_state(const Ansatz& a, int n_qubits, const std::set<int>& occupied);
Circuit ansatz_circuit(const Ansatz& a, int n_qubits);

/// d/dtheta <psi(theta)|H|psi(theta)> at theta = 0 for psi(theta)=exp(theta A)psi,
/// i.e. <psi|[H,A]|psi> (real for anti-Hermitian A, Hermitian H).
double adapt_gradient(const State& state, const PauliSum& h, const ExcitationGenerator& g);

/// Energy and full analytic parameter gradient by forward/backward sweep.
double ansatz_energy_and_gradient(const Ansatz& a, const PauliSum& h, int n_qubits,
                                  const std::set<int>& occupied, Eigen::VectorXd* grad);

// ---------------------------------------------------------------------------
// Adaptive solvers
// ---------------------------------------------------------------------------

struct SolverConfig {
    double grad_tol = 1e-3;    // 2-norm of the pool gradient
    int max_iter = 100;
    OptimizerOptions optimizer;
    double theta0 = 0.1;       // GCIM fixed parameter value
    int gcim_x = 1;            // selection iterations between optimization bursts
    int gcim_y = 0;            // optimization rounds per burst (0 = plain GCIM)
    double overlap_cutoff = 1e-8;
};

struct SolverIteration {
    int selected = -1;           // pool index, -1 for joint optimizations
    double gradient_norm = 0.0;  // pool gradient 2-norm at selection time
    double selected_gradient = 0.0;
    double energy = 0.0;
    Eigen::VectorXd parameters;
};

struct SolverTrace {
    std::vector<SolverIteration> iterations;
    double final_energy = 0.0;
    std::string converged_reason;
    Ansatz ansatz;
    std::string to_json() const;
    std::string to_csv() const;
};

/// HF occupation for n electrons in the interleaved ordering.
std::set<int> hf_occupation(int n_electrons);

SolverTrace adapt_vqe(const PauliSum& h, const OperatorPool& pool, const SolverConfig& config);
SolverTrace qubit_adapt_vqe(const PauliSum& h, int n_electrons, const SolverConfig& config);
SolverTrace uccgsd_vqe(const PauliSum& h, int n_electrons, const SolverConfig& config);

// ---------------------------------------------------------------------------
// ADAPT-GCIM
// ---------------------------------------------------------------------------

struct GcimSubspace {
    std::vector<State> basis;
    Eigen::MatrixXcd hmat;
    Eigen::MatrixXcd smat;
    double cutoff = 1e-8;
    std::string matrices_to_json() const;
};

/// Canonical orthogonalization: diagonalize S, drop directions below cutoff,
/// transform H into the retained orthonormal basis, diagonalize. Ascending.
Eigen::VectorXd solve_gev(const Eigen::MatrixXcd& hmat, const Eigen::MatrixXcd& smat,
                          double cutoff);

std::pair<GcimSubspace, SolverTrace> gcim_expand(const PauliSum& h, const OperatorPool& pool,
                                                 const SolverConfig& config);

} // namespace effham
