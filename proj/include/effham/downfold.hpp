#pragma once

#include <cstdint>
#include <set>
#include <vector>

#include <Eigen/Dense>

#include "effham/fermion_hamiltonian.hpp"

namespace effham::downfold {

/// Dense Fock-space toy model: operators are 2^n x 2^n matrices over
/// occupation-number basis states of n spin orbitals (bit p of the basis
/// index = occupation of spin orbital p). Capped at 8 spin orbitals.
using Matrix = Eigen::MatrixXcd;

constexpr int kMaxSpinOrbitals = 8;

struct ActiveSpaceDef {
    std::set<int> active;        // active spin-orbital indices
    std::uint64_t reference = 0; // reference determinant occupation bits
};

/// One external cluster amplitude: a single (creation={a}, annihilation={i})
/// or double (creation={a,b}, annihilation={i,j}) excitation with its value.
struct Amplitude {
    std::vector<int> creation;
    std::vector<int> annihilation;
    double value = 0.0;
};

Matrix ladder_creation(int p, int n_spin_orbitals);
Matrix ladder_annihilation(int p, int n_spin_orbitals);

/// Dense matrix of a spin-orbital Hamiltonian over the full Fock space.
Matrix build_dense(const FermionHamiltonian& h);

/// sigma = T_ext - T_ext^dag; every amplitude must carry at least one
/// inactive index (ExternalityError otherwise). Anti-Hermitian by construction.
Matrix build_sigma(const std::vector<Amplitude>& amplitudes, const ActiveSpaceDef& a,
                   int n_spin_orbitals);

/// exp(sigma) for anti-Hermitian sigma via the spectral decomposition of
/// i*sigma (unitary output).
Matrix exp_antihermitian(const Matrix& sigma);

/// H_N = H - <ref|H|ref> I and the normal-product Fock operator F_N built
/// from the reference-determinant mean-field density.
struct NormalParts {
    Matrix h_n;
    Matrix f_n;
};
NormalParts fock_normal_parts(const FermionHamiltonian& h, std::uint64_t reference);

enum class BchMode { Exact, Rank, A7 };

/// Similarity transform exp(-sigma) H exp(sigma):
///  Exact   - dense exponentials;
///  Rank(k) - BCH series through k-fold commutators;
///  A7      - H + [H_N,s] + 1/2[[H_N,s],s] + 1/6[[[F_N,s],s],s].
Matrix bch_transform(const FermionHamiltonian& h, const Matrix& sigma, BchMode mode, int rank = 3,
                     std::uint64_t reference = 0);

/// Matrix-level variants (testable independently of the fermionic assembly).
Matrix bch_exact(const Matrix& h, const Matrix& sigma);
Matrix bch_rank(const Matrix& h, const Matrix& sigma, int rank);
Matrix bch_a7(const Matrix& h, const Matrix& h_n, const Matrix& f_n, const Matrix& sigma);

/// Restriction of a transformed Hamiltonian to determinants whose excitation
/// relative to the reference lives entirely in active orbitals.
struct ProjectedOperator {
    Matrix matrix;
    std::vector<std::uint64_t> basis;
};
ProjectedOperator project_active(const Matrix& hbar, const ActiveSpaceDef& a, int n_spin_orbitals);

/// Active-electron number operator restricted to the projected basis.
Matrix active_number_operator(const ActiveSpaceDef& a, const std::vector<std::uint64_t>& basis);

} // namespace effham::downfold
