#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <vector>

namespace effham {

/// Active-space effective Hamiltonian in second quantization:
///
///   H = e_core + sum_pq h1(p,q) a+_p a_q
///            + 1/2 sum_pqrs h2(p,q,r,s) a+_p a+_r a_s a_q
///
/// h2 is stored in chemist notation (pq|rs). Orbitals are either spatial
/// (as parsed from FCIDUMP) or spin orbitals (after expand_to_spin_orbitals);
/// the `spin_orbital` flag records which. Spin-orbital ordering is
/// interleaved: spin orbital 2p is p-alpha, 2p+1 is p-beta.
struct FermionHamiltonian {
    int n_spatial = 0;     // spatial orbital count (unchanged by spin expansion)
    int n_electrons = 0;
    int ms2 = 0;           // twice the spin projection
    bool spin_orbital = false;
    double e_core = 0.0;
    std::map<std::array<int, 2>, double> h1;
    std::map<std::array<int, 4>, double> h2;
    std::vector<int> orbital_symmetries;

    int n_orbitals() const { return spin_orbital ? 2 * n_spatial : n_spatial; }

    double one_body(int p, int q) const {
        auto it = h1.find({p, q});
        return it == h1.end() ? 0.0 : it->second;
    }
    double two_body(int p, int q, int r, int s) const {
        auto it = h2.find({p, q, r, s});
        return it == h2.end() ? 0.0 : it->second;
    }
};

struct SymmetryReport {
    bool hermitian = true;
    bool number_conserving = true;
    double max_violation = 0.0;
};

/// Restricted spatial-orbital integrals -> spin-orbital form with the
/// interleaved ordering. One-body coefficients are copied per spin channel;
/// two-body (pq|rs) values are placed for all spin-conserving index
/// combinations.
FermionHamiltonian expand_to_spin_orbitals(const FermionHamiltonian& h);

/// Hermiticity of the coefficient maps plus number conservation of the
/// mapped qubit operator (diagnostic; never throws).
SymmetryReport validate_symmetries(const FermionHamiltonian& h);

} // namespace effham
