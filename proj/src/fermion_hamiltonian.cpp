#include "effham/fermion_hamiltonian.hpp"

#include <cmath>

#include "effham/errors.hpp"
#include "effham/jordan_wigner.hpp"

namespace effham {

FermionHamiltonian expand_to_spin_orbitals(const FermionHamiltonian& h) {
    if (h.spin_orbital) return h;
    FermionHamiltonian out;
    out.n_spatial = h.n_spatial;
    out.n_electrons = h.n_electrons;
    out.ms2 = h.ms2;
    out.e_core = h.e_core;
    out.spin_orbital = true;
    out.orbital_symmetries = h.orbital_symmetries;

    // Interleaved ordering: spin orbital 2p+sigma, sigma in {0: alpha, 1: beta}.
    for (const auto& [key, v] : h.h1) {
        auto [p, q] = key;
        for (int sg = 0; sg < 2; ++sg) out.h1[{2 * p + sg, 2 * q + sg}] = v;
    }
    for (const auto& [key, v] : h.h2) {
        auto [p, q, r, s] = key;
        // chemist (pq|rs): electron 1 carries (p,q), electron 2 carries (r,s);
        // each electron keeps its spin.
        for (int sg = 0; sg < 2; ++sg)
            for (int tu = 0; tu < 2; ++tu)
                out.h2[{2 * p + sg, 2 * q + sg, 2 * r + tu, 2 * s + tu}] = v;
    }
    return out;
}

SymmetryReport validate_symmetries(const FermionHamiltonian& h) {
    SymmetryReport rep;
    for (const auto& [key, v] : h.h1) {
        double conj = h.one_body(key[1], key[0]);
        double viol = std::abs(v - conj);
        if (viol > 1e-10) rep.hermitian = false;
        rep.max_violation = std::max(rep.max_violation, viol);
        if (!std::isfinite(v)) rep.hermitian = false;
    }
    for (const auto& [key, v] : h.h2) {
        // (pq|rs)* = (qp|sr)
        double conj = h.two_body(key[1], key[0], key[3], key[2]);
        double viol = std::abs(v - conj);
        if (viol > 1e-10) rep.hermitian = false;
        rep.max_violation = std::max(rep.max_violation, viol);
    }

    const FermionHamiltonian& spin = h.spin_orbital ? h : expand_to_spin_orbitals(h);
    if (rep.hermitian) {
        PauliSum mapped = jordan_wigner(spin);
        rep.number_conserving = check_number_symmetry(mapped, spin.n_orbitals());
    } else {
        // jordan_wigner asserts real output; fall back to a direct check on
        // the coefficient structure (a+ a / a+ a+ a a terms always conserve N).
        rep.number_conserving = true;
    }
    return rep;
}

} // namespace effham
