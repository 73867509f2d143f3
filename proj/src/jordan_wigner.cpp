#include "effham/jordan_wigner.hpp"

#include <cassert>
#include <cmath>

#include "effham/errors.hpp"

namespace effham {

PauliSum jw_creation(int p, int n_qubits) {
    if (p < 0 || p >= n_qubits) throw IndexError("jw_creation: orbital index out of range");
    std::uint64_t tail = (p == 0) ? 0 : ((1ULL << p) - 1);
    PauliSum s(n_qubits);
    s.add((1ULL << p), tail, cplx{0.5, 0.0});               // X_p * Z tail
    s.add((1ULL << p), tail | (1ULL << p), cplx{0.0, -0.5}); // -i/2 Y_p * Z tail
    return s;
}

PauliSum jw_annihilation(int p, int n_qubits) {
    if (p < 0 || p >= n_qubits) throw IndexError("jw_annihilation: orbital index out of range");
    std::uint64_t tail = (p == 0) ? 0 : ((1ULL << p) - 1);
    PauliSum s(n_qubits);
    s.add((1ULL << p), tail, cplx{0.5, 0.0});
    s.add((1ULL << p), tail | (1ULL << p), cplx{0.0, 0.5});
    return s;
}

PauliSum jw_number_operator(int n_qubits) {
    PauliSum s(n_qubits);
    for (int p = 0; p < n_qubits; ++p) {
        s.add_identity(cplx{0.5, 0.0});
        s.add(0, 1ULL << p, cplx{-0.5, 0.0}); // a+_p a_p = (I - Z_p)/2
    }
    return s;
}

PauliSum jordan_wigner(const FermionHamiltonian& h) {
    if (!h.spin_orbital)
        throw DimensionError("jordan_wigner: expand_to_spin_orbitals first");
    int n = h.n_orbitals();
    if (n > 64) throw DimensionError("jordan_wigner: more than 64 spin orbitals unsupported");

    std::vector<PauliSum> cre, ann;
    cre.reserve(n);
    ann.reserve(n);
    for (int p = 0; p < n; ++p) {
        cre.push_back(jw_creation(p, n));
        ann.push_back(jw_annihilation(p, n));
    }

    PauliSum out(n);
    out.add_identity(cplx{h.e_core, 0.0});
    for (const auto& [key, v] : h.h1) {
        auto [p, q] = key;
        out += cre[p].multiplied_by(ann[q]) * cplx{v, 0.0};
    }
    for (const auto& [key, v] : h.h2) {
        auto [p, q, r, s] = key;
        // chemist (pq|rs): 1/2 a+_p a+_r a_s a_q
        out += cre[p].multiplied_by(cre[r]).multiplied_by(ann[s]).multiplied_by(ann[q]) *
               cplx{0.5 * v, 0.0};
    }

    assert(out.max_imag() < 1e-10);
    // Hermitian input: drop the rounding-level imaginary residue.
    PauliSum real_out(n);
    for (const auto& t : out.terms()) real_out.add(t.x_mask, t.z_mask, cplx{t.coeff.real(), 0.0});
    return real_out;
}

bool check_number_symmetry(const PauliSum& s, int n_qubits) {
    PauliSum c = commutator(s, jw_number_operator(n_qubits));
    c.prune(1e-10);
    return c.empty();
}

PauliSum generator_operator(const ExcitationGenerator& g, int n_qubits) {
    switch (g.kind) {
    case ExcitationGenerator::Kind::Single: {
        auto [p, q, u0, u1] = g.indices;
        (void)u0;
        (void)u1;
        if (p == q) throw IndexError("single excitation: repeated index");
        PauliSum a = jw_creation(p, n_qubits).multiplied_by(jw_annihilation(q, n_qubits));
        PauliSum b = jw_creation(q, n_qubits).multiplied_by(jw_annihilation(p, n_qubits));
        return a + b * cplx{-1.0, 0.0};
    }
    case ExcitationGenerator::Kind::Double: {
        auto [p, r, q, s] = g.indices;
        if (p == r || q == s || p == q || p == s || r == q || r == s)
            throw IndexError("double excitation: repeated index");
        PauliSum fwd = jw_creation(p, n_qubits)
                           .multiplied_by(jw_creation(r, n_qubits))
                           .multiplied_by(jw_annihilation(q, n_qubits))
                           .multiplied_by(jw_annihilation(s, n_qubits));
        PauliSum bwd = jw_creation(s, n_qubits)
                           .multiplied_by(jw_creation(q, n_qubits))
                           .multiplied_by(jw_annihilation(r, n_qubits))
                           .multiplied_by(jw_annihilation(p, n_qubits));
        return fwd + bwd * cplx{-1.0, 0.0};
    }
    case ExcitationGenerator::Kind::PauliString: {
        PauliSum s(n_qubits);
        PauliTerm t = g.pauli;
        t.n_qubits = n_qubits;
        t.coeff = cplx{0.0, -0.5}; // A = -i/2 P
        s.add(t);
        return s;
    }
    }
    throw DimensionError("generator_operator: unknown kind");
}

std::vector<Rotation> jw_excitation_evolution(const ExcitationGenerator& g, double theta,
                                              int n_qubits) {
    PauliSum a = generator_operator(g, n_qubits);
    std::vector<Rotation> rotations;
    auto terms = a.terms();
    // The JW image of a fermionic excitation generator is a set of mutually
    // commuting strings with purely imaginary coefficients, so the product of
    // per-string exponentials is exact.
    for (std::size_t i = 0; i < terms.size(); ++i) {
        assert(std::abs(terms[i].coeff.real()) < 1e-14);
        for (std::size_t j = i + 1; j < terms.size(); ++j)
            assert(paulis_commute(terms[i], terms[j]));
    }
    if (theta == 0.0) return rotations; // identity circuit
    for (const auto& t : terms) {
        // exp(theta * c * P) with c = i*b is exp(-i(-2 theta b)/2 P)
        Rotation r;
        r.pauli = t;
        r.pauli.coeff = cplx{1.0, 0.0};
        r.angle = -2.0 * theta * t.coeff.imag();
        rotations.push_back(r);
    }
    return rotations;
}

} // namespace effham
