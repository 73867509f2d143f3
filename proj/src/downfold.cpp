#include "effham/downfold.hpp"

#include <cmath>
#include <complex>

#include "effham/errors.hpp"

namespace effham::downfold {

namespace {

std::uint64_t dim_of(int n) { return 1ULL << n; }

void check_size(int n) {
    if (n < 1 || n > kMaxSpinOrbitals)
        throw DimensionError("downfold: spin-orbital count outside [1, 8]");
}

// fermionic sign (-1)^(number of occupied orbitals below p)
double jw_sign(std::uint64_t det, int p) {
    std::uint64_t below = det & ((1ULL << p) - 1);
    return (__builtin_popcountll(below) & 1) ? -1.0 : 1.0;
}

} // namespace

Matrix ladder_creation(int p, int n) {
    check_size(n);
    const std::uint64_t d = dim_of(n);
    Matrix m = Matrix::Zero(static_cast<long>(d), static_cast<long>(d));
    for (std::uint64_t det = 0; det < d; ++det) {
        if (det & (1ULL << p)) continue;
        m(static_cast<long>(det | (1ULL << p)), static_cast<long>(det)) = jw_sign(det, p);
    }
    return m;
}

Matrix ladder_annihilation(int p, int n) { return ladder_creation(p, n).adjoint(); }

Matrix build_dense(const FermionHamiltonian& h) {
    if (!h.spin_orbital) throw DimensionError("build_dense: expand_to_spin_orbitals first");
    const int n = h.n_orbitals();
    check_size(n);
    const long d = static_cast<long>(dim_of(n));

    std::vector<Matrix> cre(static_cast<std::size_t>(n)), ann(static_cast<std::size_t>(n));
    for (int p = 0; p < n; ++p) {
        cre[static_cast<std::size_t>(p)] = ladder_creation(p, n);
        ann[static_cast<std::size_t>(p)] = ladder_annihilation(p, n);
    }

    Matrix m = h.e_core * Matrix::Identity(d, d);
    for (const auto& [key, v] : h.h1)
        m += v * cre[static_cast<std::size_t>(key[0])] * ann[static_cast<std::size_t>(key[1])];
    for (const auto& [key, v] : h.h2)
        m += 0.5 * v * cre[static_cast<std::size_t>(key[0])] * cre[static_cast<std::size_t>(key[2])] *
             ann[static_cast<std::size_t>(key[3])] * ann[static_cast<std::size_t>(key[1])];
    return m;
}

Matrix build_sigma(const std::vector<Amplitude>& amplitudes, const ActiveSpaceDef& a, int n) {
    check_size(n);
    const long d = static_cast<long>(dim_of(n));
    Matrix t = Matrix::Zero(d, d);
    for (const auto& amp : amplitudes) {
        if (amp.creation.empty() || amp.creation.size() != amp.annihilation.size() ||
            amp.creation.size() > 2)
            throw IndexError("build_sigma: amplitudes must be singles or doubles");
        bool external = false;
        for (int idx : amp.creation)
            if (!a.active.count(idx)) external = true;
        for (int idx : amp.annihilation)
            if (!a.active.count(idx)) external = true;
        if (!external)
            throw ExternalityError("build_sigma: pure-active excitation supplied");

        Matrix op = Matrix::Identity(d, d);
        for (int idx : amp.creation) op = op * ladder_creation(idx, n);
        // doubles follow a+_a a+_b a_j a_i for creation {a,b}, annihilation {i,j}
        for (auto it = amp.annihilation.rbegin(); it != amp.annihilation.rend(); ++it)
            op = op * ladder_annihilation(*it, n);
        t += amp.value * op;
    }
    return t - t.adjoint();
}

Matrix exp_antihermitian(const Matrix& sigma) {
    if ((sigma + sigma.adjoint()).norm() > 1e-10 * (1.0 + sigma.norm()))
        throw NonHermitianInput("exp_antihermitian: sigma is not anti-Hermitian");
    Matrix hermitian = std::complex<double>{0.0, 1.0} * sigma; // i*sigma
    Eigen::SelfAdjointEigenSolver<Matrix> es(hermitian);
    Eigen::VectorXcd phases(es.eigenvalues().size());
    for (long i = 0; i < phases.size(); ++i)
        phases(i) = std::polar(1.0, -es.eigenvalues()(i));
    return es.eigenvectors() * phases.asDiagonal() * es.eigenvectors().adjoint();
}

NormalParts fock_normal_parts(const FermionHamiltonian& h, std::uint64_t reference) {
    if (!h.spin_orbital) throw DimensionError("fock_normal_parts: expand_to_spin_orbitals first");
    const int n = h.n_orbitals();
    check_size(n);
    const long d = static_cast<long>(dim_of(n));

    Matrix dense = build_dense(h);
    std::complex<double> eref = dense(static_cast<long>(reference), static_cast<long>(reference));
    NormalParts parts;
    parts.h_n = dense - eref * Matrix::Identity(d, d);

    // mean-field Fock matrix from the reference density:
    // f_pq = h_pq + sum_{i occ} [ (pq|ii) - (pi|iq) ]   (chemist notation)
    Matrix fock = Matrix::Zero(d, d);
    double f_ref = 0.0;
    for (int p = 0; p < n; ++p) {
        for (int q = 0; q < n; ++q) {
            double f = h.one_body(p, q);
            for (int i = 0; i < n; ++i) {
                if (!(reference & (1ULL << i))) continue;
                f += h.two_body(p, q, i, i) - h.two_body(p, i, i, q);
            }
            if (f == 0.0) continue;
            fock += f * ladder_creation(p, n) * ladder_annihilation(q, n);
            if (p == q && (reference & (1ULL << p))) f_ref += f;
        }
    }
    parts.f_n = fock - f_ref * Matrix::Identity(d, d);
    return parts;
}

Matrix bch_exact(const Matrix& h, const Matrix& sigma) {
    Matrix u = exp_antihermitian(sigma);
    return u.adjoint() * h * u;
}

Matrix bch_rank(const Matrix& h, const Matrix& sigma, int rank) {
    Matrix out = h;
    Matrix nested = h;
    double factorial = 1.0;
    for (int k = 1; k <= rank; ++k) {
        nested = nested * sigma - sigma * nested; // [nested, sigma]
        factorial *= k;
        out += nested / factorial;
    }
    return out;
}

Matrix bch_a7(const Matrix& h, const Matrix& h_n, const Matrix& f_n, const Matrix& sigma) {
    auto comm = [](const Matrix& a, const Matrix& b) { return a * b - b * a; };
    Matrix c1 = comm(h_n, sigma);
    Matrix c2 = comm(c1, sigma);
    Matrix c3 = comm(comm(comm(f_n, sigma), sigma), sigma);
    return h + c1 + 0.5 * c2 + (1.0 / 6.0) * c3;
}

Matrix bch_transform(const FermionHamiltonian& h, const Matrix& sigma, BchMode mode, int rank,
                     std::uint64_t reference) {
    Matrix dense = build_dense(h);
    switch (mode) {
    case BchMode::Exact: return bch_exact(dense, sigma);
    case BchMode::Rank: return bch_rank(dense, sigma, rank);
    case BchMode::A7: {
        NormalParts parts = fock_normal_parts(h, reference);
        return bch_a7(dense, parts.h_n, parts.f_n, sigma);
    }
    }
    throw DimensionError("bch_transform: unknown mode");
}

ProjectedOperator project_active(const Matrix& hbar, const ActiveSpaceDef& a, int n) {
    check_size(n);
    std::uint64_t active_mask = 0;
    for (int idx : a.active) active_mask |= 1ULL << idx;

    ProjectedOperator out;
    for (std::uint64_t det = 0; det < dim_of(n); ++det)
        if (((det ^ a.reference) & ~active_mask) == 0) out.basis.push_back(det);

    const long m = static_cast<long>(out.basis.size());
    out.matrix.resize(m, m);
    for (long i = 0; i < m; ++i)
        for (long j = 0; j < m; ++j)
            out.matrix(i, j) = hbar(static_cast<long>(out.basis[static_cast<std::size_t>(i)]),
                                    static_cast<long>(out.basis[static_cast<std::size_t>(j)]));
    return out;
}

Matrix active_number_operator(const ActiveSpaceDef& a, const std::vector<std::uint64_t>& basis) {
    std::uint64_t active_mask = 0;
    for (int idx : a.active) active_mask |= 1ULL << idx;
    const long m = static_cast<long>(basis.size());
    Matrix n_op = Matrix::Zero(m, m);
    for (long i = 0; i < m; ++i)
        n_op(i, i) = static_cast<double>(
            __builtin_popcountll(basis[static_cast<std::size_t>(i)] & active_mask));
    return n_op;
}

} // namespace effham::downfold
