#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "dense_oracle.hpp"
#include "effham/downfold.hpp"
#include "effham/errors.hpp"

using namespace effham;
using namespace effham::downfold;

namespace {

FermionHamiltonian random_spin_hamiltonian(int n, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> val(-1.0, 1.0);
    FermionHamiltonian h;
    h.n_spatial = n / 2; // n spin orbitals after the flag below
    h.spin_orbital = true;
    h.n_electrons = 2;
    h.e_core = val(rng);
    for (int p = 0; p < n; ++p)
        for (int q = 0; q <= p; ++q) {
            double v = val(rng);
            h.h1[{p, q}] = v;
            h.h1[{q, p}] = v;
        }
    for (int p = 0; p < n; ++p)
        for (int q = 0; q < n; ++q)
            for (int r = 0; r < n; ++r)
                for (int s = 0; s < n; ++s) {
                    std::array<int, 4> k{p, q, r, s};
                    if (h.h2.count(k)) continue;
                    double v = 0.25 * val(rng);
                    h.h2[{p, q, r, s}] = v;
                    h.h2[{q, p, s, r}] = v; // Hermitian closure for real integrals
                }
    return h;
}

std::vector<Amplitude> external_amplitudes(double scale) {
    // active space {0, 1, 2} of 4 spin orbitals: index 3 is inactive
    return {{{3}, {1}, 0.7 * scale},
            {{3}, {0}, -0.4 * scale},
            {{2, 3}, {0, 1}, 0.5 * scale}};
}

const ActiveSpaceDef kActive{{0, 1, 2}, 0b0011};

} // namespace

TEST_CASE("ladder matrices satisfy the anticommutation relations") {
    const int n = 4;
    const long d = 16;
    for (int p = 0; p < n; ++p)
        for (int q = 0; q < n; ++q) {
            Matrix ap = ladder_annihilation(p, n), aq = ladder_annihilation(q, n);
            Matrix cq = ladder_creation(q, n);
            CHECK((ap * aq + aq * ap).norm() < 1e-14);
            Matrix ac = ap * cq + cq * ap;
            if (p == q)
                CHECK((ac - Matrix::Identity(d, d)).norm() < 1e-14);
            else
                CHECK(ac.norm() < 1e-14);
        }
    // agreement with the independently built qubit-space ladders
    for (int p = 0; p < n; ++p)
        CHECK((ladder_creation(p, n) - oracle::dense_creation(p, n)).norm() < 1e-14);
}

TEST_CASE("dense assembly matches an independent contraction") {
    FermionHamiltonian h = random_spin_hamiltonian(4, 3);
    Matrix m = build_dense(h);
    CHECK((m - m.adjoint()).norm() < 1e-12);

    const long d = 16;
    Matrix expected = h.e_core * Matrix::Identity(d, d);
    for (const auto& [key, v] : h.h1)
        expected += v * oracle::dense_creation(key[0], 4) * oracle::dense_annihilation(key[1], 4);
    for (const auto& [key, v] : h.h2)
        expected += 0.5 * v * oracle::dense_creation(key[0], 4) *
                    oracle::dense_creation(key[2], 4) * oracle::dense_annihilation(key[3], 4) *
                    oracle::dense_annihilation(key[1], 4);
    CHECK((m - expected).norm() < 1e-12);

    FermionHamiltonian spatial;
    spatial.n_spatial = 2;
    spatial.h1[{0, 0}] = 1.0;
    CHECK_THROWS_AS(build_dense(spatial), DimensionError);
}

TEST_CASE("cluster operator construction") {
    CHECK(build_sigma({}, kActive, 4).norm() == 0.0);

    Matrix sigma = build_sigma(external_amplitudes(1.0), kActive, 4);
    CHECK(sigma.norm() > 0.1);
    CHECK((sigma + sigma.adjoint()).norm() < 1e-14);

    // independent build of the doubles part: 0.5 a+_2 a+_3 a_1 a_0 minus h.c.
    Matrix t2 = 0.5 * ladder_creation(2, 4) * ladder_creation(3, 4) *
                ladder_annihilation(1, 4) * ladder_annihilation(0, 4);
    Matrix expected = t2 - t2.adjoint();
    Matrix doubles_only = build_sigma({{{2, 3}, {0, 1}, 0.5}}, kActive, 4);
    CHECK((doubles_only - expected).norm() < 1e-14);

    CHECK_THROWS_AS(build_sigma({{{2, 3}, {0}, 0.1}}, kActive, 4), IndexError);
    CHECK_THROWS_AS(build_sigma({{{}, {}, 0.1}}, kActive, 4), IndexError);
    CHECK_THROWS_AS(build_sigma({{{2}, {0}, 0.1}}, kActive, 4), ExternalityError);
}

TEST_CASE("anti-Hermitian exponential is unitary and matches the series") {
    Matrix sigma = build_sigma(external_amplitudes(0.8), kActive, 4);
    Matrix u = exp_antihermitian(sigma);
    CHECK((u * u.adjoint() - Matrix::Identity(16, 16)).norm() < 1e-10);
    CHECK((u - oracle::expm(sigma)).norm() < 1e-10);

    CHECK((exp_antihermitian(Matrix::Zero(16, 16)) - Matrix::Identity(16, 16)).norm() < 1e-14);
    CHECK_THROWS_AS(exp_antihermitian(Matrix::Identity(16, 16)), NonHermitianInput);
}

TEST_CASE("normal-ordered parts vanish on the reference") {
    FermionHamiltonian h = random_spin_hamiltonian(4, 7);
    const std::uint64_t ref = 0b0011;
    NormalParts parts = fock_normal_parts(h, ref);

    Eigen::VectorXcd refvec = Eigen::VectorXcd::Zero(16);
    refvec(static_cast<long>(ref)) = 1.0;
    CHECK(std::abs((refvec.adjoint() * parts.h_n * refvec)(0)) < 1e-12);
    CHECK(std::abs((refvec.adjoint() * parts.f_n * refvec)(0)) < 1e-12);

    // independent mean-field matrix from the occupied orbitals {0, 1}
    Matrix fock = Matrix::Zero(16, 16);
    double fref = 0.0;
    for (int p = 0; p < 4; ++p)
        for (int q = 0; q < 4; ++q) {
            double f = h.one_body(p, q);
            for (int i : {0, 1}) f += h.two_body(p, q, i, i) - h.two_body(p, i, i, q);
            fock += f * oracle::dense_creation(p, 4) * oracle::dense_annihilation(q, 4);
            if (p == q && (p == 0 || p == 1)) fref += f;
        }
    CHECK((parts.f_n - (fock - fref * Matrix::Identity(16, 16))).norm() < 1e-12);

    Matrix dense = build_dense(h);
    std::complex<double> eref = dense(static_cast<long>(ref), static_cast<long>(ref));
    CHECK((parts.h_n - (dense - eref * Matrix::Identity(16, 16))).norm() < 1e-13);
}

TEST_CASE("zero cluster operator leaves every mode at the bare Hamiltonian") {
    FermionHamiltonian h = random_spin_hamiltonian(4, 11);
    Matrix dense = build_dense(h);
    Matrix zero = Matrix::Zero(16, 16);
    CHECK((bch_transform(h, zero, BchMode::Exact) - dense).norm() < 1e-12);
    CHECK((bch_transform(h, zero, BchMode::Rank, 4) - dense).norm() < 1e-14);
    CHECK((bch_transform(h, zero, BchMode::A7, 3, 0b0011) - dense).norm() < 1e-14);
}

TEST_CASE("exact similarity transform is isospectral") {
    FermionHamiltonian h = random_spin_hamiltonian(4, 13);
    Matrix sigma = build_sigma(external_amplitudes(0.6), kActive, 4);
    Matrix hbar = bch_transform(h, sigma, BchMode::Exact);
    Eigen::SelfAdjointEigenSolver<Matrix> a(build_dense(h));
    Eigen::SelfAdjointEigenSolver<Matrix> b(0.5 * (hbar + hbar.adjoint()));
    CHECK((hbar - hbar.adjoint()).norm() < 1e-10);
    CHECK((a.eigenvalues() - b.eigenvalues()).norm() < 1e-10);
}

TEST_CASE("truncated commutator series converges with rank") {
    FermionHamiltonian h = random_spin_hamiltonian(4, 17);
    Matrix sigma = build_sigma(external_amplitudes(0.1), kActive, 4);
    Matrix exact = bch_transform(h, sigma, BchMode::Exact);
    double prev = 1e300;
    for (int rank = 1; rank <= 5; ++rank) {
        double err = (bch_transform(h, sigma, BchMode::Rank, rank) - exact).norm();
        CHECK(err < prev);
        prev = err;
    }
    CHECK(prev < 1e-6);
}

TEST_CASE("mean-field closure errs at third order in the cluster norm") {
    FermionHamiltonian h = random_spin_hamiltonian(4, 19);
    Matrix base = build_sigma(external_amplitudes(1.0), kActive, 4);

    std::vector<double> lambdas = {1e-1, 3e-2, 1e-2, 3e-3};
    std::vector<double> logl, loge;
    for (double l : lambdas) {
        Matrix sigma = l * base;
        double err = (bch_transform(h, sigma, BchMode::A7, 3, 0b0011) -
                      bch_transform(h, sigma, BchMode::Exact))
                         .norm();
        REQUIRE(err > 0.0);
        logl.push_back(std::log(l));
        loge.push_back(std::log(err));
    }
    double n = static_cast<double>(logl.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < logl.size(); ++i) {
        sx += logl[i];
        sy += loge[i];
        sxx += logl[i] * logl[i];
        sxy += logl[i] * loge[i];
    }
    double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    CHECK(slope > 2.5);
    CHECK(slope < 3.5);
}

TEST_CASE("projection with every orbital active is the identity restriction") {
    FermionHamiltonian h = random_spin_hamiltonian(4, 23);
    Matrix dense = build_dense(h);
    ActiveSpaceDef all{{0, 1, 2, 3}, 0b0011};
    ProjectedOperator proj = project_active(dense, all, 4);
    REQUIRE(proj.basis.size() == 16);
    for (std::uint64_t det = 0; det < 16; ++det) CHECK(proj.basis[det] == det);
    CHECK((proj.matrix - dense).norm() == 0.0);
}

TEST_CASE("a decoupling rotation makes the projected ground state exact") {
    FermionHamiltonian h = random_spin_hamiltonian(4, 29);
    Matrix dense = build_dense(h);
    Eigen::SelfAdjointEigenSolver<Matrix> es(dense);
    Matrix g = es.eigenvectors(); // G+ H G is diagonal, ascending

    // anti-Hermitian logarithm of the unitary G
    Eigen::ComplexEigenSolver<Matrix> ges(g);
    Matrix v = ges.eigenvectors();
    Eigen::VectorXcd logs(16);
    for (long i = 0; i < 16; ++i)
        logs(i) = std::complex<double>(0.0, std::arg(ges.eigenvalues()(i)));
    Matrix sigma = v * logs.asDiagonal() * v.inverse();
    sigma = 0.5 * (sigma - sigma.adjoint());

    Matrix hbar = bch_exact(dense, sigma);
    ProjectedOperator proj = project_active(hbar, kActive, 4);
    Eigen::SelfAdjointEigenSolver<Matrix> pes(0.5 * (proj.matrix + proj.matrix.adjoint()));
    CHECK(pes.eigenvalues()(0) == doctest::Approx(es.eigenvalues()(0)).epsilon(1e-9));
}

TEST_CASE("downfolded operator commutes with the active number operator") {
    FermionHamiltonian h = random_spin_hamiltonian(4, 31);
    Matrix sigma = build_sigma(external_amplitudes(0.4), kActive, 4);
    Matrix hbar = bch_transform(h, sigma, BchMode::Exact);
    ProjectedOperator proj = project_active(hbar, kActive, 4);
    Matrix n_op = active_number_operator(kActive, proj.basis);
    CHECK((proj.matrix * n_op - n_op * proj.matrix).norm() < 1e-10);
}
