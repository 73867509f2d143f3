#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>
#include <vector>

#include "dense_oracle.hpp"
#include "effham/errors.hpp"
#include "effham/jordan_wigner.hpp"

using namespace effham;

namespace {

oracle::Mat rotation_product_matrix(const std::vector<Rotation>& rotations, int n_qubits) {
    const long dim = 1L << n_qubits;
    oracle::Mat u = oracle::Mat::Identity(dim, dim);
    for (const auto& r : rotations) {
        oracle::Mat p = oracle::dense_term(r.pauli);
        u = oracle::expm(oracle::cplx(0.0, -0.5 * r.angle) * p) * u;
    }
    return u;
}

} // namespace

TEST_CASE("ladder operators match the dense fermionic oracle") {
    for (int n = 1; n <= 6; ++n)
        for (int p = 0; p < n; ++p) {
            CHECK((oracle::dense_sum(jw_creation(p, n)) - oracle::dense_creation(p, n)).norm() ==
                  doctest::Approx(0.0).epsilon(1e-13));
            CHECK((oracle::dense_sum(jw_annihilation(p, n)) - oracle::dense_annihilation(p, n))
                      .norm() == doctest::Approx(0.0).epsilon(1e-13));
        }
}

TEST_CASE("canonical anticommutation relations by exact Pauli algebra") {
    const int n = 6;
    auto anti = [](const PauliSum& a, const PauliSum& b) {
        return a.multiplied_by(b) + b.multiplied_by(a);
    };
    for (int p = 0; p < n; ++p)
        for (int q = 0; q < n; ++q) {
            PauliSum ap = jw_annihilation(p, n);
            PauliSum aq = jw_annihilation(q, n);
            PauliSum cq = jw_creation(q, n);

            PauliSum aa = anti(ap, aq);
            CHECK(aa.empty());

            PauliSum ac = anti(ap, cq);
            if (p == q) {
                REQUIRE(ac.size() == 1);
                CHECK(ac.identity_coefficient() == cplx(1.0, 0.0));
            } else {
                CHECK(ac.empty());
            }
        }
}

TEST_CASE("occupation operator maps to (I - Z)/2") {
    PauliSum n0 = jw_creation(0, 1).multiplied_by(jw_annihilation(0, 1));
    CHECK(n0.size() == 2);
    CHECK(n0.identity_coefficient() == cplx(0.5, 0.0));
    CHECK(n0.coefficient(0, 1) == cplx(-0.5, 0.0));
}

TEST_CASE("hopping term maps to (h/2)(XX + YY)") {
    const double hop = 0.37;
    FermionHamiltonian h;
    h.n_spatial = 1; // treated as 2 spin orbitals below
    h.spin_orbital = true;
    h.h1[{0, 1}] = hop;
    h.h1[{1, 0}] = hop;
    PauliSum s = jordan_wigner(h);
    CHECK(s.size() == 2);
    CHECK(s.coefficient(0b11, 0b00).real() == doctest::Approx(hop / 2));
    CHECK(s.coefficient(0b11, 0b11).real() == doctest::Approx(hop / 2));

    oracle::Mat expected = hop * (oracle::dense_creation(0, 2) * oracle::dense_annihilation(1, 2) +
                                  oracle::dense_creation(1, 2) * oracle::dense_annihilation(0, 2));
    CHECK((oracle::dense_sum(s) - expected).norm() == doctest::Approx(0.0).epsilon(1e-13));
}

TEST_CASE("mapped Hamiltonian is real and carries e_core on the identity") {
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> val(-1.0, 1.0);
    FermionHamiltonian h;
    h.n_spatial = 2;
    h.spin_orbital = true;
    h.e_core = -4.5;
    for (int p = 0; p < 4; ++p)
        for (int q = 0; q <= p; ++q) {
            double v = val(rng);
            h.h1[{p, q}] = v;
            h.h1[{q, p}] = v;
        }
    PauliSum s = jordan_wigner(h);
    CHECK(s.max_imag() == 0.0);

    double diag = 0.0;
    for (int p = 0; p < 4; ++p) diag += 0.5 * h.one_body(p, p);
    CHECK(s.identity_coefficient().real() == doctest::Approx(-4.5 + diag).epsilon(1e-12));

    oracle::Mat expected = h.e_core * oracle::Mat::Identity(16, 16);
    for (const auto& [key, v] : h.h1)
        expected += v * oracle::dense_creation(key[0], 4) * oracle::dense_annihilation(key[1], 4);
    CHECK((oracle::dense_sum(s) - expected).norm() == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("jordan_wigner requires spin-orbital form") {
    FermionHamiltonian h;
    h.n_spatial = 1;
    h.h1[{0, 0}] = 1.0;
    CHECK_THROWS_AS(jordan_wigner(h), DimensionError);
}

TEST_CASE("number symmetry check") {
    PauliSum n_op = jw_number_operator(4);
    CHECK(check_number_symmetry(n_op, 4));

    PauliSum hop = jw_creation(2, 4).multiplied_by(jw_annihilation(0, 4));
    hop += jw_creation(0, 4).multiplied_by(jw_annihilation(2, 4));
    CHECK(check_number_symmetry(hop, 4));

    PauliSum x(4);
    x.add(parse_pauli_letters("XIII"));
    CHECK_FALSE(check_number_symmetry(x, 4));
}

TEST_CASE("excitation generators are anti-Hermitian") {
    const int n = 6;
    for (const auto& g : {ExcitationGenerator::single(4, 1),
                          ExcitationGenerator::pair(5, 4, 1, 0),
                          ExcitationGenerator::pauli_string(parse_pauli_letters("XYIIII"))}) {
        oracle::Mat a = oracle::dense_sum(generator_operator(g, n));
        CHECK((a + a.adjoint()).norm() == doctest::Approx(0.0).epsilon(1e-13));
    }
}

TEST_CASE("repeated generator indices are rejected") {
    CHECK_THROWS_AS(generator_operator(ExcitationGenerator::single(2, 2), 4), IndexError);
    CHECK_THROWS_AS(generator_operator(ExcitationGenerator::pair(3, 2, 3, 0), 4), IndexError);
    CHECK_THROWS_AS(jw_excitation_evolution(ExcitationGenerator::pair(1, 1, 2, 3), 0.3, 4),
                    IndexError);
}

TEST_CASE("single excitation evolution: two strings at +-theta/2") {
    const double theta = 0.83;
    auto rotations = jw_excitation_evolution(ExcitationGenerator::single(1, 0), theta, 2);
    REQUIRE(rotations.size() == 2);
    // each rotation is exp(-i angle/2 P), i.e. an exponent coefficient of
    // theta/2 per string
    std::set<std::string> strings;
    for (const auto& r : rotations) {
        strings.insert(r.pauli.letters());
        CHECK(std::abs(r.angle) / 2 == doctest::Approx(theta / 2));
    }
    CHECK(strings == std::set<std::string>{"XY", "YX"});
    CHECK(rotations[0].angle == doctest::Approx(-rotations[1].angle));
}

TEST_CASE("double excitation evolution: eight strings at |theta|/4") {
    const double theta = 0.52;
    auto rotations = jw_excitation_evolution(ExcitationGenerator::pair(3, 2, 1, 0), theta, 4);
    REQUIRE(rotations.size() == 8);
    std::set<std::string> strings;
    for (const auto& r : rotations) {
        CHECK(std::abs(r.angle) == doctest::Approx(theta / 4));
        int y_count = __builtin_popcountll(r.pauli.x_mask & r.pauli.z_mask);
        CHECK((y_count % 2) == 1);
        CHECK(r.pauli.weight() == 4); // pure XY pattern, no Z tail for adjacent indices
        strings.insert(r.pauli.letters());
    }
    CHECK(strings.size() == 8);
}

TEST_CASE("theta = 0 gives the identity circuit") {
    CHECK(jw_excitation_evolution(ExcitationGenerator::single(3, 0), 0.0, 4).empty());
}

TEST_CASE("evolution product equals the dense exponential of theta * A") {
    std::vector<ExcitationGenerator> generators = {
        ExcitationGenerator::single(1, 0),   ExcitationGenerator::single(5, 2),
        ExcitationGenerator::pair(3, 2, 1, 0), ExcitationGenerator::pair(7, 5, 2, 0),
        ExcitationGenerator::pair(6, 3, 4, 1),
        ExcitationGenerator::pauli_string(parse_pauli_letters("XYZZXIII"))};
    const int n = 8;
    for (const auto& g : generators) {
        for (double theta : {0.3, -0.3, 1.7, -1.7}) {
            oracle::Mat expected = oracle::expm(theta * oracle::dense_sum(generator_operator(g, n)));
            oracle::Mat got = rotation_product_matrix(jw_excitation_evolution(g, theta, n), n);
            CHECK((expected - got).norm() == doctest::Approx(0.0).epsilon(1e-10));
        }
    }
}
