#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "dense_oracle.hpp"
#include "effham/errors.hpp"
#include "effham/measurement.hpp"

using namespace effham;

namespace {

PauliSum random_hermitian_sum(int n_qubits, int n_terms, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    PauliSum s(n_qubits);
    for (int i = 0; i < n_terms; ++i) {
        PauliTerm t = oracle::random_term(n_qubits, rng);
        t.coeff = cplx(t.coeff.real(), 0.0);
        s.add(t);
    }
    return s;
}

} // namespace

TEST_CASE("grouping separates anticommuting letters") {
    PauliSum s(2);
    s.add(parse_pauli_letters("ZI", 1.0));
    s.add(parse_pauli_letters("ZZ", 0.5));
    s.add(parse_pauli_letters("XI", 0.25));
    MeasurementPlan plan = qwc_group(s);
    REQUIRE(plan.groups.size() == 2);
    CHECK(plan.groups[0].members.size() == 2);
    CHECK(plan.groups[0].basis_string(2) == "ZZ");
    CHECK(plan.groups[1].members.size() == 1);
    CHECK(plan.groups[1].basis_string(2) == "XI");
}

TEST_CASE("diagonal sums collapse to one group") {
    std::mt19937_64 rng(3);
    PauliSum s(5);
    std::uniform_int_distribution<std::uint64_t> mask(1, 31);
    for (int i = 0; i < 12; ++i) s.add(0, mask(rng), cplx(0.1 * (i + 1), 0.0));
    MeasurementPlan plan = qwc_group(s);
    CHECK(plan.groups.size() == 1);
}

TEST_CASE("groups partition the sum and are internally compatible") {
    PauliSum s = random_hermitian_sum(4, 25, 7);
    MeasurementPlan plan = qwc_group(s);

    PauliSum rebuilt(4);
    rebuilt.add_identity(plan.identity_coeff);
    std::size_t members = 0;
    for (const auto& g : plan.groups) {
        members += g.members.size();
        for (const auto& t : g.members) rebuilt.add(t);
        for (std::size_t i = 0; i < g.members.size(); ++i)
            for (std::size_t j = i + 1; j < g.members.size(); ++j)
                CHECK(qubitwise_commute(g.members[i], g.members[j]));
    }
    CHECK(rebuilt == s);
    std::size_t non_identity = s.size() - (std::abs(s.identity_coefficient()) > 0 ? 1 : 0);
    CHECK(members == non_identity);

    for (std::size_t i = 1; i < plan.groups.size(); ++i)
        CHECK(plan.groups[i - 1].weight >= plan.groups[i].weight);
}

TEST_CASE("truncation retains the heaviest groups") {
    PauliSum s = random_hermitian_sum(4, 25, 11);
    s.add_identity(cplx(-2.0, 0.0));
    MeasurementPlan plan = qwc_group(s);

    CHECK_THROWS_AS(truncate_groups(plan, 0), RangeError);
    CHECK_THROWS_AS(truncate_groups(plan, plan.groups.size() + 1), RangeError);

    TruncationResult all = truncate_groups(plan, plan.groups.size());
    CHECK(all.retained == s);
    CHECK(all.retained_weight == doctest::Approx(all.total_weight));

    double prev = 0.0;
    for (std::size_t k = 1; k <= plan.groups.size(); ++k) {
        TruncationResult r = truncate_groups(plan, k);
        CHECK(r.retained_weight >= prev);
        prev = r.retained_weight;
        // sorted groups make the k-prefix the maximal-weight k-subset
        double expected = 0.0;
        for (std::size_t i = 0; i < k; ++i) expected += plan.groups[i].weight;
        CHECK(r.retained_weight == doctest::Approx(expected));
    }
}

TEST_CASE("estimator on a basis state with diagonal groups is exact") {
    PauliSum s(3);
    s.add(parse_pauli_letters("ZII", 0.5));
    s.add(parse_pauli_letters("ZZI", -0.25));
    s.add_identity(cplx(1.5, 0.0));
    MeasurementPlan plan = qwc_group(s);
    plan.shots_per_group = 64;

    State st(3); // |000>
    auto counts = sample_plan(st, plan, 99);
    EnergyEstimate est = estimate_energy(counts, plan);
    CHECK(est.energy == doctest::Approx(1.5 + 0.5 - 0.25));
    CHECK(est.standard_error == 0.0);
}

TEST_CASE("empty histograms are rejected") {
    PauliSum s(2);
    s.add(parse_pauli_letters("XZ", 1.0));
    MeasurementPlan plan = qwc_group(s);
    std::vector<std::map<std::uint64_t, long>> counts;
    CHECK_THROWS_AS(estimate_energy(counts, plan), InsufficientShots);
    counts.push_back({});
    CHECK_THROWS_AS(estimate_energy(counts, plan), InsufficientShots);
}

TEST_CASE("estimator is unbiased by outcome enumeration") {
    std::mt19937_64 rng(13);
    PauliSum s = random_hermitian_sum(4, 15, 17);
    MeasurementPlan plan = qwc_group(s);
    State st = oracle::random_state(4, rng);

    double analytic = plan.identity_coeff.real();
    for (const auto& g : plan.groups) {
        // enumerate outcome probabilities in the group's eigenbasis
        std::mt19937_64 dummy(1);
        auto probe = sample_in_basis(st, g.basis_x, g.basis_z, 1, dummy);
        (void)probe;
        State rotated = st;
        for (int q = 0; q < 4; ++q) {
            bool x = (g.basis_x >> q) & 1u, z = (g.basis_z >> q) & 1u;
            if (x && z) {
                rotated.apply_sdg(q);
                rotated.apply_h(q);
            } else if (x) {
                rotated.apply_h(q);
            }
        }
        for (std::uint64_t bits = 0; bits < 16; ++bits) {
            double p = std::norm(rotated.amplitude(bits));
            for (const auto& t : g.members) {
                int par = (__builtin_popcountll(bits & t.support()) & 1) ? -1 : 1;
                analytic += p * t.coeff.real() * par;
            }
        }
    }
    CHECK(analytic == doctest::Approx(st.expectation(s)).epsilon(1e-10));
}

TEST_CASE("resampled estimator mean converges to the exact expectation") {
    std::mt19937_64 rng(19);
    PauliSum s = random_hermitian_sum(4, 15, 23);
    MeasurementPlan plan = qwc_group(s);
    plan.shots_per_group = 256;
    State st = oracle::random_state(4, rng);
    const double exact = st.expectation(s);

    const int resamples = 1000;
    double mean = 0.0, m2 = 0.0;
    for (int r = 0; r < resamples; ++r) {
        EnergyEstimate est = estimate_energy(sample_plan(st, plan, 1000 + r), plan);
        mean += est.energy;
        m2 += est.energy * est.energy;
    }
    mean /= resamples;
    m2 /= resamples;
    double sem = std::sqrt(std::max(m2 - mean * mean, 0.0) / resamples);
    CHECK(std::abs(mean - exact) < 3.0 * sem + 1e-12);
}

TEST_CASE("1024-shot estimates sit within 5 standard errors") {
    std::mt19937_64 rng(29);
    PauliSum s = random_hermitian_sum(4, 15, 31);
    MeasurementPlan plan = qwc_group(s);
    plan.shots_per_group = 1024;
    State st = oracle::random_state(4, rng);
    const double exact = st.expectation(s);

    int failures = 0;
    for (int seed = 0; seed < 100; ++seed) {
        EnergyEstimate est = estimate_energy(sample_plan(st, plan, seed), plan);
        if (std::abs(est.energy - exact) > 5.0 * est.standard_error) ++failures;
    }
    CHECK(failures <= 2); // 99% target with slack
}

TEST_CASE("retained_k restricts sampling and estimation consistently") {
    PauliSum s = random_hermitian_sum(4, 20, 37);
    MeasurementPlan plan = qwc_group(s);
    plan.shots_per_group = 128;
    REQUIRE(plan.groups.size() >= 3);
    plan.retained_k = 2;

    std::mt19937_64 rng(41);
    State st = oracle::random_state(4, rng);
    auto counts = sample_plan(st, plan, 7);
    CHECK(counts.size() == 2);

    // per-group streams derive from the group index: the first group's
    // histogram does not depend on how many groups are retained
    MeasurementPlan full = plan;
    full.retained_k = 0;
    auto all_counts = sample_plan(st, full, 7);
    CHECK(all_counts[0] == counts[0]);
    CHECK(all_counts[1] == counts[1]);

    EnergyEstimate est = estimate_energy(counts, plan);
    TruncationResult trunc = truncate_groups(plan, 2);
    // estimator expectation matches the truncated operator's expectation
    double mean = 0.0;
    for (int r = 0; r < 400; ++r)
        mean += estimate_energy(sample_plan(st, plan, 500 + r), plan).energy;
    mean /= 400;
    CHECK(std::abs(mean - st.expectation(trunc.retained)) < 0.05);
    (void)est;
}

TEST_CASE("plan serialization carries groups and weights") {
    PauliSum s(2);
    s.add(parse_pauli_letters("ZI", 1.0));
    s.add(parse_pauli_letters("XI", 0.5));
    MeasurementPlan plan = qwc_group(s);
    std::string j = plan.to_json();
    CHECK(j.find("\"groups\"") != std::string::npos);
    CHECK(j.find("ZI") != std::string::npos);
    CHECK(j.find("XI") != std::string::npos);
}
