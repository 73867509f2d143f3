#include "effham/measurement.hpp"

#include <algorithm>
#include <cmath>

#include <nlohmann/json.hpp>

#include "effham/errors.hpp"
#include "effham/rng.hpp"

namespace effham {

void MeasurementGroup::insert(const PauliTerm& t) {
    members.push_back(t);
    basis_x |= t.x_mask;
    basis_z |= t.z_mask;
    weight += std::abs(t.coeff);
}

std::string MeasurementGroup::basis_string(int n_qubits) const {
    PauliTerm b;
    b.n_qubits = n_qubits;
    b.x_mask = basis_x;
    b.z_mask = basis_z;
    return b.letters();
}

MeasurementPlan qwc_group(const PauliSum& s) {
    MeasurementPlan plan;
    plan.n_qubits = s.n_qubits();
    plan.identity_coeff = s.identity_coefficient();

    std::vector<PauliTerm> terms;
    for (const auto& t : s.terms())
        if (!t.is_identity()) terms.push_back(t);
    std::stable_sort(terms.begin(), terms.end(), [](const PauliTerm& a, const PauliTerm& b) {
        double wa = std::abs(a.coeff), wb = std::abs(b.coeff);
        if (wa != wb) return wa > wb;
        if (a.x_mask != b.x_mask) return a.x_mask < b.x_mask;
        return a.z_mask < b.z_mask;
    });

    for (const auto& t : terms) {
        bool placed = false;
        for (auto& g : plan.groups) {
            if (g.compatible(t)) {
                g.insert(t);
                placed = true;
                break;
            }
        }
        if (!placed) {
            plan.groups.emplace_back();
            plan.groups.back().insert(t);
        }
    }

    std::stable_sort(plan.groups.begin(), plan.groups.end(),
                     [](const MeasurementGroup& a, const MeasurementGroup& b) {
                         if (a.weight != b.weight) return a.weight > b.weight;
                         if (a.basis_x != b.basis_x) return a.basis_x < b.basis_x;
                         return a.basis_z < b.basis_z;
                     });
    return plan;
}

TruncationResult truncate_groups(const MeasurementPlan& plan, std::size_t k) {
    if (k < 1 || k > plan.groups.size())
        throw RangeError("truncate_groups: k out of [1, group count]");
    TruncationResult out;
    out.retained = PauliSum(plan.n_qubits);
    out.retained.add_identity(plan.identity_coeff);
    for (std::size_t gi = 0; gi < plan.groups.size(); ++gi) {
        out.total_weight += plan.groups[gi].weight;
        if (gi >= k) continue;
        out.retained_weight += plan.groups[gi].weight;
        out.retained_strings += plan.groups[gi].members.size();
        for (const auto& t : plan.groups[gi].members) out.retained.add(t);
    }
    return out;
}

namespace {

// parity of a term's outcome for one sampled bitstring (term support only)
int parity(const PauliTerm& t, std::uint64_t bits) {
    return (__builtin_popcountll(bits & t.support()) & 1) ? -1 : 1;
}

} // namespace

EnergyEstimate estimate_energy(const std::vector<std::map<std::uint64_t, long>>& counts,
                               const MeasurementPlan& plan) {
    const std::size_t k = plan.retained_groups();
    if (counts.size() < k)
        throw InsufficientShots("estimate_energy: fewer histograms than retained groups");

    EnergyEstimate est;
    est.energy = plan.identity_coeff.real();
    double var_sum = 0.0;
    for (std::size_t gi = 0; gi < k; ++gi) {
        const auto& hist = counts[gi];
        long shots = 0;
        for (const auto& [bits, c] : hist) shots += c;
        if (shots < 1) throw InsufficientShots("estimate_energy: empty histogram for a group");

        // per-shot group contribution g = sum_t c_t * parity_t
        double mean = 0.0, m2 = 0.0;
        for (const auto& [bits, c] : hist) {
            double g = 0.0;
            for (const auto& t : plan.groups[gi].members)
                g += t.coeff.real() * parity(t, bits);
            mean += g * static_cast<double>(c);
            m2 += g * g * static_cast<double>(c);
        }
        mean /= static_cast<double>(shots);
        m2 /= static_cast<double>(shots);
        est.energy += mean;
        if (shots > 1) {
            double sample_var = (m2 - mean * mean) * static_cast<double>(shots) /
                                static_cast<double>(shots - 1);
            var_sum += std::max(sample_var, 0.0) / static_cast<double>(shots);
        }
    }
    est.standard_error = std::sqrt(var_sum);
    return est;
}

std::vector<std::map<std::uint64_t, long>> sample_plan(const State& state,
                                                       const MeasurementPlan& plan,
                                                       std::uint64_t seed) {
    SeedSequence seeds(seed);
    std::vector<std::map<std::uint64_t, long>> counts;
    const std::size_t k = plan.retained_groups();
    for (std::size_t gi = 0; gi < k; ++gi) {
        auto rng = seeds.engine(gi);
        counts.push_back(sample_in_basis(state, plan.groups[gi].basis_x, plan.groups[gi].basis_z,
                                         plan.shots_per_group, rng));
    }
    return counts;
}

std::string MeasurementPlan::to_json() const {
    nlohmann::json j;
    j["n_qubits"] = n_qubits;
    j["identity_re"] = identity_coeff.real();
    j["identity_im"] = identity_coeff.imag();
    j["retained_k"] = retained_k;
    j["shots_per_group"] = shots_per_group;
    auto& arr = j["groups"] = nlohmann::json::array();
    for (const auto& g : groups) {
        nlohmann::json jg;
        jg["basis"] = g.basis_string(n_qubits);
        jg["weight"] = g.weight;
        auto& mem = jg["members"] = nlohmann::json::array();
        for (const auto& t : g.members)
            mem.push_back({{"pauli", t.letters()}, {"re", t.coeff.real()}, {"im", t.coeff.imag()}});
        arr.push_back(jg);
    }
    return j.dump(2);
}

} // namespace effham
