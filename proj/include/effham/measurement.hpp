#pragma once

#include <cstdint>
#include <map>
#include <vector>

#include "effham/pauli.hpp"
#include "effham/statevector.hpp"

namespace effham {

/// A set of qubit-wise commuting Pauli terms measurable in one product basis.
struct MeasurementGroup {
    std::vector<PauliTerm> members;
    std::uint64_t basis_x = 0; // union of member letters per qubit
    std::uint64_t basis_z = 0;
    double weight = 0.0; // sum of |coeff| over members

    bool compatible(const PauliTerm& t) const {
        std::uint64_t shared = (basis_x | basis_z) & t.support();
        return (((basis_x ^ t.x_mask) | (basis_z ^ t.z_mask)) & shared) == 0;
    }
    void insert(const PauliTerm& t);

    /// One letter per qubit, identity where no member acts.
    std::string basis_string(int n_qubits) const;
};

struct MeasurementPlan {
    std::vector<MeasurementGroup> groups; // descending weight
    cplx identity_coeff{0.0, 0.0};
    int n_qubits = 0;
    std::size_t retained_k = 0; // 0 = all
    long shots_per_group = 1024;

    std::size_t retained_groups() const { return retained_k == 0 ? groups.size() : retained_k; }
    std::string to_json() const;
};

/// Greedy first-fit grouping by qubit-wise commutativity over terms sorted by
/// descending |coeff| (ties by mask order). Groups come back sorted by
/// descending weight; the identity term is carried separately on the plan.
MeasurementPlan qwc_group(const PauliSum& s);

/// The sum restricted to the k heaviest groups plus the identity term.
struct TruncationResult {
    PauliSum retained;
    std::size_t retained_strings = 0;
    double retained_weight = 0.0;
    double total_weight = 0.0;
};
TruncationResult truncate_groups(const MeasurementPlan& plan, std::size_t k);

/// Shot-histogram energy estimate over the retained groups: per-term mean of
/// +-1 parities weighted by coefficients; SE combines per-group sample
/// variances in quadrature.
struct EnergyEstimate {
    double energy = 0.0;
    double standard_error = 0.0;
};
EnergyEstimate estimate_energy(const std::vector<std::map<std::uint64_t, long>>& counts,
                               const MeasurementPlan& plan);

/// Sample every retained group of the plan on a state (seeded per group from
/// a counter-based splitter, so group order cannot change the streams).
std::vector<std::map<std::uint64_t, long>> sample_plan(const State& state,
                                                       const MeasurementPlan& plan,
                                                       std::uint64_t seed);

} // namespace effham
