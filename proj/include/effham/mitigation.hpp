#pragma once

#include <cstdint>
#include <set>
#include <string>
#include <vector>

#include "effham/circuit.hpp"
#include "effham/measurement.hpp"

namespace effham {

struct ZnePoint {
    double noise_factor = 1.0; // lambda >= 1
    double energy = 0.0;
    double standard_error = 0.0; // 0 = unknown (plain OLS)
};

struct ZneFit {
    double intercept = 0.0; // E0 at lambda = 0
    double slope = 0.0;
    double intercept_se = 0.0;
    double r_squared = 0.0;
    double rmse = 0.0;
    bool weighted = false;
};

struct ZneSeries {
    std::vector<ZnePoint> points;
    ZneFit fit;
    std::string to_json() const;
    static ZneSeries from_json(const std::string& text);
    std::string to_csv() const; // lambda,energy,se
};

/// Insert identity-equivalent 2-qubit gate pairs (a staircase entangler
/// immediately followed by its inverse) after 2-qubit gates in the second
/// half of the gate sequence until the achievable noise factor closest to
/// the target is reached. Noiseless action is unchanged.
GateSequence amplify_circuit(const GateSequence& gates, double target_factor);

/// amplified.two_qubit / original.two_qubit.
double noise_factor(const GateTally& original, const GateTally& amplified);

/// OLS of energy on lambda, E0 = intercept at lambda 0. Weighted by 1/SE^2
/// when every point carries an SE, plain otherwise.
ZneSeries zne_extrapolate(std::vector<ZnePoint> points);

struct TrajectorySpec {
    std::set<int> occupied;   // reference determinant bits
    double p2 = 0.0;
    long trajectories = 1;    // independent noise realizations
    std::uint64_t seed = 0;
};

/// Shot-based energy of a (possibly amplified) gate sequence under stochastic
/// Pauli noise. Each trajectory prepares the reference, runs the gates with a
/// fresh noise stream, and samples the plan; the point carries the mean over
/// trajectories and its standard error (the single-trajectory shot SE when
/// trajectories = 1).
ZnePoint noisy_plan_energy(const GateSequence& gates, const MeasurementPlan& plan,
                           const TrajectorySpec& spec);

} // namespace effham
