#include "effham/mitigation.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

#include <nlohmann/json.hpp>

#include "effham/errors.hpp"
#include "effham/rng.hpp"
#include "effham/statevector.hpp"

namespace effham {

GateSequence amplify_circuit(const GateSequence& gates, double target_factor) {
    long n2 = 0;
    for (const auto& g : gates)
        if (g.kind == Gate::Kind::Cnot) ++n2;
    if (n2 < 1) throw NotAmplifiable("amplify_circuit: no 2-qubit gates");
    if (target_factor < 1.0) throw RangeError("amplify_circuit: target factor < 1");

    // Each inserted pair adds two CNOTs; pick the pair count whose factor is
    // closest to the target.
    long pairs = std::lround((target_factor - 1.0) * static_cast<double>(n2) / 2.0);
    if (pairs < 0) pairs = 0;

    // CNOT positions in the second half of the gate sequence (by index).
    std::vector<std::size_t> sites;
    const std::size_t half_start = (gates.size() + 1) / 2;
    for (std::size_t i = half_start; i < gates.size(); ++i)
        if (gates[i].kind == Gate::Kind::Cnot) sites.push_back(i);
    if (sites.empty()) {
        // all 2-qubit gates sit in the first half; use the last one
        for (std::size_t i = 0; i < gates.size(); ++i)
            if (gates[i].kind == Gate::Kind::Cnot) sites = {i};
    }

    // Round-robin distribution of the inserted pairs over the sites.
    std::vector<long> pairs_at(sites.size(), 0);
    for (long p = 0; p < pairs; ++p) ++pairs_at[static_cast<std::size_t>(p) % sites.size()];

    GateSequence out;
    out.reserve(gates.size() + static_cast<std::size_t>(2 * pairs));
    std::size_t site_idx = 0;
    for (std::size_t i = 0; i < gates.size(); ++i) {
        out.push_back(gates[i]);
        if (site_idx < sites.size() && sites[site_idx] == i) {
            for (long p = 0; p < pairs_at[site_idx]; ++p) {
                out.push_back(gates[i]); // CNOT is self-inverse: the pair is identity
                out.push_back(gates[i]);
            }
            ++site_idx;
        }
    }
    return out;
}

double noise_factor(const GateTally& original, const GateTally& amplified) {
    if (original.two_qubit < 1)
        throw NotAmplifiable("noise_factor: original circuit has no 2-qubit gates");
    return static_cast<double>(amplified.two_qubit) / static_cast<double>(original.two_qubit);
}

ZneSeries zne_extrapolate(std::vector<ZnePoint> points) {
    std::set<double> lambdas;
    for (const auto& p : points) {
        if (p.noise_factor < 1.0) throw FitError("zne_extrapolate: noise factor < 1");
        lambdas.insert(p.noise_factor);
    }
    if (lambdas.size() < 2) throw FitError("zne_extrapolate: need >= 2 distinct noise factors");

    bool weighted = std::all_of(points.begin(), points.end(),
                                [](const ZnePoint& p) { return p.standard_error > 0.0; });

    // weighted least squares on [1, lambda]
    double sw = 0, sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (const auto& p : points) {
        double w = weighted ? 1.0 / (p.standard_error * p.standard_error) : 1.0;
        sw += w;
        sx += w * p.noise_factor;
        sy += w * p.energy;
        sxx += w * p.noise_factor * p.noise_factor;
        sxy += w * p.noise_factor * p.energy;
    }
    double det = sw * sxx - sx * sx;
    if (det <= 0.0) throw FitError("zne_extrapolate: degenerate design matrix");

    ZneSeries series;
    series.points = std::move(points);
    series.fit.weighted = weighted;
    series.fit.intercept = (sxx * sy - sx * sxy) / det;
    series.fit.slope = (sw * sxy - sx * sy) / det;

    double ss_res = 0.0, ss_tot = 0.0;
    double mean_y = sy / sw;
    for (const auto& p : series.points) {
        double w = weighted ? 1.0 / (p.standard_error * p.standard_error) : 1.0;
        double r = p.energy - (series.fit.intercept + series.fit.slope * p.noise_factor);
        ss_res += w * r * r;
        ss_tot += w * (p.energy - mean_y) * (p.energy - mean_y);
    }
    series.fit.r_squared = ss_tot > 0.0 ? 1.0 - ss_res / ss_tot : 1.0;

    double mse = 0.0;
    for (const auto& p : series.points) {
        double r = p.energy - (series.fit.intercept + series.fit.slope * p.noise_factor);
        mse += r * r;
    }
    series.fit.rmse = std::sqrt(mse / static_cast<double>(series.points.size()));

    if (weighted) {
        // measurement-error propagation: Var = (X^T W X)^-1
        series.fit.intercept_se = std::sqrt(sxx / det);
    } else {
        const auto n = static_cast<double>(series.points.size());
        double s2 = n > 2 ? ss_res / (n - 2.0) : 0.0;
        series.fit.intercept_se = std::sqrt(s2 * sxx / det);
    }
    return series;
}

ZnePoint noisy_plan_energy(const GateSequence& gates, const MeasurementPlan& plan,
                           const TrajectorySpec& spec) {
    if (spec.trajectories < 1) throw RangeError("noisy_plan_energy: trajectory count < 1");
    SeedSequence seq(spec.seed);
    NoiseModel noise{spec.p2, 0};

    std::vector<EnergyEstimate> estimates;
    estimates.reserve(static_cast<std::size_t>(spec.trajectories));
    for (long t = 0; t < spec.trajectories; ++t) {
        State state = init_reference(plan.n_qubits, spec.occupied);
        auto engine = seq.engine(2 * static_cast<std::uint64_t>(t));
        run_gates(state, gates, spec.p2 > 0.0 ? &noise : nullptr, &engine);
        state.normalize();
        auto counts = sample_plan(state, plan, seq.stream(2 * static_cast<std::uint64_t>(t) + 1));
        estimates.push_back(estimate_energy(counts, plan));
    }

    ZnePoint point;
    double mean = 0.0;
    for (const auto& e : estimates) mean += e.energy;
    mean /= static_cast<double>(estimates.size());
    point.energy = mean;
    if (estimates.size() == 1) {
        point.standard_error = estimates.front().standard_error;
    } else {
        double var = 0.0;
        for (const auto& e : estimates) var += (e.energy - mean) * (e.energy - mean);
        var /= static_cast<double>(estimates.size() - 1);
        point.standard_error = std::sqrt(var / static_cast<double>(estimates.size()));
    }
    return point;
}

std::string ZneSeries::to_json() const {
    nlohmann::json j;
    auto& pts = j["points"] = nlohmann::json::array();
    for (const auto& p : points)
        pts.push_back({{"noise_factor", p.noise_factor},
                       {"energy", p.energy},
                       {"standard_error", p.standard_error}});
    j["fit"] = {{"intercept", fit.intercept},   {"slope", fit.slope},
                {"intercept_se", fit.intercept_se}, {"r_squared", fit.r_squared},
                {"rmse", fit.rmse},             {"weighted", fit.weighted}};
    return j.dump(2);
}

ZneSeries ZneSeries::from_json(const std::string& text) {
    nlohmann::json j = nlohmann::json::parse(text);
    ZneSeries s;
    for (const auto& e : j.at("points"))
        s.points.push_back({e.at("noise_factor").get<double>(), e.at("energy").get<double>(),
                            e.at("standard_error").get<double>()});
    const auto& f = j.at("fit");
    s.fit = {f.at("intercept").get<double>(),    f.at("slope").get<double>(),
             f.at("intercept_se").get<double>(), f.at("r_squared").get<double>(),
             f.at("rmse").get<double>(),         f.at("weighted").get<bool>()};
    return s;
}

std::string ZneSeries::to_csv() const {
    std::ostringstream os;
    os.precision(17);
    os << "lambda,energy,se\n";
    for (const auto& p : points)
        os << p.noise_factor << ',' << p.energy << ',' << p.standard_error << '\n';
    return os.str();
}

} // namespace effham
