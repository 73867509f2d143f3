#include <fstream>
#include <iostream>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "effham/downfold.hpp"
#include "effham/errors.hpp"
#include "effham/fcidump.hpp"
#include "effham/fermion_hamiltonian.hpp"
#include "effham/jordan_wigner.hpp"
#include "effham/measurement.hpp"
#include "effham/mitigation.hpp"
#include "effham/pauli.hpp"
#include "effham/solvers.hpp"
#include "effham/statevector.hpp"

namespace {

using nlohmann::json;
using namespace effham;

constexpr int kExitParse = 2;
constexpr int kExitSolver = 3;
constexpr int kExitMitigation = 4;

struct RunConfig {
    std::string input;
    std::string solver = "fci";
    std::string pool = "sd";
    double grad_tol = 1e-3;
    int max_iter = 100;
    double theta0 = 0.1;
    int gcim_x = 1;
    int gcim_y = 0;
    double overlap_cutoff = 1e-8;
    double prune_threshold = 1e-8;
    long truncate_k = 0; // 0 = all groups
    long shots = 1024;
    long trajectories = 16;
    std::uint64_t seed = 0;
    int threads = 1;
    double p2 = 0.0;
    std::vector<double> zne_lambdas = {1.0, 1.5, 2.0};
    std::string output;
    std::string mode = "exact"; // downfold-toy: exact | rank | a7
    int rank = 3;
    std::vector<int> active;
    std::string amplitudes; // downfold-toy amplitude JSON path
};

const std::set<std::string> kConfigKeys = {
    "input",       "solver",     "pool",         "grad_tol",       "max_iter",
    "theta0",      "gcim_x",     "gcim_y",       "overlap_cutoff", "prune_threshold",
    "truncate_k",  "shots",      "trajectories", "seed",           "threads",
    "p2",          "zne_lambdas", "output",      "mode",           "rank",
    "active",      "amplitudes"};

void load_config_file(const std::string& path, RunConfig& cfg) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file: " + path);
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw ConfigError("config is not valid JSON: " + std::string(e.what()));
    }
    for (const auto& [key, value] : j.items()) {
        if (!kConfigKeys.count(key)) throw ConfigError("unknown config key: " + key);
        if (key == "input") cfg.input = value.get<std::string>();
        else if (key == "solver") cfg.solver = value.get<std::string>();
        else if (key == "pool") cfg.pool = value.get<std::string>();
        else if (key == "grad_tol") cfg.grad_tol = value.get<double>();
        else if (key == "max_iter") cfg.max_iter = value.get<int>();
        else if (key == "theta0") cfg.theta0 = value.get<double>();
        else if (key == "gcim_x") cfg.gcim_x = value.get<int>();
        else if (key == "gcim_y") cfg.gcim_y = value.get<int>();
        else if (key == "overlap_cutoff") cfg.overlap_cutoff = value.get<double>();
        else if (key == "prune_threshold") cfg.prune_threshold = value.get<double>();
        else if (key == "truncate_k") cfg.truncate_k = value.get<long>();
        else if (key == "shots") cfg.shots = value.get<long>();
        else if (key == "trajectories") cfg.trajectories = value.get<long>();
        else if (key == "seed") cfg.seed = value.get<std::uint64_t>();
        else if (key == "threads") cfg.threads = value.get<int>();
        else if (key == "p2") cfg.p2 = value.get<double>();
        else if (key == "zne_lambdas") cfg.zne_lambdas = value.get<std::vector<double>>();
        else if (key == "output") cfg.output = value.get<std::string>();
        else if (key == "mode") cfg.mode = value.get<std::string>();
        else if (key == "rank") cfg.rank = value.get<int>();
        else if (key == "active") cfg.active = value.get<std::vector<int>>();
        else if (key == "amplitudes") cfg.amplitudes = value.get<std::string>();
    }
}

void validate(const RunConfig& cfg) {
    static const std::set<std::string> solvers = {"fci", "adapt", "qubit-adapt", "uccgsd", "gcim"};
    static const std::set<std::string> pools = {"sd", "gsd", "qubit"};
    static const std::set<std::string> modes = {"exact", "rank", "a7"};
    if (!solvers.count(cfg.solver)) throw ConfigError("unknown solver: " + cfg.solver);
    if (!pools.count(cfg.pool)) throw ConfigError("unknown pool: " + cfg.pool);
    if (!modes.count(cfg.mode)) throw ConfigError("unknown downfold mode: " + cfg.mode);
    if (cfg.shots < 1) throw ConfigError("shots must be positive");
    if (cfg.trajectories < 1) throw ConfigError("trajectories must be positive");
    if (cfg.p2 < 0.0 || cfg.p2 > 1.0) throw ConfigError("p2 outside [0, 1]");
    if (cfg.prune_threshold < 0.0) throw ConfigError("prune_threshold must be >= 0");
    if (cfg.max_iter < 1) throw ConfigError("max_iter must be positive");
    if (cfg.threads < 1) throw ConfigError("threads must be positive");
}

void emit(const std::string& text, const std::string& output) {
    if (output.empty()) {
        std::cout << text;
        if (!text.empty() && text.back() != '\n') std::cout << '\n';
        return;
    }
    std::ofstream out(output);
    if (!out) throw ConfigError("cannot open output file: " + output);
    out << text;
}

struct MappedProblem {
    FermionHamiltonian spatial;
    FermionHamiltonian spin;
    PauliSum qubit_sum;
    FcidumpReport fcidump_report;
};

MappedProblem map_input(const RunConfig& cfg) {
    if (cfg.input.empty()) throw ConfigError("no input file given");
    MappedProblem p;
    p.spatial = parse_fcidump_file(cfg.input, &p.fcidump_report);
    p.spin = expand_to_spin_orbitals(p.spatial);
    p.qubit_sum = jordan_wigner(p.spin);
    p.qubit_sum.prune(cfg.prune_threshold);
    return p;
}

std::size_t non_identity_strings(const PauliSum& s) {
    std::size_t n = s.size();
    if (std::abs(s.identity_coefficient()) > 0.0) --n;
    return n;
}

int cmd_inspect(const RunConfig& cfg) {
    MappedProblem p = map_input(cfg);
    SymmetryReport sym = validate_symmetries(p.spin);
    MeasurementPlan plan = qwc_group(p.qubit_sum);

    json j;
    j["input"] = cfg.input;
    j["n_spatial_orbitals"] = p.spatial.n_spatial;
    j["n_spin_orbitals"] = p.spin.n_orbitals();
    j["n_electrons"] = p.spatial.n_electrons;
    j["ms2"] = p.spatial.ms2;
    j["e_core"] = p.spatial.e_core;
    j["eightfold_symmetry"] = p.fcidump_report.eightfold_symmetry;
    j["lines_read"] = p.fcidump_report.lines_read;
    j["prune_threshold"] = cfg.prune_threshold;
    j["pauli_strings"] = non_identity_strings(p.qubit_sum);
    j["qwc_groups"] = plan.groups.size();
    j["hermitian"] = sym.hermitian;
    j["number_conserving"] = sym.number_conserving;
    j["max_symmetry_violation"] = sym.max_violation;
    emit(j.dump(2), cfg.output);
    return 0;
}

int cmd_map(const RunConfig& cfg) {
    MappedProblem p = map_input(cfg);
    emit(p.qubit_sum.to_json(), cfg.output);
    return 0;
}

int cmd_group(const RunConfig& cfg) {
    MappedProblem p = map_input(cfg);
    MeasurementPlan plan = qwc_group(p.qubit_sum);
    plan.shots_per_group = cfg.shots;
    emit(plan.to_json(), cfg.output);
    return 0;
}

int cmd_truncate(const RunConfig& cfg) {
    MappedProblem p = map_input(cfg);
    MeasurementPlan plan = qwc_group(p.qubit_sum);
    std::size_t k = cfg.truncate_k > 0 ? static_cast<std::size_t>(cfg.truncate_k)
                                       : plan.groups.size();
    TruncationResult res = truncate_groups(plan, k);

    json j;
    j["retained_groups"] = k;
    j["total_groups"] = plan.groups.size();
    j["retained_strings"] = res.retained_strings;
    j["total_strings"] = non_identity_strings(p.qubit_sum);
    j["retained_weight"] = res.retained_weight;
    j["total_weight"] = res.total_weight;
    j["retained_sum"] = json::parse(res.retained.to_json());
    emit(j.dump(2), cfg.output);
    return 0;
}

SolverTrace run_solver(const RunConfig& cfg, const MappedProblem& p, double* energy) {
    SolverConfig sc;
    sc.grad_tol = cfg.grad_tol;
    sc.max_iter = cfg.max_iter;
    sc.theta0 = cfg.theta0;
    sc.gcim_x = cfg.gcim_x;
    sc.gcim_y = cfg.gcim_y;
    sc.overlap_cutoff = cfg.overlap_cutoff;

    const int n_el = p.spin.n_electrons;
    PoolKind pk = cfg.pool == "gsd" ? PoolKind::FermionicGSD
                  : cfg.pool == "qubit" ? PoolKind::QubitMinimal
                                        : PoolKind::FermionicSD;

    SolverTrace trace;
    if (cfg.solver == "adapt") {
        OperatorPool pool = build_pool(pk, p.qubit_sum.n_qubits(), n_el);
        trace = adapt_vqe(p.qubit_sum, pool, sc);
    } else if (cfg.solver == "qubit-adapt") {
        trace = qubit_adapt_vqe(p.qubit_sum, n_el, sc);
    } else if (cfg.solver == "uccgsd") {
        trace = uccgsd_vqe(p.qubit_sum, n_el, sc);
    } else if (cfg.solver == "gcim") {
        OperatorPool pool = build_pool(pk, p.qubit_sum.n_qubits(), n_el);
        trace = gcim_expand(p.qubit_sum, pool, sc).second;
    }
    *energy = trace.final_energy;
    return trace;
}

int cmd_solve(const RunConfig& cfg) {
    MappedProblem p = map_input(cfg);
    json j;
    j["input"] = cfg.input;
    j["solver"] = cfg.solver;
    j["seed"] = cfg.seed;

    if (cfg.solver == "fci") {
        Sector sector{p.spin.n_electrons, p.spin.ms2};
        GroundState gs = exact_ground_state(p.qubit_sum, sector);
        j["energy"] = gs.energy;
        j["sector_dimension"] = gs.basis.size();
        emit(j.dump(2), cfg.output);
        return 0;
    }

    double energy = 0.0;
    SolverTrace trace = run_solver(cfg, p, &energy);
    j["energy"] = energy;
    j["iterations"] = trace.iterations.size();
    j["converged_reason"] = trace.converged_reason;
    j["trace"] = json::parse(trace.to_json());
    emit(j.dump(2), cfg.output);
    if (!cfg.output.empty()) {
        std::ofstream csv(cfg.output + ".csv");
        csv << trace.to_csv();
    }
    return 0;
}

int cmd_sample(const RunConfig& cfg) {
    MappedProblem p = map_input(cfg);
    Sector sector{p.spin.n_electrons, p.spin.ms2};
    GroundState gs = exact_ground_state(p.qubit_sum, sector);

    State state(p.qubit_sum.n_qubits());
    state.amplitude(0) = 0.0;
    for (std::size_t i = 0; i < gs.basis.size(); ++i)
        state.amplitude(gs.basis[i]) = gs.eigenvector(static_cast<long>(i));

    MeasurementPlan plan = qwc_group(p.qubit_sum);
    plan.shots_per_group = cfg.shots;
    if (cfg.truncate_k > 0) plan.retained_k = static_cast<std::size_t>(cfg.truncate_k);
    auto counts = sample_plan(state, plan, cfg.seed);
    EnergyEstimate est = estimate_energy(counts, plan);

    json j;
    j["input"] = cfg.input;
    j["shots_per_group"] = cfg.shots;
    j["groups_sampled"] = plan.retained_groups();
    j["seed"] = cfg.seed;
    j["exact_energy"] = gs.energy;
    j["estimated_energy"] = est.energy;
    j["standard_error"] = est.standard_error;
    emit(j.dump(2), cfg.output);
    return 0;
}

int cmd_zne(const RunConfig& cfg) {
    if (cfg.zne_lambdas.size() < 2) throw ConfigError("zne needs at least 2 noise factors");
    MappedProblem p = map_input(cfg);

    RunConfig solver_cfg = cfg;
    if (cfg.solver == "fci") solver_cfg.solver = "adapt";
    double energy = 0.0;
    SolverTrace trace = run_solver(solver_cfg, p, &energy);

    std::set<int> occupied = hf_occupation(p.spin.n_electrons);
    Circuit circuit = ansatz_circuit(trace.ansatz, p.qubit_sum.n_qubits());
    GateSequence gates = lower_circuit(circuit);
    GateTally base = tally_gates(gates);

    MeasurementPlan plan = qwc_group(p.qubit_sum);
    plan.shots_per_group = cfg.shots;

    std::vector<ZnePoint> points;
    for (std::size_t i = 0; i < cfg.zne_lambdas.size(); ++i) {
        GateSequence amplified = amplify_circuit(gates, cfg.zne_lambdas[i]);
        TrajectorySpec spec{occupied, cfg.p2, cfg.trajectories, cfg.seed + i};
        ZnePoint point = noisy_plan_energy(amplified, plan, spec);
        point.noise_factor = noise_factor(base, tally_gates(amplified));
        points.push_back(point);
    }
    ZneSeries series = zne_extrapolate(points);

    json j = json::parse(series.to_json());
    j["noiseless_energy"] = energy;
    j["p2"] = cfg.p2;
    j["shots_per_group"] = cfg.shots;
    j["trajectories"] = cfg.trajectories;
    j["seed"] = cfg.seed;
    emit(j.dump(2), cfg.output);
    if (!cfg.output.empty()) {
        std::ofstream csv(cfg.output + ".csv");
        csv << series.to_csv();
    }
    return 0;
}

int cmd_downfold_toy(const RunConfig& cfg) {
    MappedProblem p = map_input(cfg);
    const int n = p.spin.n_orbitals();

    downfold::ActiveSpaceDef active;
    if (cfg.active.empty())
        for (int i = 0; i < n; ++i) active.active.insert(i);
    else
        active.active.insert(cfg.active.begin(), cfg.active.end());
    for (int i = 0; i < p.spin.n_electrons; ++i) active.reference |= 1ULL << i;

    std::vector<downfold::Amplitude> amplitudes;
    if (!cfg.amplitudes.empty()) {
        std::ifstream in(cfg.amplitudes);
        if (!in) throw ConfigError("cannot open amplitude file: " + cfg.amplitudes);
        json ja;
        try {
            in >> ja;
        } catch (const json::exception& e) {
            throw ParseError("amplitude file is not valid JSON: " + std::string(e.what()));
        }
        for (const auto& e : ja) {
            downfold::Amplitude amp;
            amp.creation = e.at("creation").get<std::vector<int>>();
            amp.annihilation = e.at("annihilation").get<std::vector<int>>();
            amp.value = e.at("value").get<double>();
            amplitudes.push_back(std::move(amp));
        }
    }

    downfold::Matrix sigma = amplitudes.empty()
        ? downfold::Matrix::Zero(1L << n, 1L << n).eval()
        : downfold::build_sigma(amplitudes, active, n);

    downfold::BchMode mode = cfg.mode == "rank" ? downfold::BchMode::Rank
                             : cfg.mode == "a7" ? downfold::BchMode::A7
                                                : downfold::BchMode::Exact;
    downfold::Matrix hbar =
        downfold::bch_transform(p.spin, sigma, mode, cfg.rank, active.reference);
    downfold::ProjectedOperator proj = downfold::project_active(hbar, active, n);

    downfold::Matrix sym = 0.5 * (proj.matrix + proj.matrix.adjoint());
    Eigen::SelfAdjointEigenSolver<downfold::Matrix> es(sym);
    Eigen::SelfAdjointEigenSolver<downfold::Matrix> full(
        0.5 * (downfold::build_dense(p.spin) +
               downfold::build_dense(p.spin).adjoint()));

    json j;
    j["input"] = cfg.input;
    j["mode"] = cfg.mode;
    if (cfg.mode == "rank") j["rank"] = cfg.rank;
    j["n_spin_orbitals"] = n;
    j["active_orbitals"] = std::vector<int>(active.active.begin(), active.active.end());
    j["projected_dimension"] = proj.basis.size();
    j["hermiticity_defect"] = (proj.matrix - proj.matrix.adjoint()).norm();
    auto& eig = j["projected_eigenvalues"] = json::array();
    for (long i = 0; i < es.eigenvalues().size(); ++i) eig.push_back(es.eigenvalues()(i));
    j["full_space_ground_energy"] = full.eigenvalues()(0);
    emit(j.dump(2), cfg.output);
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Effective-Hamiltonian quantum solver toolkit"};
    app.require_subcommand(1);

    RunConfig cfg;
    std::string config_path;

    app.add_option("--config", config_path, "JSON config file (flags override it)");
    app.add_option("--input", cfg.input, "FCIDUMP input file");
    app.add_option("--solver", cfg.solver, "fci | adapt | qubit-adapt | uccgsd | gcim");
    app.add_option("--pool", cfg.pool, "sd | gsd | qubit");
    app.add_option("--grad-tol", cfg.grad_tol, "adaptive gradient-norm stop");
    app.add_option("--max-iter", cfg.max_iter, "adaptive iteration cap");
    app.add_option("--theta0", cfg.theta0, "fixed subspace-expansion parameter");
    app.add_option("--x", cfg.gcim_x, "selections per optimization burst");
    app.add_option("--y", cfg.gcim_y, "optimization rounds per burst");
    app.add_option("--prune", cfg.prune_threshold, "Pauli coefficient pruning threshold");
    app.add_option("--k", cfg.truncate_k, "retained measurement groups (0 = all)");
    app.add_option("--shots", cfg.shots, "shots per measurement group");
    app.add_option("--trajectories", cfg.trajectories, "noise trajectories per point");
    app.add_option("--seed", cfg.seed, "root RNG seed");
    app.add_option("--threads", cfg.threads, "worker threads");
    app.add_option("--p2", cfg.p2, "2-qubit depolarizing probability");
    app.add_option("--lambdas", cfg.zne_lambdas, "noise amplification factors");
    app.add_option("--output", cfg.output, "output file (stdout when omitted)");
    app.add_option("--mode", cfg.mode, "downfold-toy: exact | rank | a7");
    app.add_option("--rank", cfg.rank, "commutator truncation rank");
    app.add_option("--active", cfg.active, "active spin-orbital indices");
    app.add_option("--amplitudes", cfg.amplitudes, "external amplitude JSON file");

    auto* inspect = app.add_subcommand("inspect", "parse, map and report statistics");
    auto* map_cmd = app.add_subcommand("map", "emit the qubit operator as JSON");
    auto* group = app.add_subcommand("group", "emit the measurement grouping plan");
    auto* truncate = app.add_subcommand("truncate", "retain the k heaviest groups");
    auto* solve = app.add_subcommand("solve", "run a ground-state solver");
    auto* sample = app.add_subcommand("sample", "shot-sample the exact ground state");
    auto* zne = app.add_subcommand("zne", "noisy sampling + zero-noise extrapolation");
    auto* downfold_toy = app.add_subcommand("downfold-toy", "dense similarity-transform toy");

    // the flags live on the parent app so they can be written after the verb
    for (auto* sub : app.get_subcommands({})) sub->fallthrough();

    CLI11_PARSE(app, argc, argv);

    try {
        if (!config_path.empty()) {
            // config file first, then flags passed on the command line win
            RunConfig flag_values = cfg;
            cfg = RunConfig{};
            load_config_file(config_path, cfg);
            auto pick = [&](const std::string& name, auto& target, auto& flagged) {
                if (app.get_option(name)->count() > 0) target = flagged;
            };
            pick("--input", cfg.input, flag_values.input);
            pick("--solver", cfg.solver, flag_values.solver);
            pick("--pool", cfg.pool, flag_values.pool);
            pick("--grad-tol", cfg.grad_tol, flag_values.grad_tol);
            pick("--max-iter", cfg.max_iter, flag_values.max_iter);
            pick("--theta0", cfg.theta0, flag_values.theta0);
            pick("--x", cfg.gcim_x, flag_values.gcim_x);
            pick("--y", cfg.gcim_y, flag_values.gcim_y);
            pick("--prune", cfg.prune_threshold, flag_values.prune_threshold);
            pick("--k", cfg.truncate_k, flag_values.truncate_k);
            pick("--shots", cfg.shots, flag_values.shots);
            pick("--trajectories", cfg.trajectories, flag_values.trajectories);
            pick("--seed", cfg.seed, flag_values.seed);
            pick("--threads", cfg.threads, flag_values.threads);
            pick("--p2", cfg.p2, flag_values.p2);
            pick("--lambdas", cfg.zne_lambdas, flag_values.zne_lambdas);
            pick("--output", cfg.output, flag_values.output);
            pick("--mode", cfg.mode, flag_values.mode);
            pick("--rank", cfg.rank, flag_values.rank);
            pick("--active", cfg.active, flag_values.active);
            pick("--amplitudes", cfg.amplitudes, flag_values.amplitudes);
        }
        validate(cfg);

        if (inspect->parsed()) return cmd_inspect(cfg);
        if (map_cmd->parsed()) return cmd_map(cfg);
        if (group->parsed()) return cmd_group(cfg);
        if (truncate->parsed()) return cmd_truncate(cfg);
        if (solve->parsed()) return cmd_solve(cfg);
        if (sample->parsed()) return cmd_sample(cfg);
        if (zne->parsed()) return cmd_zne(cfg);
        if (downfold_toy->parsed()) return cmd_downfold_toy(cfg);
        return 0;
    } catch (const ParseError& e) {
        std::cerr << "parse error: " << e.what() << '\n';
        return kExitParse;
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return kExitParse;
    } catch (const InconsistentIntegral& e) {
        std::cerr << "parse error: " << e.what() << '\n';
        return kExitParse;
    } catch (const NotAmplifiable& e) {
        std::cerr << "mitigation error: " << e.what() << '\n';
        return kExitMitigation;
    } catch (const FitError& e) {
        std::cerr << "mitigation error: " << e.what() << '\n';
        return kExitMitigation;
    } catch (const std::exception& e) {
        std::cerr << "solver error: " << e.what() << '\n';
        return kExitSolver;
    }
}
