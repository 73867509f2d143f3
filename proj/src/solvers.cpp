#include "effham/solvers.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <random>
#include <sstream>
#include <unordered_map>

#include <nlohmann/json.hpp>

#include "effham/errors.hpp"

namespace effham {

namespace {
int spin_of(int spin_orbital) { return spin_orbital & 1; } // interleaved: even alpha
}

// ---------------------------------------------------------------------------
// Exact diagonalization
// ---------------------------------------------------------------------------

std::vector<std::uint64_t> sector_basis(int n_qubits, const Sector& sector) {
    std::vector<std::uint64_t> basis;
    const std::uint64_t dim = 1ULL << n_qubits;
    for (std::uint64_t d = 0; d < dim; ++d) {
        int n = __builtin_popcountll(d);
        if (n != sector.n_electrons) continue;
        int n_alpha = __builtin_popcountll(d & 0x5555555555555555ULL);
        if (2 * n_alpha - n != sector.ms2) continue;
        basis.push_back(d);
    }
    return basis;
}

GroundState exact_ground_state(const PauliSum& s, std::optional<Sector> sector) {
    const int n = s.n_qubits();
    if (n > 14) throw DimensionError("exact_ground_state: more than 14 qubits");
    if (!s.is_hermitian()) throw NonHermitianInput("exact_ground_state: non-Hermitian sum");

    std::vector<std::uint64_t> basis;
    if (sector) {
        if (!check_number_symmetry(s, n))
            throw SymmetryError("exact_ground_state: sector given but [H, N] != 0");
        basis = sector_basis(n, *sector);
        if (basis.empty()) throw SymmetryError("exact_ground_state: empty sector");
    } else {
        basis.resize(1ULL << n);
        for (std::uint64_t d = 0; d < basis.size(); ++d) basis[d] = d;
    }
    if (basis.size() > 8192) throw DimensionError("exact_ground_state: dense basis too large");

    std::unordered_map<std::uint64_t, std::size_t> pos;
    pos.reserve(basis.size());
    for (std::size_t i = 0; i < basis.size(); ++i) pos.emplace(basis[i], i);

    Eigen::MatrixXcd mat = Eigen::MatrixXcd::Zero(static_cast<long>(basis.size()),
                                                  static_cast<long>(basis.size()));
    auto terms = s.terms();
    for (std::size_t col = 0; col < basis.size(); ++col) {
        const std::uint64_t b = basis[col];
        for (const auto& t : terms) {
            const std::uint64_t j = b ^ t.x_mask;
            auto it = pos.find(j);
            if (it == pos.end()) {
                if (sector && std::abs(t.coeff) > 1e-10)
                    throw SymmetryError("exact_ground_state: operator leaves the sector");
                continue;
            }
            mat(static_cast<long>(it->second), static_cast<long>(col)) += t.coeff * t.basis_phase(b);
        }
    }

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(mat);
    GroundState gs;
    gs.energy = es.eigenvalues()(0);
    gs.eigenvector = es.eigenvectors().col(0);
    gs.basis = std::move(basis);
    return gs;
}

// ---------------------------------------------------------------------------
// Pools
// ---------------------------------------------------------------------------

std::set<int> hf_occupation(int n_electrons) {
    std::set<int> occ;
    for (int k = 0; k < n_electrons; ++k) occ.insert(k);
    return occ;
}

OperatorPool build_pool(PoolKind kind, int n_spin_orbitals, int n_electrons) {
    OperatorPool pool;
    pool.kind = kind;
    pool.n_spin_orbitals = n_spin_orbitals;
    pool.n_electrons = n_electrons;
    const int n = n_spin_orbitals, ne = n_electrons;

    auto add_sd = [&]() {
        for (int i = 0; i < ne; ++i)
            for (int a = ne; a < n; ++a)
                if (spin_of(i) == spin_of(a))
                    pool.elements.push_back(ExcitationGenerator::single(a, i));
        for (int i = 0; i < ne; ++i)
            for (int j = i + 1; j < ne; ++j)
                for (int a = ne; a < n; ++a)
                    for (int b = a + 1; b < n; ++b)
                        if (spin_of(i) + spin_of(j) == spin_of(a) + spin_of(b))
                            pool.elements.push_back(ExcitationGenerator::pair(a, b, j, i));
    };

    switch (kind) {
    case PoolKind::FermionicSD:
        add_sd();
        break;
    case PoolKind::FermionicGSD: {
        for (int q = 0; q < n; ++q)
            for (int p = q + 1; p < n; ++p)
                if (spin_of(p) == spin_of(q))
                    pool.elements.push_back(ExcitationGenerator::single(p, q));
        // doubles a+_p a+_q a_s a_r with p<q, r<s, distinct indices; the
        // ((p,q),(r,s)) / ((r,s),(p,q)) mirror pair is the same generator up
        // to sign, so keep (p,q) > (r,s) only.
        for (int r = 0; r < n; ++r)
            for (int ss = r + 1; ss < n; ++ss)
                for (int p = 0; p < n; ++p)
                    for (int q = p + 1; q < n; ++q) {
                        if (std::make_pair(p, q) <= std::make_pair(r, ss)) continue;
                        if (p == r || p == ss || q == r || q == ss) continue;
                        if (spin_of(p) + spin_of(q) != spin_of(r) + spin_of(ss)) continue;
                        pool.elements.push_back(ExcitationGenerator::pair(p, q, ss, r));
                    }
        break;
    }
    case PoolKind::QubitMinimal: {
        OperatorPool sd = build_pool(PoolKind::FermionicSD, n, ne);
        std::set<std::pair<std::uint64_t, std::uint64_t>> seen;
        for (const auto& g : sd.elements) {
            for (const auto& t : generator_operator(g, n).terms()) {
                PauliTerm stripped;
                stripped.n_qubits = n;
                stripped.x_mask = t.x_mask;
                stripped.z_mask = t.z_mask & t.x_mask; // drop the pure-Z tail
                if ((__builtin_popcountll(stripped.x_mask & stripped.z_mask) & 1) == 0)
                    continue; // even Y count: not anti-Hermitian under -i/2 P
                if (!seen.emplace(stripped.x_mask, stripped.z_mask).second) continue;
                pool.elements.push_back(ExcitationGenerator::pauli_string(stripped));
            }
        }
        break;
    }
    }
    return pool;
}

// ---------------------------------------------------------------------------
// Ansatz state preparation and gradients
// ---------------------------------------------------------------------------

State prepare_ansatz_state(const Ansatz& a, int n_qubits, const std::set<int>& occupied) {
    State state = init_reference(n_qubits, occupied);
    for (std::size_t k = 0; k < a.generators.size(); ++k)
        for (const auto& r : jw_excitation_evolution(a.generators[k], a.parameters(static_cast<long>(k)),
                                                     n_qubits))
            state.apply_pauli_exp(r.pauli, r.angle);
    return state;
}

Circuit ansatz_circuit(const Ansatz& a, int n_qubits) {
    Circuit c;
    for (std::size_t k = 0; k < a.generators.size(); ++k) {
        auto rots = jw_excitation_evolution(a.generators[k], a.parameters(static_cast<long>(k)),
                                            n_qubits);
        c.insert(c.end(), rots.begin(), rots.end());
    }
    return c;
}

double adapt_gradient(const State& state, const PauliSum& h, const ExcitationGenerator& g) {
    State hpsi = state.applied(h);
    State apsi = state.applied(generator_operator(g, state.n_qubits()));
    return 2.0 * hpsi.inner_product(apsi).real(); // <[H,A]> for anti-Hermitian A
}

namespace {

void apply_generator_exp(State& state, const ExcitationGenerator& g, double theta, int n) {
    for (const auto& r : jw_excitation_evolution(g, theta, n))
        state.apply_pauli_exp(r.pauli, r.angle);
}

} // namespace

double ansatz_energy_and_gradient(const Ansatz& a, const PauliSum& h, int n_qubits,
                                  const std::set<int>& occupied, Eigen::VectorXd* grad) {
    State phi = prepare_ansatz_state(a, n_qubits, occupied);
    State chi = phi.applied(h);
    double energy = phi.inner_product(chi).real();
    if (!grad) return energy;

    grad->resize(static_cast<long>(a.generators.size()));
    // Backward sweep: at step k, phi = U_k..U_1|ref>, chi = U_{k+1}+..U_L+ H U|ref>,
    // and dE/dtheta_k = 2 Re <chi|A_k|phi>.
    for (long k = static_cast<long>(a.generators.size()) - 1; k >= 0; --k) {
        const auto& g = a.generators[static_cast<std::size_t>(k)];
        State apsi = phi.applied(generator_operator(g, n_qubits));
        (*grad)(k) = 2.0 * chi.inner_product(apsi).real();
        apply_generator_exp(phi, g, -a.parameters(k), n_qubits);
        apply_generator_exp(chi, g, -a.parameters(k), n_qubits);
    }
    return energy;
}

// ---------------------------------------------------------------------------
// ADAPT loop
// ---------------------------------------------------------------------------

namespace {

struct PoolScreen {
    Eigen::VectorXd gradients;
    double norm2 = 0.0;
    int argmax = -1;
};

PoolScreen screen_pool(const State& state, const PauliSum& h, const OperatorPool& pool) {
    PoolScreen sc;
    sc.gradients.resize(static_cast<long>(pool.elements.size()));
    State hpsi = state.applied(h);
    double best = -1.0;
    for (std::size_t i = 0; i < pool.elements.size(); ++i) {
        State apsi = state.applied(generator_operator(pool.elements[i], state.n_qubits()));
        double g = 2.0 * hpsi.inner_product(apsi).real();
        sc.gradients(static_cast<long>(i)) = g;
        if (std::abs(g) > best + 1e-15) { // ties resolved to the lowest index
            best = std::abs(g);
            sc.argmax = static_cast<int>(i);
        }
    }
    sc.norm2 = sc.gradients.norm();
    return sc;
}

SolverTrace run_adapt(const PauliSum& h, const OperatorPool& pool, const SolverConfig& config) {
    const int n = h.n_qubits();
    const std::set<int> occ = hf_occupation(pool.n_electrons);
    SolverTrace trace;
    trace.ansatz.parameters.resize(0);

    State state = init_reference(n, occ);
    double energy = state.expectation(h);
    trace.final_energy = energy;
    std::mt19937_64 perturb_rng(0x9d2c5680u);

    for (int iter = 0; iter < config.max_iter; ++iter) {
        PoolScreen sc = screen_pool(state, h, pool);
        if (sc.norm2 < config.grad_tol) {
            trace.converged_reason = "gradient_norm_below_tol";
            return trace;
        }

        trace.ansatz.generators.push_back(pool.elements[static_cast<std::size_t>(sc.argmax)]);
        Eigen::VectorXd x0(trace.ansatz.parameters.size() + 1);
        x0 << trace.ansatz.parameters, 0.0;

        auto objective = [&](const Eigen::VectorXd& x, Eigen::VectorXd& g) {
            Ansatz a{trace.ansatz.generators, x};
            return ansatz_energy_and_gradient(a, h, n, occ, &g);
        };
        OptimizerResult opt = minimize_lbfgs(objective, x0, config.optimizer);
        if (opt.line_search_failed && opt.value > energy - 1e-14) {
            // one retry from a slightly perturbed start before giving up
            Eigen::VectorXd xp = x0;
            std::normal_distribution<double> jitter(0.0, 1e-3);
            for (long i = 0; i < xp.size(); ++i) xp(i) += jitter(perturb_rng);
            OptimizerResult retry = minimize_lbfgs(objective, xp, config.optimizer);
            if (retry.value < opt.value) opt = retry;
            if (opt.value > energy + 1e-12) {
                trace.converged_reason = "optimizer_failure";
                trace.ansatz.generators.pop_back();
                return trace;
            }
        }

        trace.ansatz.parameters = opt.x;
        assert(opt.value <= energy + 1e-12); // warm start from the previous optimum
        energy = opt.value;
        state = prepare_ansatz_state(trace.ansatz, n, occ);

        SolverIteration rec;
        rec.selected = sc.argmax;
        rec.gradient_norm = sc.norm2;
        rec.selected_gradient = sc.gradients(sc.argmax);
        rec.energy = energy;
        rec.parameters = opt.x;
        trace.iterations.push_back(rec);
        trace.final_energy = energy;
    }
    trace.converged_reason = "max_iterations";
    return trace;
}

} // namespace

SolverTrace adapt_vqe(const PauliSum& h, const OperatorPool& pool, const SolverConfig& config) {
    return run_adapt(h, pool, config);
}

SolverTrace qubit_adapt_vqe(const PauliSum& h, int n_electrons, const SolverConfig& config) {
    OperatorPool pool = build_pool(PoolKind::QubitMinimal, h.n_qubits(), n_electrons);
    return run_adapt(h, pool, config);
}

SolverTrace uccgsd_vqe(const PauliSum& h, int n_electrons, const SolverConfig& config) {
    const int n = h.n_qubits();
    OperatorPool pool = build_pool(PoolKind::FermionicGSD, n, n_electrons);
    const std::set<int> occ = hf_occupation(n_electrons);

    SolverTrace trace;
    trace.ansatz.generators = pool.elements;
    Eigen::VectorXd x0 = Eigen::VectorXd::Zero(static_cast<long>(pool.elements.size()));

    auto objective = [&](const Eigen::VectorXd& x, Eigen::VectorXd& g) {
        Ansatz a{trace.ansatz.generators, x};
        return ansatz_energy_and_gradient(a, h, n, occ, &g);
    };
    OptimizerResult opt = minimize_lbfgs(objective, x0, config.optimizer);

    trace.ansatz.parameters = opt.x;
    trace.final_energy = opt.value;
    trace.converged_reason = opt.converged ? "gradient_norm_below_tol"
                                           : (opt.line_search_failed ? "optimizer_failure"
                                                                     : "max_iterations");
    SolverIteration rec;
    rec.energy = opt.value;
    rec.gradient_norm = opt.grad_inf_norm;
    rec.parameters = opt.x;
    trace.iterations.push_back(rec);
    return trace;
}

// ---------------------------------------------------------------------------
// ADAPT-GCIM
// ---------------------------------------------------------------------------

Eigen::VectorXd solve_gev(const Eigen::MatrixXcd& hmat, const Eigen::MatrixXcd& smat,
                          double cutoff) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> se(smat);
    std::vector<long> keep;
    for (long i = 0; i < se.eigenvalues().size(); ++i)
        if (se.eigenvalues()(i) > cutoff) keep.push_back(i);
    if (keep.empty()) throw DegenerateSubspace("solve_gev: all overlap eigenvalues below cutoff");

    Eigen::MatrixXcd x(smat.rows(), static_cast<long>(keep.size()));
    for (std::size_t k = 0; k < keep.size(); ++k)
        x.col(static_cast<long>(k)) =
            se.eigenvectors().col(keep[k]) / std::sqrt(se.eigenvalues()(keep[k]));

    Eigen::MatrixXcd ht = x.adjoint() * hmat * x;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> he(ht);
    return he.eigenvalues();
}

namespace {

void append_basis_state(GcimSubspace& sub, const State& state, const PauliSum& h) {
    const long m = static_cast<long>(sub.basis.size());
    sub.basis.push_back(state);
    sub.hmat.conservativeResize(m + 1, m + 1);
    sub.smat.conservativeResize(m + 1, m + 1);
    State hnew = state.applied(h);
    for (long i = 0; i <= m; ++i) {
        cplx sij = sub.basis[static_cast<std::size_t>(i)].inner_product(state);
        cplx hij = sub.basis[static_cast<std::size_t>(i)].inner_product(hnew);
        sub.smat(i, m) = sij;
        sub.smat(m, i) = std::conj(sij);
        sub.hmat(i, m) = hij;
        sub.hmat(m, i) = std::conj(hij);
    }
}

} // namespace

std::pair<GcimSubspace, SolverTrace> gcim_expand(const PauliSum& h, const OperatorPool& pool,
                                                 const SolverConfig& config) {
    const int n = h.n_qubits();
    const std::set<int> occ = hf_occupation(pool.n_electrons);

    GcimSubspace sub;
    sub.cutoff = config.overlap_cutoff;
    sub.hmat.resize(0, 0);
    sub.smat.resize(0, 0);
    SolverTrace trace;

    State ref = init_reference(n, occ);
    append_basis_state(sub, ref, h);
    double energy = solve_gev(sub.hmat, sub.smat, sub.cutoff)(0);
    trace.final_energy = energy;

    int stalled = 0;
    for (int iter = 1; iter <= config.max_iter; ++iter) {
        State state = prepare_ansatz_state(trace.ansatz, n, occ);
        PoolScreen sc = screen_pool(state, h, pool);
        if (sc.norm2 < config.grad_tol) {
            trace.converged_reason = "gradient_norm_below_tol";
            return {sub, trace};
        }

        trace.ansatz.generators.push_back(pool.elements[static_cast<std::size_t>(sc.argmax)]);
        Eigen::VectorXd params(trace.ansatz.parameters.size() + 1);
        params << trace.ansatz.parameters, config.theta0;
        trace.ansatz.parameters = params;

        append_basis_state(sub, prepare_ansatz_state(trace.ansatz, n, occ), h);

        if (config.gcim_y > 0 && iter % config.gcim_x == 0) {
            // up to y optimization rounds, then parameters are frozen again
            auto objective = [&](const Eigen::VectorXd& x, Eigen::VectorXd& g) {
                Ansatz a{trace.ansatz.generators, x};
                return ansatz_energy_and_gradient(a, h, n, occ, &g);
            };
            OptimizerOptions opts = config.optimizer;
            opts.max_iterations = config.gcim_y;
            OptimizerResult opt = minimize_lbfgs(objective, trace.ansatz.parameters, opts);
            trace.ansatz.parameters = opt.x;
            append_basis_state(sub, prepare_ansatz_state(trace.ansatz, n, occ), h);
        }

        double new_energy = solve_gev(sub.hmat, sub.smat, sub.cutoff)(0);
        SolverIteration rec;
        rec.selected = sc.argmax;
        rec.gradient_norm = sc.norm2;
        rec.selected_gradient = sc.gradients(sc.argmax);
        rec.energy = new_energy;
        rec.parameters = trace.ansatz.parameters;
        trace.iterations.push_back(rec);

        stalled = (energy - new_energy < 1e-9) ? stalled + 1 : 0;
        energy = new_energy;
        trace.final_energy = energy;
        if (stalled >= 3) {
            trace.converged_reason = "energy_stalled";
            return {sub, trace};
        }
    }
    trace.converged_reason = "max_iterations";
    return {sub, trace};
}

// ---------------------------------------------------------------------------
// Serialization
// ---------------------------------------------------------------------------

std::string SolverTrace::to_json() const {
    nlohmann::json j;
    j["final_energy"] = final_energy;
    j["converged_reason"] = converged_reason;
    auto& arr = j["iterations"] = nlohmann::json::array();
    for (const auto& it : iterations) {
        nlohmann::json ji;
        ji["selected"] = it.selected;
        ji["gradient_norm"] = it.gradient_norm;
        ji["selected_gradient"] = it.selected_gradient;
        ji["energy"] = it.energy;
        ji["parameters"] = std::vector<double>(it.parameters.data(),
                                               it.parameters.data() + it.parameters.size());
        arr.push_back(ji);
    }
    return j.dump(2);
}

std::string SolverTrace::to_csv() const {
    std::ostringstream os;
    os.precision(17);
    os << "iteration,selected,gradient_norm,energy\n";
    for (std::size_t i = 0; i < iterations.size(); ++i)
        os << i << ',' << iterations[i].selected << ',' << iterations[i].gradient_norm << ','
           << iterations[i].energy << '\n';
    return os.str();
}

std::string GcimSubspace::matrices_to_json() const {
    nlohmann::json j;
    auto dump = [](const Eigen::MatrixXcd& m) {
        nlohmann::json rows = nlohmann::json::array();
        for (long i = 0; i < m.rows(); ++i) {
            nlohmann::json row = nlohmann::json::array();
            for (long k = 0; k < m.cols(); ++k)
                row.push_back({{"re", m(i, k).real()}, {"im", m(i, k).imag()}});
            rows.push_back(row);
        }
        return rows;
    };
    j["hmat"] = dump(hmat);
    j["smat"] = dump(smat);
    j["cutoff"] = cutoff;
    return j.dump(2);
}

} // namespace effham
