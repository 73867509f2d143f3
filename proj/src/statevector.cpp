#include "effham/statevector.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>

#include "effham/errors.hpp"

namespace effham {

namespace {
constexpr cplx kIPow[4] = {cplx{1, 0}, cplx{0, 1}, cplx{-1, 0}, cplx{0, -1}};
const double kInvSqrt2 = 1.0 / std::sqrt(2.0);
} // namespace

State::State(int n_qubits) : n_qubits_(n_qubits), amps_(std::size_t{1} << n_qubits) {
    if (n_qubits < 0 || n_qubits > 30) throw DimensionError("State: unsupported qubit count");
    amps_[0] = cplx{1.0, 0.0};
}

double State::norm() const {
    double s = 0.0;
    for (const auto& a : amps_) s += std::norm(a);
    return std::sqrt(s);
}

void State::normalize() {
    double n = norm();
    if (n == 0.0) return;
    for (auto& a : amps_) a /= n;
}

void State::apply_h(int q) {
    const std::uint64_t bit = 1ULL << q;
    for (std::uint64_t i = 0; i < amps_.size(); ++i) {
        if (i & bit) continue;
        cplx a0 = amps_[i], a1 = amps_[i | bit];
        amps_[i] = kInvSqrt2 * (a0 + a1);
        amps_[i | bit] = kInvSqrt2 * (a0 - a1);
    }
}

void State::apply_s(int q) {
    const std::uint64_t bit = 1ULL << q;
    for (std::uint64_t i = 0; i < amps_.size(); ++i)
        if (i & bit) amps_[i] *= cplx{0.0, 1.0};
}

void State::apply_sdg(int q) {
    const std::uint64_t bit = 1ULL << q;
    for (std::uint64_t i = 0; i < amps_.size(); ++i)
        if (i & bit) amps_[i] *= cplx{0.0, -1.0};
}

void State::apply_rz(int q, double theta) {
    const std::uint64_t bit = 1ULL << q;
    const cplx e0 = std::polar(1.0, -theta / 2.0);
    const cplx e1 = std::polar(1.0, theta / 2.0);
    for (std::uint64_t i = 0; i < amps_.size(); ++i) amps_[i] *= (i & bit) ? e1 : e0;
}

void State::apply_cnot(int control, int target) {
    const std::uint64_t cb = 1ULL << control, tb = 1ULL << target;
    for (std::uint64_t i = 0; i < amps_.size(); ++i)
        if ((i & cb) && !(i & tb)) std::swap(amps_[i], amps_[i | tb]);
}

void State::apply_x(int q) {
    const std::uint64_t bit = 1ULL << q;
    for (std::uint64_t i = 0; i < amps_.size(); ++i)
        if (!(i & bit)) std::swap(amps_[i], amps_[i | bit]);
}

void State::apply_pauli(const PauliTerm& p) {
    if (p.n_qubits != n_qubits_) throw DimensionError("apply_pauli: mismatched qubit counts");
    std::vector<cplx> out(amps_.size());
    for (std::uint64_t i = 0; i < amps_.size(); ++i)
        out[i ^ p.x_mask] = p.coeff * p.basis_phase(i) * amps_[i];
    amps_ = std::move(out);
}

void State::apply_pauli_exp(const PauliTerm& p, double theta) {
    if (p.n_qubits != n_qubits_) throw DimensionError("apply_pauli_exp: mismatched qubit counts");
    if (std::abs(p.coeff.imag()) > 1e-12 || std::abs(std::abs(p.coeff.real()) - 1.0) > 1e-12)
        throw DimensionError("apply_pauli_exp: coefficient must be +-1");
    const double c = std::cos(theta / 2.0), s = std::sin(theta / 2.0);
    const cplx mis{0.0, -s};
    if (p.x_mask == 0) {
        // diagonal string: amplitude phase by the +-1 eigenvalue
        for (std::uint64_t i = 0; i < amps_.size(); ++i) {
            cplx eig = p.coeff * p.basis_phase(i); // +-1 up to coeff
            amps_[i] *= cplx{c, 0.0} + mis * eig;
        }
        return;
    }
    const std::uint64_t pivot = p.x_mask & (~p.x_mask + 1); // lowest set x bit
    for (std::uint64_t i = 0; i < amps_.size(); ++i) {
        if (i & pivot) continue;
        const std::uint64_t j = i ^ p.x_mask;
        const cplx pij = p.coeff * p.basis_phase(j); // <i|P|j>
        const cplx pji = p.coeff * p.basis_phase(i); // <j|P|i>
        const cplx ai = amps_[i], aj = amps_[j];
        amps_[i] = c * ai + mis * pij * aj;
        amps_[j] = c * aj + mis * pji * ai;
    }
}

void State::apply_gate(const Gate& g) {
    switch (g.kind) {
    case Gate::Kind::H: apply_h(g.q0); break;
    case Gate::Kind::S: apply_s(g.q0); break;
    case Gate::Kind::Sdg: apply_sdg(g.q0); break;
    case Gate::Kind::Rz: apply_rz(g.q0, g.angle); break;
    case Gate::Kind::Cnot: apply_cnot(g.q0, g.q1); break;
    }
}

cplx State::inner_product(const State& other) const {
    if (other.n_qubits_ != n_qubits_) throw DimensionError("inner_product: mismatched qubit counts");
    cplx s{0.0, 0.0};
    for (std::uint64_t i = 0; i < amps_.size(); ++i) s += std::conj(amps_[i]) * other.amps_[i];
    return s;
}

cplx State::expectation_term(const PauliTerm& t) const {
    cplx s{0.0, 0.0};
    for (std::uint64_t i = 0; i < amps_.size(); ++i) {
        const std::uint64_t j = i ^ t.x_mask;
        s += std::conj(amps_[j]) * t.basis_phase(i) * amps_[i];
    }
    return t.coeff * s;
}

double State::expectation(const PauliSum& s) const {
    if (s.n_qubits() != n_qubits_) throw DimensionError("expectation: mismatched qubit counts");
    if (!s.is_hermitian()) throw NonHermitianInput("expectation: sum has imaginary coefficients");
    cplx total{0.0, 0.0};
    for (const auto& t : s.terms()) total += expectation_term(t);
    if (std::abs(total.imag()) >= 1e-10)
        throw NonHermitianInput("expectation: imaginary residual exceeds 1e-10");
    return total.real();
}

State State::applied(const PauliSum& s) const {
    if (s.n_qubits() != n_qubits_) throw DimensionError("applied: mismatched qubit counts");
    State out(n_qubits_);
    std::fill(out.amps_.begin(), out.amps_.end(), cplx{0.0, 0.0});
    for (const auto& t : s.terms())
        for (std::uint64_t i = 0; i < amps_.size(); ++i)
            out.amps_[i ^ t.x_mask] += t.coeff * t.basis_phase(i) * amps_[i];
    return out;
}

void State::dump_binary(const std::string& path) const {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open " + path);
    std::uint64_t n = static_cast<std::uint64_t>(n_qubits_);
    out.write(reinterpret_cast<const char*>(&n), sizeof(n));
    for (const auto& a : amps_) {
        double re = a.real(), im = a.imag();
        out.write(reinterpret_cast<const char*>(&re), sizeof(re));
        out.write(reinterpret_cast<const char*>(&im), sizeof(im));
    }
}

State State::load_binary(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + path);
    std::uint64_t n = 0;
    in.read(reinterpret_cast<char*>(&n), sizeof(n));
    State s(static_cast<int>(n));
    for (auto& a : s.amps_) {
        double re, im;
        in.read(reinterpret_cast<char*>(&re), sizeof(re));
        in.read(reinterpret_cast<char*>(&im), sizeof(im));
        a = cplx{re, im};
    }
    return s;
}

State init_reference(int n_qubits, const std::set<int>& occupied) {
    State s(n_qubits);
    std::uint64_t index = 0;
    for (int q : occupied) {
        if (q < 0 || q >= n_qubits) throw IndexError("init_reference: occupied index out of range");
        index |= 1ULL << q;
    }
    s.amplitude(0) = cplx{0.0, 0.0};
    s.amplitude(index) = cplx{1.0, 0.0};
    return s;
}

namespace {

void apply_two_qubit_depolarizing(State& state, int qa, int qb, std::mt19937_64& rng) {
    // one of the 15 non-identity two-qubit Paulis, uniformly
    std::uniform_int_distribution<int> pick(1, 15);
    int code = pick(rng);
    int ca = code & 3, cb = (code >> 2) & 3; // 0:I 1:X 2:Z 3:Y
    PauliTerm p;
    p.n_qubits = state.n_qubits();
    auto set_letter = [&](int q, int c) {
        if (c & 1) p.x_mask |= 1ULL << q;
        if (c & 2) p.z_mask |= 1ULL << q;
    };
    set_letter(qa, ca);
    set_letter(qb, cb);
    state.apply_pauli(p);
}

} // namespace

GateTally run_gates(State& state, const GateSequence& gates, const NoiseModel* noise,
                    std::mt19937_64* rng) {
    GateTally tally;
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    for (const auto& g : gates) {
        state.apply_gate(g);
        if (g.kind == Gate::Kind::Cnot) {
            ++tally.two_qubit;
            if (noise && noise->p2 > 0.0 && rng && unit(*rng) < noise->p2)
                apply_two_qubit_depolarizing(state, g.q0, g.q1, *rng);
        } else {
            ++tally.one_qubit;
        }
    }
    return tally;
}

GateTally run_circuit(State& state, const Circuit& circuit, const NoiseModel* noise,
                      std::mt19937_64* rng) {
    if (noise && noise->p2 > 0.0) return run_gates(state, lower_circuit(circuit), noise, rng);
    // noiseless: apply rotations exactly, tally the staircase counts
    GateTally tally;
    for (const auto& r : circuit) {
        state.apply_pauli_exp(r.pauli, r.angle);
        GateTally t = tally_gates(lower_rotation(r));
        tally += t;
    }
    return tally;
}

std::map<std::uint64_t, long> sample_in_basis(const State& state, std::uint64_t basis_x,
                                              std::uint64_t basis_z, long shots,
                                              std::mt19937_64& rng) {
    State rotated = state;
    for (int q = 0; q < state.n_qubits(); ++q) {
        bool x = (basis_x >> q) & 1u, z = (basis_z >> q) & 1u;
        if (x && z) {
            rotated.apply_sdg(q);
            rotated.apply_h(q);
        } else if (x) {
            rotated.apply_h(q);
        }
    }
    std::vector<double> cdf(rotated.dim());
    double acc = 0.0;
    for (std::uint64_t i = 0; i < rotated.dim(); ++i) {
        acc += std::norm(rotated.amplitude(i));
        cdf[i] = acc;
    }
    std::uniform_real_distribution<double> unit(0.0, acc);
    std::map<std::uint64_t, long> counts;
    for (long s = 0; s < shots; ++s) {
        double u = unit(rng);
        auto it = std::lower_bound(cdf.begin(), cdf.end(), u);
        std::uint64_t idx = static_cast<std::uint64_t>(it - cdf.begin());
        if (idx >= rotated.dim()) idx = rotated.dim() - 1;
        ++counts[idx];
    }
    return counts;
}

} // namespace effham
