#include "effham/circuit.hpp"

#include <nlohmann/json.hpp>

namespace effham {

GateSequence lower_rotation(const Rotation& r) {
    GateSequence seq;
    std::vector<int> support;
    for (int k = 0; k < r.pauli.n_qubits; ++k)
        if ((r.pauli.support() >> k) & 1u) support.push_back(k);
    if (support.empty()) return seq; // global phase only

    auto basis_in = [&](int q) {
        bool x = (r.pauli.x_mask >> q) & 1u;
        bool z = (r.pauli.z_mask >> q) & 1u;
        if (x && z) { // Y: S+ then H maps Y -> Z
            seq.push_back({Gate::Kind::Sdg, q});
            seq.push_back({Gate::Kind::H, q});
        } else if (x) {
            seq.push_back({Gate::Kind::H, q});
        }
    };
    auto basis_out = [&](int q) {
        bool x = (r.pauli.x_mask >> q) & 1u;
        bool z = (r.pauli.z_mask >> q) & 1u;
        if (x && z) {
            seq.push_back({Gate::Kind::H, q});
            seq.push_back({Gate::Kind::S, q});
        } else if (x) {
            seq.push_back({Gate::Kind::H, q});
        }
    };

    for (int q : support) basis_in(q);
    for (std::size_t i = 0; i + 1 < support.size(); ++i)
        seq.push_back({Gate::Kind::Cnot, support[i], support[i + 1]});
    seq.push_back({Gate::Kind::Rz, support.back(), 0, r.angle});
    for (std::size_t i = support.size() - 1; i >= 1; --i)
        seq.push_back({Gate::Kind::Cnot, support[i - 1], support[i]});
    for (auto it = support.rbegin(); it != support.rend(); ++it) basis_out(*it);
    return seq;
}

GateSequence lower_circuit(const Circuit& c) {
    GateSequence seq;
    for (const auto& r : c) {
        GateSequence g = lower_rotation(r);
        seq.insert(seq.end(), g.begin(), g.end());
    }
    return seq;
}

GateTally tally_gates(const GateSequence& gates) {
    GateTally t;
    for (const auto& g : gates)
        (g.kind == Gate::Kind::Cnot ? t.two_qubit : t.one_qubit)++;
    return t;
}

std::string circuit_to_json(const Circuit& c) {
    nlohmann::json j = nlohmann::json::array();
    for (const auto& r : c)
        j.push_back({{"pauli", r.pauli.letters()}, {"angle", r.angle}});
    return j.dump(2);
}

Circuit circuit_from_json(const std::string& text) {
    nlohmann::json j = nlohmann::json::parse(text);
    Circuit c;
    for (const auto& e : j) {
        Rotation r;
        r.pauli = parse_pauli_letters(e.at("pauli").get<std::string>());
        r.angle = e.at("angle").get<double>();
        c.push_back(r);
    }
    return c;
}

} // namespace effham
