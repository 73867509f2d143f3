#pragma once

#include <vector>

#include "effham/pauli.hpp"

namespace effham {

/// One Pauli rotation exp(-i angle/2 * pauli); pauli carries unit coefficient.
struct Rotation {
    PauliTerm pauli;
    double angle = 0.0;
};

/// A circuit at the level the solvers produce: an ordered rotation list.
using Circuit = std::vector<Rotation>;

struct GateTally {
    long one_qubit = 0;
    long two_qubit = 0;
    GateTally& operator+=(const GateTally& o) {
        one_qubit += o.one_qubit;
        two_qubit += o.two_qubit;
        return *this;
    }
};

/// Elementary gates a lowered circuit is made of.
struct Gate {
    enum class Kind { H, S, Sdg, Rz, Cnot };
    Kind kind;
    int q0 = 0;       // target (H/S/Sdg/Rz) or control (Cnot)
    int q1 = 0;       // Cnot target
    double angle = 0.0;
};

using GateSequence = std::vector<Gate>;

/// Lower a rotation to basis changes + CNOT staircase + Rz + inverse.
/// A weight-w rotation contributes 2(w-1) CNOTs; weight-0 rotations are a
/// global phase and lower to nothing observable (dropped).
GateSequence lower_rotation(const Rotation& r);
GateSequence lower_circuit(const Circuit& c);

GateTally tally_gates(const GateSequence& gates);

std::string circuit_to_json(const Circuit& c);
Circuit circuit_from_json(const std::string& text);

} // namespace effham
