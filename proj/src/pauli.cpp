#include "effham/pauli.hpp"

#include <cmath>
#include <sstream>

#include "effham/errors.hpp"

#include <nlohmann/json.hpp>

namespace effham {

namespace {

// Pauli letters encoded as x + 2z: I=0, X=1, Z=2, Y=3.
// phase_exp[a][b] is k in i^k such that A*B = i^k * (A xor B).
constexpr int kPhaseExp[4][4] = {
    // I  X  Z  Y
    {0, 0, 0, 0}, // I*
    {0, 0, 3, 1}, // X*: X*Z=-iY, X*Y=iZ
    {0, 1, 0, 3}, // Z*: Z*X=iY,  Z*Y=-iX
    {0, 3, 1, 0}, // Y*: Y*X=-iZ, Y*Z=iX
};

constexpr cplx kIPow[4] = {cplx{1, 0}, cplx{0, 1}, cplx{-1, 0}, cplx{0, -1}};

int letter_code(const PauliTerm& t, int k) {
    return int((t.x_mask >> k) & 1u) + 2 * int((t.z_mask >> k) & 1u);
}

} // namespace

char PauliTerm::letter(int k) const {
    static const char kLetters[4] = {'I', 'X', 'Z', 'Y'};
    return kLetters[letter_code(*this, k)];
}

std::string PauliTerm::letters() const {
    std::string s(static_cast<std::size_t>(n_qubits), 'I');
    for (int k = 0; k < n_qubits; ++k) s[static_cast<std::size_t>(k)] = letter(k);
    return s;
}

cplx PauliTerm::basis_phase(std::uint64_t basis_index) const {
    // X|b> = |1-b>, Z|b> = (-1)^b |b>, Y|b> = i(-1)^b |1-b>.
    int ny = __builtin_popcountll(x_mask & z_mask);
    int nz = __builtin_popcountll(basis_index & z_mask);
    cplx phase = kIPow[ny & 3];
    if (nz & 1) phase = -phase;
    return phase;
}

PauliTerm pauli_multiply(const PauliTerm& a, const PauliTerm& b) {
    if (a.n_qubits != b.n_qubits)
        throw DimensionError("pauli_multiply: mismatched qubit counts");
    PauliTerm out;
    out.n_qubits = a.n_qubits;
    out.x_mask = a.x_mask ^ b.x_mask;
    out.z_mask = a.z_mask ^ b.z_mask;
    int exp = 0;
    std::uint64_t both = (a.support() & b.support());
    while (both) {
        int k = __builtin_ctzll(both);
        both &= both - 1;
        exp += kPhaseExp[letter_code(a, k)][letter_code(b, k)];
    }
    out.coeff = a.coeff * b.coeff * kIPow[exp & 3];
    return out;
}

bool paulis_commute(const PauliTerm& a, const PauliTerm& b) {
    int anti = __builtin_popcountll(a.x_mask & b.z_mask) + __builtin_popcountll(a.z_mask & b.x_mask);
    return (anti & 1) == 0;
}

bool qubitwise_commute(const PauliTerm& a, const PauliTerm& b) {
    std::uint64_t shared = a.support() & b.support();
    return (((a.x_mask ^ b.x_mask) | (a.z_mask ^ b.z_mask)) & shared) == 0;
}

void PauliSum::add(const PauliTerm& t) {
    if (t.n_qubits != n_qubits_)
        throw DimensionError("PauliSum::add: mismatched qubit counts");
    add(t.x_mask, t.z_mask, t.coeff);
}

void PauliSum::add(std::uint64_t x, std::uint64_t z, cplx c) {
    auto key = Key{x, z};
    auto it = terms_.find(key);
    if (it == terms_.end()) {
        if (c != cplx{0.0, 0.0}) terms_.emplace(key, c);
        return;
    }
    it->second += c;
    if (it->second == cplx{0.0, 0.0}) terms_.erase(it);
}

cplx PauliSum::coefficient(std::uint64_t x, std::uint64_t z) const {
    auto it = terms_.find(Key{x, z});
    return it == terms_.end() ? cplx{0.0, 0.0} : it->second;
}

std::vector<PauliTerm> PauliSum::terms() const {
    std::vector<PauliTerm> out;
    out.reserve(terms_.size());
    for (const auto& [key, c] : terms_)
        out.push_back(PauliTerm{key.first, key.second, c, n_qubits_});
    return out;
}

PauliSum& PauliSum::operator+=(const PauliSum& other) {
    if (other.n_qubits_ != n_qubits_)
        throw DimensionError("PauliSum::operator+=: mismatched qubit counts");
    for (const auto& [key, c] : other.terms_) add(key.first, key.second, c);
    return *this;
}

PauliSum& PauliSum::operator*=(cplx scale) {
    if (scale == cplx{0.0, 0.0}) {
        terms_.clear();
        return *this;
    }
    for (auto& [key, c] : terms_) c *= scale;
    return *this;
}

PauliSum PauliSum::multiplied_by(const PauliSum& other) const {
    if (other.n_qubits_ != n_qubits_)
        throw DimensionError("PauliSum::multiplied_by: mismatched qubit counts");
    PauliSum out(n_qubits_);
    for (const auto& [ka, ca] : terms_) {
        PauliTerm a{ka.first, ka.second, ca, n_qubits_};
        for (const auto& [kb, cb] : other.terms_) {
            PauliTerm b{kb.first, kb.second, cb, n_qubits_};
            out.add(pauli_multiply(a, b));
        }
    }
    return out;
}

double PauliSum::weight() const {
    double w = 0.0;
    for (const auto& [key, c] : terms_)
        if (key != Key{0, 0}) w += std::abs(c);
    return w;
}

double PauliSum::max_imag() const {
    double m = 0.0;
    for (const auto& [key, c] : terms_) m = std::max(m, std::abs(c.imag()));
    return m;
}

double PauliSum::prune(double eps) {
    double discarded = 0.0;
    for (auto it = terms_.begin(); it != terms_.end();) {
        if (std::abs(it->second) < eps) {
            discarded += std::abs(it->second);
            it = terms_.erase(it);
        } else {
            ++it;
        }
    }
    return discarded;
}

PauliSum commutator(const PauliSum& a, const PauliSum& b) {
    if (a.n_qubits() != b.n_qubits())
        throw DimensionError("commutator: mismatched qubit counts");
    PauliSum out(a.n_qubits());
    for (const auto& ta : a.terms()) {
        for (const auto& tb : b.terms()) {
            if (paulis_commute(ta, tb)) continue;
            PauliTerm prod = pauli_multiply(ta, tb);
            prod.coeff *= 2.0; // AB - BA = 2AB when {A,B} anticommute
            out.add(prod);
        }
    }
    return out;
}

PauliTerm parse_pauli_letters(const std::string& letters, cplx coeff) {
    PauliTerm t;
    t.n_qubits = static_cast<int>(letters.size());
    t.coeff = coeff;
    for (std::size_t k = 0; k < letters.size(); ++k) {
        switch (letters[k]) {
        case 'I': break;
        case 'X': t.x_mask |= 1ULL << k; break;
        case 'Z': t.z_mask |= 1ULL << k; break;
        case 'Y':
            t.x_mask |= 1ULL << k;
            t.z_mask |= 1ULL << k;
            break;
        default:
            throw ParseError(std::string("unknown Pauli letter '") + letters[k] + "'");
        }
    }
    return t;
}

std::string PauliSum::to_text() const {
    std::ostringstream os;
    os.precision(17);
    for (const auto& t : terms()) {
        if (t.coeff.imag() == 0.0)
            os << t.coeff.real();
        else
            os << '(' << t.coeff.real() << ',' << t.coeff.imag() << ')';
        os << ' ' << t.letters() << '\n';
    }
    return os.str();
}

PauliSum PauliSum::from_text(const std::string& text) {
    std::istringstream is(text);
    std::string line;
    PauliSum out;
    bool first = true;
    long line_no = 0;
    while (std::getline(is, line)) {
        ++line_no;
        if (line.empty()) continue;
        std::istringstream ls(line);
        cplx coeff;
        if (line.find('(') != std::string::npos) {
            char lp, comma, rp;
            double re, im;
            if (!(ls >> lp >> re >> comma >> im >> rp))
                throw ParseError("bad complex coefficient", line_no);
            coeff = cplx{re, im};
        } else {
            double re;
            if (!(ls >> re)) throw ParseError("bad coefficient", line_no);
            coeff = cplx{re, 0.0};
        }
        std::string letters;
        if (!(ls >> letters)) throw ParseError("missing Pauli string", line_no);
        PauliTerm t = parse_pauli_letters(letters, coeff);
        if (first) {
            out = PauliSum(t.n_qubits);
            first = false;
        }
        out.add(t);
    }
    return out;
}

std::string PauliSum::to_json() const {
    nlohmann::json j;
    j["n_qubits"] = n_qubits_;
    auto& arr = j["terms"] = nlohmann::json::array();
    for (const auto& t : terms())
        arr.push_back({{"pauli", t.letters()}, {"re", t.coeff.real()}, {"im", t.coeff.imag()}});
    return j.dump(2);
}

PauliSum PauliSum::from_json(const std::string& json_text) {
    nlohmann::json j = nlohmann::json::parse(json_text);
    PauliSum out(j.at("n_qubits").get<int>());
    for (const auto& e : j.at("terms"))
        out.add(parse_pauli_letters(e.at("pauli").get<std::string>(),
                                    cplx{e.at("re").get<double>(), e.at("im").get<double>()}));
    return out;
}

} // namespace effham
