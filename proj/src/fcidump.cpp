#include "effham/fcidump.hpp"

#include <cctype>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <sstream>

#include "effham/errors.hpp"

namespace effham {

namespace {

constexpr double kDuplicateTol = 1e-10;

using Key2 = std::array<int, 2>;
using Key4 = std::array<int, 4>;

// Hermitian (4-fold) orbit of a chemist-notation index quadruple:
// (ij|kl) = (kl|ij) = (ji|lk) = (lk|ji).
std::array<Key4, 4> hermitian_orbit(const Key4& k) {
    auto [i, j, p, q] = k;
    return {Key4{i, j, p, q}, Key4{p, q, i, j}, Key4{j, i, q, p}, Key4{q, p, j, i}};
}

// Extra permutations valid for real orbitals (8-fold total).
std::array<Key4, 4> real_orbit_extra(const Key4& k) {
    auto [i, j, p, q] = k;
    return {Key4{j, i, p, q}, Key4{i, j, q, p}, Key4{q, p, i, j}, Key4{p, q, j, i}};
}

void insert_checked(std::map<Key4, double>& map, const Key4& key, double value, long line) {
    auto it = map.find(key);
    if (it == map.end()) {
        map.emplace(key, value);
        return;
    }
    if (std::abs(it->second - value) > kDuplicateTol) {
        std::ostringstream os;
        os << "conflicting two-body entry (" << key[0] + 1 << ' ' << key[1] + 1 << ' '
           << key[2] + 1 << ' ' << key[3] + 1 << "): " << it->second << " vs " << value;
        throw InconsistentIntegral(os.str() + (line >= 0 ? " at line " + std::to_string(line) : ""));
    }
}

std::string upper(std::string s) {
    for (char& c : s) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
    return s;
}

} // namespace

FermionHamiltonian parse_fcidump(std::istream& in, FcidumpReport* report) {
    FermionHamiltonian h;
    FcidumpReport rep;

    // --- namelist header -------------------------------------------------
    std::string line, header;
    long line_no = 0;
    bool header_done = false;
    while (std::getline(in, line)) {
        ++line_no;
        header += ' ' + line;
        std::string u = upper(line);
        if (u.find("&END") != std::string::npos || u.find("$END") != std::string::npos ||
            u.find('/') != std::string::npos) {
            header_done = true;
            break;
        }
    }
    if (!header_done) throw ParseError("FCIDUMP namelist not terminated (&END or / missing)", line_no);

    std::string uh = upper(header);
    if (uh.find("&FCI") == std::string::npos && uh.find("$FCI") == std::string::npos)
        throw ParseError("missing &FCI namelist header", 1);

    auto scan_int = [&](const std::string& key, bool required) -> long {
        auto pos = uh.find(key);
        if (pos == std::string::npos) {
            if (required) throw ParseError("namelist missing " + key, 1);
            return 0;
        }
        pos = uh.find('=', pos);
        if (pos == std::string::npos) throw ParseError("namelist key " + key + " has no value", 1);
        try {
            return std::stol(uh.substr(pos + 1));
        } catch (const std::exception&) {
            throw ParseError("bad value for " + key, 1);
        }
    };

    h.n_spatial = static_cast<int>(scan_int("NORB", true));
    h.n_electrons = static_cast<int>(scan_int("NELEC", true));
    h.ms2 = static_cast<int>(scan_int("MS2", false));
    if (h.n_spatial <= 0) throw ParseError("NORB must be positive", 1);
    if (h.n_electrons < 0 || h.n_electrons > 2 * h.n_spatial)
        throw ParseError("NELEC out of range for NORB", 1);

    if (auto pos = uh.find("ORBSYM"); pos != std::string::npos) {
        pos = uh.find('=', pos);
        std::istringstream os(uh.substr(pos + 1));
        int v;
        char c;
        while (os >> v) {
            h.orbital_symmetries.push_back(v);
            if (static_cast<int>(h.orbital_symmetries.size()) == h.n_spatial) break;
            os >> c; // separating comma
        }
    }

    // --- integral records ------------------------------------------------
    std::map<Key4, double> two_body;
    bool eightfold_ok = true;

    auto in_range = [&](int idx) { return idx >= 1 && idx <= h.n_spatial; };

    while (std::getline(in, line)) {
        ++line_no;
        std::istringstream ls(line);
        double value;
        long i, j, k, l;
        if (!(ls >> value)) {
            std::string probe;
            std::istringstream(line) >> probe;
            if (probe.empty()) continue; // blank line
            throw ParseError("malformed integral record", line_no);
        }
        if (!(ls >> i >> j >> k >> l)) throw ParseError("malformed integral record", line_no);
        if (!std::isfinite(value)) throw ParseError("non-finite integral value", line_no);

        if (i == 0 && j == 0 && k == 0 && l == 0) {
            h.e_core = value;
        } else if (k == 0 && l == 0) {
            if (!in_range(static_cast<int>(i)) || !in_range(static_cast<int>(j)))
                throw IndexError("one-body index out of [1, NORB] at line " + std::to_string(line_no));
            Key2 key{static_cast<int>(i - 1), static_cast<int>(j - 1)};
            for (const Key2& kk : {key, Key2{key[1], key[0]}}) {
                auto it = h.h1.find(kk);
                if (it == h.h1.end())
                    h.h1.emplace(kk, value);
                else if (std::abs(it->second - value) > kDuplicateTol)
                    throw InconsistentIntegral("conflicting one-body entry at line " + std::to_string(line_no));
            }
        } else {
            for (long idx : {i, j, k, l})
                if (!in_range(static_cast<int>(idx)))
                    throw IndexError("two-body index out of [1, NORB] at line " + std::to_string(line_no));
            Key4 key{static_cast<int>(i - 1), static_cast<int>(j - 1), static_cast<int>(k - 1),
                     static_cast<int>(l - 1)};
            for (const Key4& kk : hermitian_orbit(key)) insert_checked(two_body, kk, value, line_no);
        }
    }
    rep.lines_read = line_no;

    // Full 8-fold replication only if no stored entry disagrees with it.
    std::map<Key4, double> extended = two_body;
    for (const auto& [key, value] : two_body) {
        for (const Key4& kk : real_orbit_extra(key)) {
            auto it = extended.find(kk);
            if (it == extended.end())
                extended.emplace(kk, value);
            else if (std::abs(it->second - value) > kDuplicateTol) {
                eightfold_ok = false;
                break;
            }
        }
        if (!eightfold_ok) break;
    }
    h.h2 = eightfold_ok ? std::move(extended) : std::move(two_body);
    rep.eightfold_symmetry = eightfold_ok;

    // Drop explicit zeros; absent and zero entries are equivalent downstream.
    for (auto it = h.h2.begin(); it != h.h2.end();)
        it = (it->second == 0.0) ? h.h2.erase(it) : std::next(it);
    for (auto it = h.h1.begin(); it != h.h1.end();)
        it = (it->second == 0.0) ? h.h1.erase(it) : std::next(it);

    if (report) *report = rep;
    return h;
}

FermionHamiltonian parse_fcidump(const std::string& text, FcidumpReport* report) {
    std::istringstream is(text);
    return parse_fcidump(is, report);
}

FermionHamiltonian parse_fcidump_file(const std::string& path, FcidumpReport* report) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open FCIDUMP file: " + path);
    return parse_fcidump(in, report);
}

void write_fcidump(const FermionHamiltonian& h, std::ostream& out) {
    out << "&FCI NORB=" << h.n_orbitals() << ",NELEC=" << h.n_electrons << ",MS2=" << h.ms2
        << ",\n ORBSYM=";
    for (int p = 0; p < h.n_orbitals(); ++p)
        out << (p < static_cast<int>(h.orbital_symmetries.size()) ? h.orbital_symmetries[p] : 1)
            << ',';
    out << "\n ISYM=1,\n&END\n";
    out << std::scientific << std::setprecision(16);

    // Closed under 8-fold? Then a single representative per orbit suffices.
    bool eightfold = true;
    for (const auto& [key, value] : h.h2) {
        for (const auto& kk : real_orbit_extra(key)) {
            auto it = h.h2.find(kk);
            if (it == h.h2.end() || std::abs(it->second - value) > 1e-12) {
                eightfold = false;
                break;
            }
        }
        if (!eightfold) break;
    }

    auto orbit_min = [&](const Key4& key) {
        Key4 best = key;
        for (const auto& kk : hermitian_orbit(key)) best = std::min(best, kk);
        if (eightfold)
            for (const auto& kk : real_orbit_extra(key)) best = std::min(best, kk);
        return best;
    };

    for (const auto& [key, value] : h.h2) {
        if (orbit_min(key) != key) continue;
        out << ' ' << value << ' ' << key[0] + 1 << ' ' << key[1] + 1 << ' ' << key[2] + 1 << ' '
            << key[3] + 1 << '\n';
    }
    if (!eightfold) {
        // Explicit zeros for the missing real-orbit images keep the parser
        // from promoting this file back to 8-fold symmetry.
        std::map<Key4, bool> emitted;
        for (const auto& [key, value] : h.h2)
            for (const auto& kk : real_orbit_extra(key))
                if (!h.h2.count(kk) && !emitted.count(kk)) {
                    emitted.emplace(kk, true);
                    out << ' ' << 0.0 << ' ' << kk[0] + 1 << ' ' << kk[1] + 1 << ' ' << kk[2] + 1
                        << ' ' << kk[3] + 1 << '\n';
                }
    }
    for (const auto& [key, value] : h.h1) {
        if (key[0] < key[1]) continue; // lower triangle only
        out << ' ' << value << ' ' << key[0] + 1 << ' ' << key[1] + 1 << " 0 0\n";
    }
    out << ' ' << h.e_core << " 0 0 0 0\n";
}

std::string write_fcidump(const FermionHamiltonian& h) {
    std::ostringstream os;
    write_fcidump(h, os);
    return os.str();
}

} // namespace effham
