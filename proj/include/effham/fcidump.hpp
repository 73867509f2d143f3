#pragma once

#include <iosfwd>
#include <string>

#include "effham/fermion_hamiltonian.hpp"

namespace effham {

struct FcidumpReport {
    bool eightfold_symmetry = false; // full real-orbital replication applied
    bool assumed_spatial = true;     // NORB interpreted as spatial orbitals
    long lines_read = 0;
};

/// Parse an FCIDUMP stream: namelist header (&FCI ... &END / /) with NORB and
/// NELEC, then "value i j k l" records with 1-based indices. Two-body records
/// fill h2 as chemist (ij|kl), k=l=0 records fill h1, the all-zero record
/// sets e_core. Indices are converted to 0-based here and nowhere else.
///
/// Hermitian (4-fold) permutational symmetry is always replicated; the full
/// 8-fold real-orbital group is applied only when no stored entry would be
/// overwritten by a value differing by more than 1e-10.
FermionHamiltonian parse_fcidump(std::istream& in, FcidumpReport* report = nullptr);
FermionHamiltonian parse_fcidump(const std::string& text, FcidumpReport* report = nullptr);
FermionHamiltonian parse_fcidump_file(const std::string& path, FcidumpReport* report = nullptr);

/// Writes one representative entry per Hermitian symmetry orbit, 17
/// significant digits. parse(write(h)) == h on the coefficient maps.
void write_fcidump(const FermionHamiltonian& h, std::ostream& out);
std::string write_fcidump(const FermionHamiltonian& h);

} // namespace effham
