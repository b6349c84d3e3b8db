#pragma once

#include <string>

#include "smb/basis.hpp"
#include "smb/config.hpp"
#include "smb/hamiltonian.hpp"

namespace smb {

// Complex general Matrix Market text, deterministic ordering (column-major,
// row within column), 17 significant digits.
std::string to_matrix_market(const CplxSparse& m);

void write_file(const std::string& path, const std::string& content);

// Structured JSON sidecar describing one exported matrix: config echo, basis
// dimensions, index layout, norms, and a content hash of the matrix text.
std::string matrix_metadata(const RunConfig& c, const AssembledOperator& op,
                            const std::string& matrix_text,
                            const std::string& which);

// One line per angular basis state, lexicographic order.
std::string basis_table(const BasisIndex& basis);

// Every catalog operator with its footprint, as structured JSON text.
std::string catalog_table(int n_rods);

}  // namespace smb
