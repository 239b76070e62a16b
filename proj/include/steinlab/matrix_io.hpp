#pragma once

#include <string>

#include "steinlab/types.hpp"

namespace steinlab {

// Matrix exchange format: {"dim": n, "re": [[...]], "im": [[...]]}, row-major.
// Reading validates Hermiticity (and state invariants for densities).

HermitianOperator read_hermitian(const std::string& path);
DensityOperator read_density(const std::string& path);
void write_hermitian(const std::string& path, const HermitianOperator& op);

HermitianOperator hermitian_from_json_text(const std::string& text);
std::string hermitian_to_json_text(const HermitianOperator& op);

}  // namespace steinlab
