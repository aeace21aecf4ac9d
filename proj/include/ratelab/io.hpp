#pragma once

#include <filesystem>
#include <string>

#include "ratelab/entangling.hpp"
#include "ratelab/hermitian.hpp"

namespace ratelab {

// Matrix files: {"dim": n, "re": [[...]], "im": [[...]]}, row-major;
// Hermiticity is validated on load.
// State files:  {"dims": [dA, dB], "re": [...], "im": [...]}, flat arrays
// indexed j_a * dB + j_b.

HermitianOperator load_hermitian(const std::filesystem::path& path);
void save_hermitian(const HermitianOperator& m, const std::filesystem::path& path);

DensityMatrix load_density(const std::filesystem::path& path);

BipartitePureState load_state(const std::filesystem::path& path);
void save_state(const BipartitePureState& psi, const std::filesystem::path& path);

/// 12 significant digits, the fixed width used by every CSV emitter.
std::string format_number(double value);

}  // namespace ratelab
