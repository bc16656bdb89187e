#pragma once

#include <string>

#include "vhc/residual.hpp"

namespace vhc {

enum class FieldFormat { Csv, VtkLegacyAscii };

// Deterministic text export (x3 slowest); 17 significant digits.
void export_field(const VorticityGrid3D& grid, const std::string& path,
                  FieldFormat format);

// Reads a CSV produced by export_field back into samples (round-trip checks).
VorticityGrid3D read_field_csv(const std::string& path);

}  // namespace vhc
