#pragma once

#include <string>

#include "tma/milp_model.hpp"

namespace tma {

enum class ExportFormat { LpText, MpsText };

// Throws ValidationError for an unknown tag.
ExportFormat export_format_from_string(const std::string& tag);

// Renders the instance as CPLEX LP or free MPS text. Row and column order
// follow declaration order, so equal instances produce equal bytes.
std::string export_milp(const MilpInstance& inst, ExportFormat format);

} // namespace tma
