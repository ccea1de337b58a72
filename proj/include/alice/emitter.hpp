// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string>

#include "alice/hdl.hpp"

namespace alice {

/// Regenerate Verilog text. Deterministic: the same Design always yields
/// byte-identical output, and the output re-parses to a structurally
/// identical Design.
std::string emit_verilog(const Design &design);
std::string emit_verilog(const ModuleDef &module);

} // namespace alice
