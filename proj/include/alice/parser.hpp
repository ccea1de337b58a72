// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string>
#include <vector>

#include "alice/hdl.hpp"

namespace alice {

struct SourceFile {
	std::string name;
	std::string text;
};

/// Parse one source text into a validated Design. The supported subset is
/// module/endmodule with ANSI or non-ANSI port lists (ranges allowed),
/// wire/reg declarations, continuous assigns, always blocks with
/// blocking/nonblocking assigns, if/else and case, and module instantiation
/// with named or positional connections. Everything else (generate,
/// parameters, functions, tasks, initial, primitives, ...) is a hard
/// UnsupportedConstruct error.
///
/// When `top` is empty the unique uninstantiated module is selected; an
/// ambiguous choice is an error.
///
/// `allow_reserved` admits alice_-prefixed identifiers; user input keeps the
/// prefix reserved so redaction can generate collision-free names, while
/// regenerated designs (which contain such names) still re-parse.
///
/// Throws FlowError with kinds Syntax, UnsupportedConstruct,
/// UnresolvedModule, WidthMismatch, ReservedIdentifier, RecursionDetected.
Design parse_design(const std::string &source, const std::string &file_name = "<input>", const std::string &top = "",
		    bool allow_reserved = false);

/// Multi-file variant: parses every file, merges the module lists, and
/// validates the combined design.
Design parse_design_files(const std::vector<SourceFile> &files, const std::string &top = "", bool allow_reserved = false);

/// Cross-module validation applied by parse_design; exposed for
/// programmatically built designs. Normalizes positional connections to
/// named form and checks every Design/ModuleDef invariant.
void link_design(Design &design);

} // namespace alice
