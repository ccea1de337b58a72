// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <map>
#include <string>
#include <vector>

#include "alice/hdl.hpp"
#include "alice/instance_tree.hpp"
#include "alice/selection.hpp"

namespace alice {

/// Where each pin of each member module landed on a fabric's GPIO buses.
struct GpioAssignment {
	struct Entry {
		std::string member; // instance path
		std::string port;
		int width = 0;
		int base = 0; // first index on the bus
		bool is_input = false;
	};

	std::vector<Entry> entries; // inputs first, both bus orders by member/port
	int in_width = 0;
	int out_width = 0;

	int total_pins() const { return in_width + out_width; }
};

/// Deterministic pin map for a fabric: members in sorted order, ports in
/// declaration order, consecutive indices per port. Rejects members with
/// inout ports (the wrapper has no bidirectional bus).
GpioAssignment build_gpio_assignment(const Cluster &cluster, const Design &design);

/// Black-box wrapper stub for one fabric: module efpga_<w>x<w>_<id> with
/// gpio_in/gpio_out buses sized to the assignment and the four config-chain
/// ports {cfg_clk, cfg_en, cfg_in, cfg_out}. Throws AssignmentOverflow when
/// the assignment exceeds the fabric's I/O capacity.
ModuleDef generate_efpga_wrapper(const FabricImpl &fabric, const GpioAssignment &assignment, int id);

/// Lowest common ancestor of the members' parent instances; a single-member
/// cluster yields that member's parent.
std::string insertion_point(const Cluster &cluster, const InstanceTree &tree);

struct FabricManifest {
	int id = 0;
	std::string module_name;
	int width = 0;
	std::string insertion_path;
	std::vector<std::string> members;
	GpioAssignment assignment;
};

struct RedactedDesign {
	Design design;                   // rewritten design including wrapper stubs
	std::vector<ModuleDef> wrappers; // one stub per fabric, id order
	std::vector<FabricManifest> manifest;
};

/// Remove every redacted instance, instantiate one wrapper per fabric at its
/// insertion point, route member pins to the GPIO buses through freshly
/// added alice_r<id>_* ports on intermediate modules, and expose a single
/// config chain {cfg_clk, cfg_en, cfg_in, cfg_out} at the top. Module
/// definitions with untouched instances elsewhere are cloned before editing,
/// so non-redacted instances keep their behavior.
RedactedDesign redact_design(const Design &design, const Solution &solution, const InstanceTree &tree);

} // namespace alice
