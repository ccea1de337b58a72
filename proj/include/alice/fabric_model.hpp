// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "alice/clustering.hpp"
#include "alice/hdl.hpp"
#include "alice/params.hpp"

namespace alice {

/// Analytic resource estimate for one cluster, in 4-input LUT equivalents
/// and flip-flops. io_pins equals the cluster's aggregate pin count.
struct ResourceEstimate {
	int io_pins = 0;
	int luts = 0;
	int ffs = 0;
};

/// A characterized eFPGA candidate: a w x w CLB array with
/// io_per_side_unit * w usable I/O pins and 4 LUT+FF logic elements per CLB.
struct FabricImpl {
	Cluster cluster;
	int w = 0;
	int io_used = 0;
	int io_capacity = 0;
	int clb_used = 0;
	int clb_capacity = 0;
	double io_util = 0.0;
	double clb_util = 0.0;

	std::string size_label() const; // "4x4"
};

struct InfeasibleSizing {
	enum class Binding { Io, Logic };
	Binding binding = Binding::Io;

	const char *binding_name() const { return binding == Binding::Io ? "io" : "logic"; }
};

using SizeResult = std::variant<FabricImpl, InfeasibleSizing>;

/// I/O capacity of a w x w fabric: unit * w (default unit 16, anchored at
/// 64 pins for a 4x4 array).
int io_capacity(int w, int io_per_side_unit = 16);

/// Deterministic per-construct cost sum over the cluster's target modules,
/// including their instantiated submodules. Throws UnsupportedExpression for
/// operators outside the cost table (division, modulo, variable shifts).
ResourceEstimate estimate_resources(const Cluster &cluster, const Design &design);

/// Per-module subtree estimate (no pin term); exposed for tests.
void estimate_module(const ModuleDef &module, const Design &design, int &luts, int &ffs);

/// Smallest admissible fabric for the estimate: minimal w in
/// [fabric_w_min, fabric_w_max] with io_capacity(w) >= io_pins and
/// 4*w^2 >= max(luts, ffs). Returns InfeasibleSizing naming the binding
/// constraint when no width fits.
SizeResult size_fabric(const ResourceEstimate &est, const FlowParams &params);

/// One external characterizer entry, keyed by cluster key.
struct ExternalFabricReport {
	int w = 0;
	int io_used = 0;
	int clb_used = 0;
	bool valid = true;
};

using ExternalReport = std::map<std::string, ExternalFabricReport>;

/// Load a characterizer report: a JSON object mapping cluster keys to
/// {"w": int, "io_used": int, "clb_used": int, "valid": bool}.
/// Throws ReportParse / ReportSchema.
ExternalReport load_external_report(const std::string &path);

/// Characterize every cluster: analytic estimate + sizing, with external
/// report entries overriding matching clusters (still re-checked against the
/// fabric range and capacities; rejected overrides fall back to the analytic
/// result with a warning). Returns the valid fabric list, sorted by cluster
/// key. Unmatched report entries produce warnings.
std::vector<FabricImpl> characterize_clusters(const ClusterSet &clusters, const Design &design, const FlowParams &params,
					      const ExternalReport &overrides, Diagnostics &diagnostics);

} // namespace alice
