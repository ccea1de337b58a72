// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <optional>
#include <string>
#include <vector>

#include "alice/params.hpp"

namespace alice {

enum class FlowStatus { Success, NoCandidates, NoSolution };

const char *flow_status_name(FlowStatus status);
int flow_status_exit_code(FlowStatus status);

/// Everything a run reads: flow parameters plus the file inputs from the
/// YAML configuration. Source paths are resolved relative to the config
/// file's directory.
struct RunConfig {
	FlowParams params;
	std::vector<std::string> sources;
	std::string top;
};

/// Table-2-shaped run summary. Phase blocks are absent (nullopt) when the
/// flow stopped before reaching them.
struct RunReport {
	struct Filtering {
		double elapsed_ms = 0.0;
		int candidates = 0; // |R|
	};
	struct Clustering {
		double elapsed_ms = 0.0;
		int clusters = 0; // |C|
	};
	struct Selection {
		double elapsed_ms = 0.0;
		int valid_efpgas = 0;
		long solutions = 0; // |S|
		std::vector<std::string> fabric_sizes;
		int redacted_instances = 0;
	};

	std::string design;
	int instances = 0;
	FlowStatus status = FlowStatus::Success;
	std::optional<Filtering> filtering;
	std::optional<Clustering> clustering;
	std::optional<Selection> selection;
};

enum class ReportFormat { Json, Table };

/// Parse the YAML configuration. Required keys: sources, top,
/// selected_outputs, max_io, max_efpgas. Optional blocks: fabric
/// {w_min, w_max, io_per_side_unit}, score {alpha, beta, rank_order},
/// filter {policy, k, impact}, limits {max_clusters}.
/// Throws ConfigMissingKey / ConfigType / ConfigRange.
RunConfig load_config(const std::string &path);

struct RunOptions {
	std::string out_dir = "alice_out";
	std::string characterizer_report; // optional JSON override file
	bool dump_dataflow = false;
	bool quiet = false; // suppress progress lines on stdout
};

/// Execute the full flow: parse -> dataflow -> filtering -> clustering ->
/// characterization -> selection -> rewriting, writing redacted_top.v,
/// efpga_<id>_stub.v, manifest.json, report.json and report.txt into
/// options.out_dir. EmptyCandidateSet and NoSolution become the
/// corresponding statuses with a partial report; other errors propagate.
RunReport run_flow(const RunConfig &config, const RunOptions &options);

/// Render a report. Json uses stable key order; Table prints the
/// phase-by-phase row (absent cells as '-').
std::string emit_report(const RunReport &report, ReportFormat format);

} // namespace alice
