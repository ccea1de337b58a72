// SPDX-License-Identifier: Apache-2.0
#include "alice/flow.hpp"

#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <json.hpp>
#include <yaml-cpp/yaml.h>

#include "alice/clustering.hpp"
#include "alice/dataflow.hpp"
#include "alice/emitter.hpp"
#include "alice/fabric_model.hpp"
#include "alice/filtering.hpp"
#include "alice/hdl.hpp"
#include "alice/instance_tree.hpp"
#include "alice/parser.hpp"
#include "alice/rewriter.hpp"
#include "alice/selection.hpp"

namespace alice {

const char *flow_status_name(FlowStatus status)
{
	switch (status) {
	case FlowStatus::Success:
		return "success";
	case FlowStatus::NoCandidates:
		return "no_candidates";
	case FlowStatus::NoSolution:
		return "no_solution";
	}
	return "unknown";
}

int flow_status_exit_code(FlowStatus status)
{
	switch (status) {
	case FlowStatus::Success:
		return 0;
	case FlowStatus::NoCandidates:
		return 2;
	case FlowStatus::NoSolution:
		return 3;
	}
	return 1;
}

namespace {

using Clock = std::chrono::steady_clock;

double ms_since(Clock::time_point start)
{
	return std::chrono::duration<double, std::milli>(Clock::now() - start).count();
}

[[noreturn]] void missing(const std::string &key)
{
	throw FlowError(ErrorKind::ConfigMissingKey, key);
}

int get_int(const YAML::Node &node, const std::string &key)
{
	try {
		return node.as<int>();
	} catch (const YAML::Exception &) {
		throw FlowError(ErrorKind::ConfigType, "key '" + key + "' must be an integer");
	}
}

double get_double(const YAML::Node &node, const std::string &key)
{
	try {
		return node.as<double>();
	} catch (const YAML::Exception &) {
		throw FlowError(ErrorKind::ConfigType, "key '" + key + "' must be a number");
	}
}

std::string get_string(const YAML::Node &node, const std::string &key)
{
	if (!node.IsScalar())
		throw FlowError(ErrorKind::ConfigType, "key '" + key + "' must be a string");
	return node.as<std::string>();
}

std::vector<std::string> get_string_list(const YAML::Node &node, const std::string &key)
{
	if (!node.IsSequence())
		throw FlowError(ErrorKind::ConfigType, "key '" + key + "' must be a list of strings");
	std::vector<std::string> values;
	for (const YAML::Node &item : node) {
		if (!item.IsScalar())
			throw FlowError(ErrorKind::ConfigType, "key '" + key + "' must be a list of strings");
		values.push_back(item.as<std::string>());
	}
	return values;
}

void write_file(const std::filesystem::path &path, const std::string &content)
{
	std::ofstream out(path, std::ios::binary);
	if (!out)
		throw FlowError(ErrorKind::Io, "cannot write '" + path.string() + "'");
	out << content;
}

nlohmann::ordered_json manifest_json(const RedactedDesign &redacted, const std::string &top)
{
	nlohmann::ordered_json doc;
	doc["top"] = top;
	doc["fabrics"] = nlohmann::ordered_json::array();
	for (const FabricManifest &fm : redacted.manifest) {
		nlohmann::ordered_json entry;
		entry["id"] = fm.id;
		entry["module"] = fm.module_name;
		entry["width"] = fm.width;
		entry["insertion_path"] = fm.insertion_path;
		entry["members"] = fm.members;
		entry["gpio_in_width"] = fm.assignment.in_width;
		entry["gpio_out_width"] = fm.assignment.out_width;
		nlohmann::ordered_json pins;
		for (const GpioAssignment::Entry &e : fm.assignment.entries) {
			nlohmann::ordered_json pin;
			pin["bus"] = e.is_input ? "in" : "out";
			pin["base"] = e.base;
			pin["width"] = e.width;
			pins[e.member + "." + e.port] = pin;
		}
		entry["assignment"] = pins;
		doc["fabrics"].push_back(entry);
	}
	return doc;
}

} // namespace

RunConfig load_config(const std::string &path)
{
	std::ifstream probe(path);
	if (!probe)
		throw FlowError(ErrorKind::Io, "cannot open config '" + path + "'");
	probe.close();

	YAML::Node root;
	try {
		root = YAML::LoadFile(path);
	} catch (const YAML::Exception &e) {
		throw FlowError(ErrorKind::ConfigType, std::string("invalid YAML: ") + e.what());
	}
	if (!root.IsMap())
		throw FlowError(ErrorKind::ConfigType, "configuration must be a YAML mapping");

	RunConfig config;
	if (!root["sources"])
		missing("sources");
	config.sources = get_string_list(root["sources"], "sources");
	if (config.sources.empty())
		throw FlowError(ErrorKind::ConfigRange, "sources must not be empty");
	if (!root["top"])
		missing("top");
	config.top = get_string(root["top"], "top");
	if (!root["selected_outputs"])
		missing("selected_outputs");
	config.params.selected_outputs = get_string_list(root["selected_outputs"], "selected_outputs");
	if (!root["max_io"])
		missing("max_io");
	config.params.max_io = get_int(root["max_io"], "max_io");
	if (!root["max_efpgas"])
		missing("max_efpgas");
	config.params.max_efpgas = get_int(root["max_efpgas"], "max_efpgas");

	if (root["fabric"]) {
		const YAML::Node fabric = root["fabric"];
		if (!fabric.IsMap())
			throw FlowError(ErrorKind::ConfigType, "key 'fabric' must be a mapping");
		if (fabric["w_min"])
			config.params.fabric_w_min = get_int(fabric["w_min"], "fabric.w_min");
		if (fabric["w_max"])
			config.params.fabric_w_max = get_int(fabric["w_max"], "fabric.w_max");
		if (fabric["io_per_side_unit"])
			config.params.io_per_side_unit = get_int(fabric["io_per_side_unit"], "fabric.io_per_side_unit");
	}
	if (root["score"]) {
		const YAML::Node score = root["score"];
		if (!score.IsMap())
			throw FlowError(ErrorKind::ConfigType, "key 'score' must be a mapping");
		if (score["alpha"])
			config.params.alpha = get_double(score["alpha"], "score.alpha");
		if (score["beta"])
			config.params.beta = get_double(score["beta"], "score.beta");
		if (score["rank_order"]) {
			std::string order = get_string(score["rank_order"], "score.rank_order");
			if (order == "max")
				config.params.rank_order = RankOrder::Max;
			else if (order == "min")
				config.params.rank_order = RankOrder::Min;
			else
				throw FlowError(ErrorKind::ConfigType, "score.rank_order must be 'max' or 'min'");
		}
	}
	if (root["filter"]) {
		const YAML::Node filter = root["filter"];
		if (!filter.IsMap())
			throw FlowError(ErrorKind::ConfigType, "key 'filter' must be a mapping");
		if (filter["policy"]) {
			std::string policy = get_string(filter["policy"], "filter.policy");
			if (policy == "positive_score")
				config.params.select_policy = SelectPolicy::PositiveScore;
			else if (policy == "top_k")
				config.params.select_policy = SelectPolicy::TopK;
			else
				throw FlowError(ErrorKind::ConfigType, "filter.policy must be 'positive_score' or 'top_k'");
		}
		if (filter["k"])
			config.params.top_k = get_int(filter["k"], "filter.k");
		if (filter["impact"]) {
			std::string impact = get_string(filter["impact"], "filter.impact");
			if (impact == "transitive")
				config.params.impact = ImpactMode::Transitive;
			else if (impact == "direct")
				config.params.impact = ImpactMode::Direct;
			else
				throw FlowError(ErrorKind::ConfigType, "filter.impact must be 'transitive' or 'direct'");
		}
	}
	if (root["limits"]) {
		const YAML::Node limits = root["limits"];
		if (!limits.IsMap())
			throw FlowError(ErrorKind::ConfigType, "key 'limits' must be a mapping");
		if (limits["max_clusters"])
			config.params.max_clusters = get_int(limits["max_clusters"], "limits.max_clusters");
	}

	const FlowParams &p = config.params;
	if (p.max_io < 1)
		throw FlowError(ErrorKind::ConfigRange, "max_io must be >= 1");
	if (p.max_efpgas < 1)
		throw FlowError(ErrorKind::ConfigRange, "max_efpgas must be >= 1");
	if (p.fabric_w_min < 1)
		throw FlowError(ErrorKind::ConfigRange, "fabric.w_min must be >= 1");
	if (p.fabric_w_min > p.fabric_w_max)
		throw FlowError(ErrorKind::ConfigRange, "fabric.w_min must be <= fabric.w_max");
	if (p.io_per_side_unit < 1)
		throw FlowError(ErrorKind::ConfigRange, "fabric.io_per_side_unit must be >= 1");
	if (p.alpha < 0.0 || p.beta < 0.0)
		throw FlowError(ErrorKind::ConfigRange, "score.alpha and score.beta must be >= 0");
	if (p.alpha + p.beta <= 0.0)
		throw FlowError(ErrorKind::ConfigRange, "score.alpha + score.beta must be > 0");
	if (p.select_policy == SelectPolicy::TopK && p.top_k < 1)
		throw FlowError(ErrorKind::ConfigRange, "filter.k must be >= 1 with policy top_k");
	if (p.max_clusters < 1)
		throw FlowError(ErrorKind::ConfigRange, "limits.max_clusters must be >= 1");

	// Source paths are relative to the config file for reproducible runs.
	std::filesystem::path base = std::filesystem::path(path).parent_path();
	for (std::string &source : config.sources) {
		std::filesystem::path sp(source);
		if (sp.is_relative())
			source = (base / sp).string();
	}
	return config;
}

std::string emit_report(const RunReport &report, ReportFormat format)
{
	if (format == ReportFormat::Json) {
		nlohmann::ordered_json doc;
		doc["design"] = report.design;
		doc["instances"] = report.instances;
		doc["status"] = flow_status_name(report.status);
		if (report.filtering) {
			doc["filtering"]["elapsed_ms"] = report.filtering->elapsed_ms;
			doc["filtering"]["candidates"] = report.filtering->candidates;
		}
		if (report.clustering) {
			doc["clustering"]["elapsed_ms"] = report.clustering->elapsed_ms;
			doc["clustering"]["clusters"] = report.clustering->clusters;
		}
		if (report.selection) {
			doc["selection"]["elapsed_ms"] = report.selection->elapsed_ms;
			doc["selection"]["valid_efpgas"] = report.selection->valid_efpgas;
			doc["selection"]["solutions"] = report.selection->solutions;
			doc["selection"]["fabric_sizes"] = report.selection->fabric_sizes;
			doc["selection"]["redacted_instances"] = report.selection->redacted_instances;
		}
		return doc.dump(2) + "\n";
	}

	// One row in Table-2 column order; '-' marks phases never reached.
	auto fmt_ms = [](double ms) {
		std::ostringstream s;
		s << std::fixed;
		s.precision(1);
		s << ms;
		return s.str();
	};
	std::vector<std::pair<std::string, std::string>> cols = {
	    {"Design", report.design},
	    {"Inst", std::to_string(report.instances)},
	    {"Filter(ms)", report.filtering ? fmt_ms(report.filtering->elapsed_ms) : "-"},
	    {"|R|", report.filtering ? std::to_string(report.filtering->candidates) : "-"},
	    {"Cluster(ms)", report.clustering ? fmt_ms(report.clustering->elapsed_ms) : "-"},
	    {"|C|", report.clustering ? std::to_string(report.clustering->clusters) : "-"},
	    {"Select(ms)", report.selection ? fmt_ms(report.selection->elapsed_ms) : "-"},
	    {"Valid", report.selection ? std::to_string(report.selection->valid_efpgas) : "-"},
	    {"|S|", report.selection ? std::to_string(report.selection->solutions) : "-"},
	    {"Size", "-"},
	    {"Redacted", "-"},
	    {"Status", flow_status_name(report.status)},
	};
	if (report.selection && !report.selection->fabric_sizes.empty()) {
		std::string sizes;
		for (std::size_t i = 0; i < report.selection->fabric_sizes.size(); ++i) {
			if (i)
				sizes += ",";
			sizes += report.selection->fabric_sizes[i];
		}
		cols[9].second = sizes;
		cols[10].second = std::to_string(report.selection->redacted_instances);
	}
	std::ostringstream header, row;
	for (const auto &[name, value] : cols) {
		std::size_t width = std::max(name.size(), value.size()) + 2;
		header << name << std::string(width - name.size(), ' ');
		row << value << std::string(width - value.size(), ' ');
	}
	std::string h = header.str(), v = row.str();
	while (!h.empty() && h.back() == ' ')
		h.pop_back();
	while (!v.empty() && v.back() == ' ')
		v.pop_back();
	return h + "\n" + v + "\n";
}

RunReport run_flow(const RunConfig &config, const RunOptions &options)
{
	RunReport report;
	report.design = config.top;

	std::filesystem::path out_dir(options.out_dir);
	std::error_code ec;
	std::filesystem::create_directories(out_dir, ec);
	if (ec)
		throw FlowError(ErrorKind::Io, "cannot create output directory '" + options.out_dir + "'");

	auto log = [&](const std::string &line) {
		if (!options.quiet)
			std::cout << line << "\n";
	};
	auto finish = [&](FlowStatus status) -> RunReport {
		report.status = status;
		write_file(out_dir / "report.json", emit_report(report, ReportFormat::Json));
		write_file(out_dir / "report.txt", emit_report(report, ReportFormat::Table));
		return report;
	};

	// Parse + elaborate.
	std::vector<SourceFile> files;
	for (const std::string &path : config.sources) {
		std::ifstream in(path, std::ios::binary);
		if (!in)
			throw FlowError(ErrorKind::Io, "cannot open source '" + path + "'");
		std::ostringstream text;
		text << in.rdbuf();
		files.push_back({path, text.str()});
	}
	Design design = parse_design_files(files, config.top);
	InstanceTree tree = build_instance_tree(design);
	report.instances = (int)tree.size();
	log("[parse] " + std::to_string(design.modules.size()) + " modules, " + std::to_string(tree.size()) + " instances");

	// Module filtering (the timer includes dataflow analysis).
	Clock::time_point t0 = Clock::now();
	DataflowGraph graph = build_dataflow_graph(design, tree);
	for (const Diagnostic &d : graph.diagnostics.items)
		std::cerr << d.str() << "\n";
	if (options.dump_dataflow)
		write_file(out_dir / "dataflow.dot", graph.to_dot());

	std::vector<std::string> candidates;
	try {
		ScoreMap scores = score_instances(graph, design, config.params.selected_outputs, config.params.impact);
		std::vector<std::string> functional = rank_and_select(scores, config.params.select_policy, config.params.top_k);
		candidates = structural_filter(functional, design, tree, config.params);
	} catch (const FlowError &e) {
		if (e.kind() != ErrorKind::EmptyCandidateSet)
			throw;
		report.filtering = RunReport::Filtering{ms_since(t0), 0};
		std::cerr << "[filtering] " << e.what() << "\n";
		log("[filtering] |R| = 0");
		return finish(FlowStatus::NoCandidates);
	}
	report.filtering = RunReport::Filtering{ms_since(t0), (int)candidates.size()};
	log("[filtering] |R| = " + std::to_string(candidates.size()));

	// Cluster identification.
	t0 = Clock::now();
	ClusterSet clusters = enumerate_clusters(candidates, design, tree, config.params);
	report.clustering = RunReport::Clustering{ms_since(t0), (int)clusters.size()};
	log("[clustering] |C| = " + std::to_string(clusters.size()));

	// eFPGA characterization + selection.
	t0 = Clock::now();
	ExternalReport overrides;
	if (!options.characterizer_report.empty())
		overrides = load_external_report(options.characterizer_report);
	Diagnostics char_diags;
	std::vector<FabricImpl> fabrics = characterize_clusters(clusters, design, config.params, overrides, char_diags);
	for (const Diagnostic &d : char_diags.items)
		std::cerr << d.str() << "\n";
	std::vector<Solution> solutions =
	    enumerate_solutions(fabrics, config.params.max_efpgas, config.params.alpha, config.params.beta);

	Solution best;
	try {
		best = rank_solutions(solutions, config.params.rank_order);
	} catch (const FlowError &e) {
		if (e.kind() != ErrorKind::NoSolution)
			throw;
		report.selection = RunReport::Selection{ms_since(t0), (int)fabrics.size(), (long)solutions.size(), {}, 0};
		std::cerr << "[selection] " << e.what() << "\n";
		return finish(FlowStatus::NoSolution);
	}

	RunReport::Selection selection;
	selection.valid_efpgas = (int)fabrics.size();
	selection.solutions = (long)solutions.size();
	for (const FabricImpl &f : best.fabrics)
		selection.fabric_sizes.push_back(f.size_label());
	selection.redacted_instances = best.redacted_instances();
	selection.elapsed_ms = ms_since(t0);
	report.selection = selection;
	log("[selection] valid = " + std::to_string(fabrics.size()) + ", |S| = " + std::to_string(solutions.size()) +
	    ", redacted = " + std::to_string(selection.redacted_instances));

	// Top ASIC regeneration.
	RedactedDesign redacted = redact_design(design, best, tree);
	write_file(out_dir / "redacted_top.v", emit_verilog(redacted.design));
	for (const ModuleDef &wrapper : redacted.wrappers) {
		const FabricManifest &fm = redacted.manifest[&wrapper - redacted.wrappers.data()];
		write_file(out_dir / ("efpga_" + std::to_string(fm.id) + "_stub.v"), emit_verilog(wrapper));
	}
	write_file(out_dir / "manifest.json", manifest_json(redacted, design.top).dump(2) + "\n");
	log("[rewriter] wrote " + std::to_string(redacted.wrappers.size()) + " wrapper stub(s) to " + options.out_dir);

	return finish(FlowStatus::Success);
}

} // namespace alice
