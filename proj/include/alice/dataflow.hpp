// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <map>
#include <set>
#include <string>
#include <vector>

#include "alice/hdl.hpp"
#include "alice/instance_tree.hpp"
#include "alice/params.hpp"

namespace alice {

/// Design-wide "may-affect" graph. A node is a signal endpoint: the pair
/// (instance path, signal name in that module's namespace). Ports and
/// internal nets of a module instance share the node namespace, so a
/// connection edge and the module-internal edges meet on the same node.
struct DataflowGraph {
	struct NodeRef {
		std::string path;
		std::string signal;
	};

	std::vector<NodeRef> nodes;
	std::map<std::pair<std::string, std::string>, int> index;
	std::vector<std::vector<int>> succ;
	std::vector<std::vector<int>> pred;

	// Per non-root instance: node ids of its output (and inout) ports.
	std::map<std::string, std::vector<int>> instance_outputs;
	// Non-root instance paths, sorted.
	std::vector<std::string> instances;
	std::string root_path;

	Diagnostics diagnostics; // dangling-net warnings

	int find_node(const std::string &path, const std::string &signal) const;
	bool has_edge(const std::string &from_path, const std::string &from_signal, const std::string &to_path,
		      const std::string &to_signal) const;
	int add_node(const std::string &path, const std::string &signal);
	void add_edge(int from, int to);

	/// DOT rendering for the --dump-dataflow debug flag.
	std::string to_dot() const;
};

/// Build the dataflow graph over the elaborated tree. The edge rules:
///   (a) within each module context, assign reads -> assigned lhs;
///   (b) every signal read anywhere in a process -> every signal it assigns;
///   (c) instance input port -> every output port of the instance;
///   (d) connection expression reads -> input port; output port -> connected
///       lvalue targets.
/// Clock-like signals (edge-triggered sensitivity, propagated down through
/// connections) contribute no dependence edges. Nets that are read but never
/// driven produce warning diagnostics on the returned graph.
DataflowGraph build_dataflow_graph(const Design &design, const InstanceTree &tree);

/// Instances whose output ports reach the named top-level output.
/// Transitive mode follows the full graph; Direct mode stops at the first
/// instance-output boundary on each backward path. Sorted result.
/// Throws UnknownOutput when `output` is not a top-level output port.
std::vector<std::string> affecting_instances(const DataflowGraph &graph, const Design &design, const std::string &output,
					     ImpactMode impact = ImpactMode::Transitive);

} // namespace alice
