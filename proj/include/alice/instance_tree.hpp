// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <map>
#include <string>
#include <vector>

#include "alice/hdl.hpp"

namespace alice {

/// Elaborated hierarchy of module instances under the top module. The root
/// node's path is the top module's name; child paths append ".<instance>".
struct InstanceTree {
	struct Node {
		std::string path;
		std::string instance_name; // root: top module name
		std::string target;        // module definition name
		int parent = -1;
		std::vector<int> children;
	};

	std::vector<Node> nodes; // index 0 is the root, preorder
	std::map<std::string, int> index;

	const Node *find(const std::string &path) const;
	bool contains(const std::string &path) const { return index.count(path) != 0; }
	std::size_t size() const { return nodes.size(); }

	/// True iff `ancestor` strictly contains `descendant`.
	bool is_ancestor(const std::string &ancestor, const std::string &descendant) const;

	/// All non-root instance paths, sorted.
	std::vector<std::string> instance_paths() const;
};

/// Elaborate the design's instance tree. Throws RecursionDetected on an
/// instantiation cycle and UnresolvedModule on a missing target.
InstanceTree build_instance_tree(const Design &design);

} // namespace alice
