// SPDX-License-Identifier: Apache-2.0
// Test-only brute-force oracles. Each one re-derives its answer from the
// contract with a deliberately different algorithm than the library path it
// checks (edge-list fixpoints, powerset filters, linear scans).
#pragma once

#include <map>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "alice/clustering.hpp"
#include "alice/fabric_model.hpp"
#include "alice/hdl.hpp"
#include "alice/instance_tree.hpp"
#include "alice/params.hpp"
#include "alice/selection.hpp"

namespace alice::testing {

/// Reachability oracle: rebuilds the dependence edge list with plain nested
/// walks and runs an edge-list fixpoint instead of a BFS.
std::vector<std::string> naive_affecting(const Design &design, const InstanceTree &tree, const std::string &output);

/// Powerset cluster oracle: filters all 2^n - 1 subsets by pairwise
/// independence and the pin budget.
std::vector<std::vector<std::string>> brute_force_clusters(const std::vector<std::string> &candidates,
							   const std::map<std::string, int> &pins, const InstanceTree &tree,
							   int max_io);

/// Powerset solution oracle with per-subset score sums.
struct NaiveSolution {
	std::vector<std::size_t> indices; // into the fabric list, ascending
	double score = 0.0;
};
std::vector<NaiveSolution> brute_force_solutions(const std::vector<FabricImpl> &fabrics, int max_efpgas, double alpha,
						 double beta);

/// Arg-best over the naive solution set under the documented tie rule.
NaiveSolution naive_best(const std::vector<NaiveSolution> &solutions, const std::vector<FabricImpl> &fabrics,
			 RankOrder order);

/// Linear-scan sizing oracle: first width in range satisfying both capacity
/// constraints; w = 0 encodes infeasibility.
int scan_fabric_width(const ResourceEstimate &est, const FlowParams &params);

/// Random instance forest over a root, up to `max_nodes` non-root nodes.
InstanceTree random_tree(std::mt19937 &rng, int max_nodes);

/// Canonical form for set-equality checks.
std::set<std::string> cluster_keys(const ClusterSet &clusters);
std::set<std::string> cluster_keys(const std::vector<std::vector<std::string>> &member_sets);

} // namespace alice::testing
