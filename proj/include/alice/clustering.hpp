// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <map>
#include <string>
#include <vector>

#include "alice/hdl.hpp"
#include "alice/instance_tree.hpp"
#include "alice/params.hpp"

namespace alice {

/// A set of pairwise-independent instances destined for one eFPGA.
struct Cluster {
	std::vector<std::string> members; // sorted, unique
	int agg_pins = 0;

	/// Canonical identity: sorted member paths joined by '+'.
	std::string key() const;

	bool operator==(const Cluster &other) const { return members == other.members; }
	bool operator<(const Cluster &other) const { return members < other.members; }
};

using ClusterSet = std::vector<Cluster>; // sorted by member set, no duplicates

/// True iff a != b and neither instance contains the other in the tree.
bool independent(const std::string &a, const std::string &b, const InstanceTree &tree);

/// Aggregate pin count: the sum of each member's target-module pin count.
/// Two instances of one module count twice; no I/O sharing is assumed.
int cluster_pins(const std::vector<std::string> &members, const Design &design);

/// Every non-empty subset of `candidates` whose members are pairwise
/// independent and whose aggregate pins fit params.max_io. Validity is
/// downward-closed, so ordered subset growth reaches exactly the closure the
/// pairwise recombination fixed point converges to. Aborts with
/// ClusterLimitExceeded beyond params.max_clusters.
ClusterSet enumerate_clusters(const std::vector<std::string> &candidates, const Design &design, const InstanceTree &tree,
			      const FlowParams &params);

/// Core used by the randomized suites: explicit pin map instead of a Design.
ClusterSet enumerate_clusters_core(const std::vector<std::string> &candidates, const std::map<std::string, int> &pins,
				   const InstanceTree &tree, int max_io, long max_clusters);

} // namespace alice
