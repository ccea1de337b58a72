// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string>
#include <vector>

#include "alice/fabric_model.hpp"
#include "alice/params.hpp"

namespace alice {

/// Utilization-slack score of one fabric:
///   alpha * (max_io_util - io_util) / max_io_util
/// + beta  * (max_clb_util - clb_util) / max_clb_util
/// where the maxima range over all valid fabrics of the run. A zero maximum
/// contributes a zero term (every fabric sits at that maximum).
double fabric_score(const FabricImpl &fabric, double max_io_util, double max_clb_util, double alpha, double beta);

/// A set of fabrics whose redacted instance sets do not overlap (no shared
/// member and no member containing a member of another fabric).
struct Solution {
	std::vector<FabricImpl> fabrics; // sorted by cluster key
	double score = 0.0;

	int redacted_instances() const;
	std::string key() const; // fabric cluster keys joined by '|'
};

/// Every non-empty subset of F with at most max_efpgas fabrics and pairwise
/// non-overlapping clusters, scored with Eq-style utilization slack summed
/// over members. Sorted by key.
std::vector<Solution> enumerate_solutions(const std::vector<FabricImpl> &fabrics, int max_efpgas, double alpha = 1.0,
					  double beta = 1.0);

/// Best solution under the rank order; ties broken by more redacted
/// instances, then fewer fabrics, then smallest key. Throws NoSolution on an
/// empty set.
Solution rank_solutions(const std::vector<Solution> &solutions, RankOrder order);

/// True iff the two clusters may coexist in one solution.
bool clusters_disjoint(const Cluster &a, const Cluster &b);

} // namespace alice
