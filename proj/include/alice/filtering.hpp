// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <map>
#include <string>
#include <vector>

#include "alice/dataflow.hpp"
#include "alice/hdl.hpp"
#include "alice/params.hpp"

namespace alice {

/// instance path -> number of selected outputs it affects. Domain is every
/// non-root instance in the tree.
using ScoreMap = std::map<std::string, int>;

/// S[m] = |{o in outputs : m affects o}|.
ScoreMap score_instances(const DataflowGraph &graph, const Design &design, const std::vector<std::string> &outputs,
			 ImpactMode impact = ImpactMode::Transitive);

/// Functional selection. PositiveScore keeps every instance with a nonzero
/// score; TopK keeps the k best by (score desc, path asc) and keeps every
/// instance tied with the boundary score. Sorted result.
std::vector<std::string> rank_and_select(const ScoreMap &scores, SelectPolicy policy, int k = 1);

/// Structural eFPGA-compatibility check: keeps candidates whose target
/// module pin count is within params.max_io (inclusive). Ancestor/descendant
/// pairs are both kept; hierarchy exclusion belongs to clustering.
/// Throws EmptyCandidateSet when nothing survives.
std::vector<std::string> structural_filter(const std::vector<std::string> &candidates, const Design &design,
					   const InstanceTree &tree, const FlowParams &params);

} // namespace alice
