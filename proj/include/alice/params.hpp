// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string>
#include <vector>

namespace alice {

enum class SelectPolicy { PositiveScore, TopK };
enum class RankOrder { Max, Min };
enum class ImpactMode { Transitive, Direct };

/// All flow knobs from the YAML configuration (file lists live alongside in
/// RunConfig). Defaults mirror load_config's documented defaults.
struct FlowParams {
	int max_io = 64;
	int max_efpgas = 1;
	int fabric_w_min = 2;
	int fabric_w_max = 20;
	int io_per_side_unit = 16;
	double alpha = 1.0;
	double beta = 1.0;
	std::vector<std::string> selected_outputs;
	SelectPolicy select_policy = SelectPolicy::PositiveScore;
	int top_k = 1;
	RankOrder rank_order = RankOrder::Max;
	ImpactMode impact = ImpactMode::Transitive;
	long max_clusters = 100000;
};

} // namespace alice
