// SPDX-License-Identifier: Apache-2.0
#include "alice/filtering.hpp"

#include <algorithm>

#include "alice/instance_tree.hpp"

namespace alice {

ScoreMap score_instances(const DataflowGraph &graph, const Design &design, const std::vector<std::string> &outputs,
			 ImpactMode impact)
{
	ScoreMap scores;
	for (const std::string &path : graph.instances)
		scores[path] = 0;
	for (const std::string &output : outputs)
		for (const std::string &path : affecting_instances(graph, design, output, impact))
			scores[path] += 1;
	return scores;
}

std::vector<std::string> rank_and_select(const ScoreMap &scores, SelectPolicy policy, int k)
{
	std::vector<std::string> selected;
	if (policy == SelectPolicy::PositiveScore) {
		for (const auto &[path, score] : scores)
			if (score >= 1)
				selected.push_back(path);
		return selected;
	}

	std::vector<std::pair<std::string, int>> ranked(scores.begin(), scores.end());
	std::sort(ranked.begin(), ranked.end(), [](const auto &a, const auto &b) {
		if (a.second != b.second)
			return a.second > b.second;
		return a.first < b.first;
	});
	if (k <= 0 || ranked.empty())
		return selected;
	std::size_t cut = std::min<std::size_t>((std::size_t)k, ranked.size());
	// Keep everything tied with the boundary score.
	int boundary = ranked[cut - 1].second;
	for (const auto &[path, score] : ranked)
		if (score >= boundary)
			selected.push_back(path);
	std::sort(selected.begin(), selected.end());
	return selected;
}

std::vector<std::string> structural_filter(const std::vector<std::string> &candidates, const Design &design,
					   const InstanceTree &tree, const FlowParams &params)
{
	std::vector<std::string> result;
	for (const std::string &path : candidates) {
		const InstanceTree::Node *node = tree.find(path);
		if (!node)
			throw FlowError(ErrorKind::Internal, "candidate '" + path + "' is not in the instance tree");
		const ModuleDef *target = design.find_module(node->target);
		if (!target)
			throw FlowError(ErrorKind::UnresolvedModule, node->target);
		if (pin_count(*target) <= params.max_io)
			result.push_back(path);
	}
	std::sort(result.begin(), result.end());
	if (result.empty())
		throw FlowError(ErrorKind::EmptyCandidateSet,
				"no candidate fits " + std::to_string(params.max_io) +
				    " I/O pins; the smallest candidate already exceeds the eFPGA I/O budget");
	return result;
}

} // namespace alice
