// SPDX-License-Identifier: Apache-2.0
#include "alice/clustering.hpp"

#include <algorithm>

namespace alice {

std::string Cluster::key() const
{
	std::string key;
	for (const std::string &m : members) {
		if (!key.empty())
			key += "+";
		key += m;
	}
	return key;
}

bool independent(const std::string &a, const std::string &b, const InstanceTree &tree)
{
	return a != b && !tree.is_ancestor(a, b) && !tree.is_ancestor(b, a);
}

int cluster_pins(const std::vector<std::string> &members, const Design &design)
{
	int pins = 0;
	for (const std::string &path : members) {
		const ModuleDef *target = resolve_target(design, path);
		if (!target)
			throw FlowError(ErrorKind::Internal, "cluster member '" + path + "' does not elaborate");
		pins += pin_count(*target);
	}
	return pins;
}

ClusterSet enumerate_clusters_core(const std::vector<std::string> &candidates, const std::map<std::string, int> &pins,
				   const InstanceTree &tree, int max_io, long max_clusters)
{
	std::vector<std::string> sorted(candidates.begin(), candidates.end());
	std::sort(sorted.begin(), sorted.end());
	sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
	const std::size_t n = sorted.size();

	std::vector<int> pin_of(n, 0);
	for (std::size_t i = 0; i < n; ++i) {
		auto it = pins.find(sorted[i]);
		if (it == pins.end())
			throw FlowError(ErrorKind::Internal, "no pin count for '" + sorted[i] + "'");
		pin_of[i] = it->second;
	}
	std::vector<std::vector<char>> compatible(n, std::vector<char>(n, 0));
	for (std::size_t i = 0; i < n; ++i)
		for (std::size_t j = i + 1; j < n; ++j)
			compatible[i][j] = independent(sorted[i], sorted[j], tree) ? 1 : 0;

	// Validity (pairwise independence + pin budget) is downward-closed, so
	// growing subsets in index order visits every valid subset exactly
	// once; this yields the same closure the pairwise recombination fixed
	// point converges to.
	ClusterSet result;
	std::vector<std::size_t> stack;
	auto emit = [&](int agg) {
		if ((long)result.size() >= max_clusters)
			throw FlowError(ErrorKind::ClusterLimitExceeded,
					"more than " + std::to_string(max_clusters) +
					    " clusters; raise limits.max_clusters or tighten the candidate set");
		Cluster c;
		for (std::size_t idx : stack)
			c.members.push_back(sorted[idx]);
		c.agg_pins = agg;
		result.push_back(std::move(c));
	};
	auto grow = [&](auto &&self, std::size_t from, int agg) -> void {
		for (std::size_t j = from; j < n; ++j) {
			if (agg + pin_of[j] > max_io)
				continue;
			bool ok = true;
			for (std::size_t idx : stack) {
				if (!compatible[idx][j]) {
					ok = false;
					break;
				}
			}
			if (!ok)
				continue;
			stack.push_back(j);
			emit(agg + pin_of[j]);
			self(self, j + 1, agg + pin_of[j]);
			stack.pop_back();
		}
	};
	grow(grow, 0, 0);
	std::sort(result.begin(), result.end());
	return result;
}

ClusterSet enumerate_clusters(const std::vector<std::string> &candidates, const Design &design, const InstanceTree &tree,
			      const FlowParams &params)
{
	if (candidates.empty())
		throw FlowError(ErrorKind::Internal, "enumerate_clusters needs a non-empty candidate set");
	std::map<std::string, int> pins;
	for (const std::string &path : candidates)
		pins[path] = cluster_pins({path}, design);
	return enumerate_clusters_core(candidates, pins, tree, params.max_io, params.max_clusters);
}

} // namespace alice
