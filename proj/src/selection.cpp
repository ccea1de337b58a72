// SPDX-License-Identifier: Apache-2.0
#include "alice/selection.hpp"

#include <algorithm>

namespace alice {

double fabric_score(const FabricImpl &fabric, double max_io_util, double max_clb_util, double alpha, double beta)
{
	double score = 0.0;
	if (max_io_util > 0.0)
		score += alpha * (max_io_util - fabric.io_util) / max_io_util;
	if (max_clb_util > 0.0)
		score += beta * (max_clb_util - fabric.clb_util) / max_clb_util;
	return score;
}

int Solution::redacted_instances() const
{
	int count = 0;
	for (const FabricImpl &f : fabrics)
		count += (int)f.cluster.members.size();
	return count;
}

std::string Solution::key() const
{
	std::string key;
	for (const FabricImpl &f : fabrics) {
		if (!key.empty())
			key += "|";
		key += f.cluster.key();
	}
	return key;
}

bool clusters_disjoint(const Cluster &a, const Cluster &b)
{
	// Overlap means a shared instance or one instance containing another:
	// redacting an ancestor removes the descendant's context.
	for (const std::string &ma : a.members)
		for (const std::string &mb : b.members)
			if (ma == mb || is_ancestor_path(ma, mb) || is_ancestor_path(mb, ma))
				return false;
	return true;
}

std::vector<Solution> enumerate_solutions(const std::vector<FabricImpl> &fabrics, int max_efpgas, double alpha, double beta)
{
	std::vector<FabricImpl> sorted = fabrics;
	std::sort(sorted.begin(), sorted.end(),
		  [](const FabricImpl &a, const FabricImpl &b) { return a.cluster.members < b.cluster.members; });

	double max_io_util = 0.0, max_clb_util = 0.0;
	for (const FabricImpl &f : sorted) {
		max_io_util = std::max(max_io_util, f.io_util);
		max_clb_util = std::max(max_clb_util, f.clb_util);
	}
	std::vector<double> scores(sorted.size(), 0.0);
	for (std::size_t i = 0; i < sorted.size(); ++i)
		scores[i] = fabric_score(sorted[i], max_io_util, max_clb_util, alpha, beta);

	const std::size_t n = sorted.size();
	std::vector<std::vector<char>> ok(n, std::vector<char>(n, 0));
	for (std::size_t i = 0; i < n; ++i)
		for (std::size_t j = i + 1; j < n; ++j)
			ok[i][j] = clusters_disjoint(sorted[i].cluster, sorted[j].cluster) ? 1 : 0;

	// Index-ordered expansion: each admissible subset appears once, and a
	// conflicting partial subset prunes its whole branch.
	std::vector<Solution> solutions;
	std::vector<std::size_t> stack;
	auto emit = [&]() {
		Solution s;
		for (std::size_t idx : stack) {
			s.fabrics.push_back(sorted[idx]);
			s.score += scores[idx];
		}
		solutions.push_back(std::move(s));
	};
	auto grow = [&](auto &&self, std::size_t from) -> void {
		if ((int)stack.size() >= max_efpgas)
			return;
		for (std::size_t j = from; j < n; ++j) {
			bool fits = true;
			for (std::size_t idx : stack) {
				if (!ok[idx][j]) {
					fits = false;
					break;
				}
			}
			if (!fits)
				continue;
			stack.push_back(j);
			emit();
			self(self, j + 1);
			stack.pop_back();
		}
	};
	grow(grow, 0);
	return solutions;
}

Solution rank_solutions(const std::vector<Solution> &solutions, RankOrder order)
{
	if (solutions.empty())
		throw FlowError(ErrorKind::NoSolution, "no admissible combination of valid eFPGAs");
	auto better = [order](const Solution &a, const Solution &b) {
		if (a.score != b.score)
			return order == RankOrder::Max ? a.score > b.score : a.score < b.score;
		if (a.redacted_instances() != b.redacted_instances())
			return a.redacted_instances() > b.redacted_instances();
		if (a.fabrics.size() != b.fabrics.size())
			return a.fabrics.size() < b.fabrics.size();
		return a.key() < b.key();
	};
	const Solution *best = &solutions[0];
	for (const Solution &s : solutions)
		if (better(s, *best))
			best = &s;
	return *best;
}

} // namespace alice
