// SPDX-License-Identifier: Apache-2.0
#include "oracles.hpp"

#include <algorithm>

namespace alice::testing {

namespace {

using NodeKey = std::pair<std::string, std::string>;

void expr_reads(const Expr &e, std::vector<std::string> &out)
{
	collect_reads(e, out);
}

void statement_walk(const Statement &s, std::vector<std::string> &reads, std::vector<std::string> &writes)
{
	switch (s.kind) {
	case Statement::Kind::Block:
		for (const Statement &inner : s.block)
			statement_walk(inner, reads, writes);
		return;
	case Statement::Kind::If:
		expr_reads(s.cond, reads);
		for (const Statement &inner : s.then_branch)
			statement_walk(inner, reads, writes);
		for (const Statement &inner : s.else_branch)
			statement_walk(inner, reads, writes);
		return;
	case Statement::Kind::Case:
		expr_reads(s.cond, reads);
		for (const auto &item : s.case_items) {
			for (const Expr &label : item.labels)
				expr_reads(label, reads);
			for (const Statement &inner : item.body)
				statement_walk(inner, reads, writes);
		}
		return;
	case Statement::Kind::Assign: {
		expr_reads(s.rhs, reads);
		std::vector<std::string> targets;
		collect_lvalue_targets(s.lhs, targets);
		std::vector<std::string> lhs_reads;
		expr_reads(s.lhs, lhs_reads);
		for (const std::string &n : lhs_reads)
			if (std::find(targets.begin(), targets.end(), n) == targets.end())
				reads.push_back(n);
		writes.insert(writes.end(), targets.begin(), targets.end());
		return;
	}
	}
}

// Clock-like names per module, computed as a global fixpoint over all
// modules rather than the memoized recursion the library uses.
std::map<std::string, std::set<std::string>> clock_like_fixpoint(const Design &design)
{
	std::map<std::string, std::set<std::string>> sets;
	for (const ModuleDef &m : design.modules)
		for (const Process &proc : m.processes)
			for (const SensitivityItem &item : proc.sensitivity)
				if (item.edge != SensitivityItem::Edge::None)
					sets[m.name].insert(item.signal);
	bool changed = true;
	while (changed) {
		changed = false;
		for (const ModuleDef &m : design.modules) {
			for (const Instance &inst : m.instances) {
				const ModuleDef *target = design.find_module(inst.target);
				if (!target)
					continue;
				for (const Connection &conn : inst.connections) {
					if (!conn.expr || conn.expr->kind != Expr::Kind::Ident)
						continue;
					const Port *port = target->find_port(conn.port);
					if (!port || port->dir != PortDir::Input)
						continue;
					if (sets[inst.target].count(conn.port) && !sets[m.name].count(conn.expr->name)) {
						sets[m.name].insert(conn.expr->name);
						changed = true;
					}
				}
			}
		}
	}
	return sets;
}

} // namespace

std::vector<std::string> naive_affecting(const Design &design, const InstanceTree &tree, const std::string &output)
{
	auto clocks = clock_like_fixpoint(design);
	std::vector<std::pair<NodeKey, NodeKey>> edges;
	auto add = [&](const std::string &fp, const std::string &fs, const std::string &tp, const std::string &ts) {
		edges.push_back({{fp, fs}, {tp, ts}});
	};

	for (const InstanceTree::Node &node : tree.nodes) {
		const ModuleDef *module = design.find_module(node.target);
		const std::set<std::string> &excluded = clocks[node.target];
		for (const Assign &a : module->assigns) {
			std::vector<std::string> reads, writes;
			expr_reads(a.rhs, reads);
			collect_lvalue_targets(a.lhs, writes);
			std::vector<std::string> lhs_reads;
			expr_reads(a.lhs, lhs_reads);
			for (const std::string &n : lhs_reads)
				if (std::find(writes.begin(), writes.end(), n) == writes.end())
					reads.push_back(n);
			for (const std::string &r : reads)
				if (!excluded.count(r))
					for (const std::string &w : writes)
						add(node.path, r, node.path, w);
		}
		for (const Process &proc : module->processes) {
			std::vector<std::string> reads, writes;
			for (const Statement &s : proc.body)
				statement_walk(s, reads, writes);
			for (const std::string &r : reads)
				if (!excluded.count(r))
					for (const std::string &w : writes)
						add(node.path, r, node.path, w);
		}
		for (int child_index : node.children) {
			const InstanceTree::Node &child = tree.nodes[child_index];
			const ModuleDef *target = design.find_module(child.target);
			const Instance *inst = module->find_instance(child.instance_name);
			const std::set<std::string> &child_clocks = clocks[child.target];
			for (const Connection &conn : inst->connections) {
				const Port *port = target->find_port(conn.port);
				if (!port || !conn.expr)
					continue;
				if (port->dir != PortDir::Output && !child_clocks.count(conn.port)) {
					std::vector<std::string> reads;
					expr_reads(*conn.expr, reads);
					for (const std::string &r : reads)
						if (!excluded.count(r))
							add(node.path, r, child.path, conn.port);
				}
				if (port->dir != PortDir::Input) {
					std::vector<std::string> writes;
					collect_lvalue_targets(*conn.expr, writes);
					for (const std::string &w : writes)
						add(child.path, conn.port, node.path, w);
				}
			}
			for (const Port &in : target->ports) {
				if (in.dir == PortDir::Output || child_clocks.count(in.name))
					continue;
				for (const Port &out : target->ports)
					if (out.dir != PortDir::Input && out.name != in.name)
						add(child.path, in.name, child.path, out.name);
			}
		}
	}

	// Backward fixpoint over the raw edge list.
	std::set<NodeKey> reaches;
	reaches.insert({tree.nodes[0].path, output});
	bool changed = true;
	while (changed) {
		changed = false;
		for (const auto &[from, to] : edges) {
			if (reaches.count(to) && !reaches.count(from)) {
				reaches.insert(from);
				changed = true;
			}
		}
	}

	std::set<std::string> result;
	for (const InstanceTree::Node &node : tree.nodes) {
		if (node.parent < 0)
			continue;
		const ModuleDef *target = design.find_module(node.target);
		for (const Port &p : target->ports)
			if (p.dir != PortDir::Input && reaches.count({node.path, p.name}))
				result.insert(node.path);
	}
	return std::vector<std::string>(result.begin(), result.end());
}

std::vector<std::vector<std::string>> brute_force_clusters(const std::vector<std::string> &candidates,
							   const std::map<std::string, int> &pins, const InstanceTree &tree,
							   int max_io)
{
	std::vector<std::string> sorted(candidates.begin(), candidates.end());
	std::sort(sorted.begin(), sorted.end());
	const std::size_t n = sorted.size();
	std::vector<std::vector<std::string>> result;
	for (unsigned long mask = 1; mask < (1UL << n); ++mask) {
		std::vector<std::string> members;
		for (std::size_t i = 0; i < n; ++i)
			if (mask & (1UL << i))
				members.push_back(sorted[i]);
		int total = 0;
		for (const std::string &m : members)
			total += pins.at(m);
		if (total > max_io)
			continue;
		bool ok = true;
		for (std::size_t i = 0; ok && i < members.size(); ++i)
			for (std::size_t j = i + 1; ok && j < members.size(); ++j)
				if (members[i] == members[j] || tree.is_ancestor(members[i], members[j]) ||
				    tree.is_ancestor(members[j], members[i]))
					ok = false;
		if (ok)
			result.push_back(members);
	}
	return result;
}

std::vector<NaiveSolution> brute_force_solutions(const std::vector<FabricImpl> &fabrics, int max_efpgas, double alpha,
						 double beta)
{
	std::vector<FabricImpl> sorted = fabrics;
	std::sort(sorted.begin(), sorted.end(),
		  [](const FabricImpl &a, const FabricImpl &b) { return a.cluster.members < b.cluster.members; });
	double max_io_util = 0.0, max_clb_util = 0.0;
	for (const FabricImpl &f : sorted) {
		max_io_util = std::max(max_io_util, f.io_util);
		max_clb_util = std::max(max_clb_util, f.clb_util);
	}
	auto score_of = [&](const FabricImpl &f) {
		double s = 0.0;
		if (max_io_util > 0.0)
			s += alpha * (max_io_util - f.io_util) / max_io_util;
		if (max_clb_util > 0.0)
			s += beta * (max_clb_util - f.clb_util) / max_clb_util;
		return s;
	};
	auto overlap = [](const Cluster &a, const Cluster &b) {
		for (const std::string &ma : a.members)
			for (const std::string &mb : b.members)
				if (ma == mb || is_ancestor_path(ma, mb) || is_ancestor_path(mb, ma))
					return true;
		return false;
	};
	const std::size_t n = sorted.size();
	std::vector<NaiveSolution> result;
	for (unsigned long mask = 1; mask < (1UL << n); ++mask) {
		NaiveSolution sol;
		for (std::size_t i = 0; i < n; ++i)
			if (mask & (1UL << i))
				sol.indices.push_back(i);
		if ((int)sol.indices.size() > max_efpgas)
			continue;
		bool ok = true;
		for (std::size_t i = 0; ok && i < sol.indices.size(); ++i)
			for (std::size_t j = i + 1; ok && j < sol.indices.size(); ++j)
				if (overlap(sorted[sol.indices[i]].cluster, sorted[sol.indices[j]].cluster))
					ok = false;
		if (!ok)
			continue;
		for (std::size_t idx : sol.indices)
			sol.score += score_of(sorted[idx]);
		result.push_back(std::move(sol));
	}
	return result;
}

NaiveSolution naive_best(const std::vector<NaiveSolution> &solutions, const std::vector<FabricImpl> &fabrics, RankOrder order)
{
	std::vector<FabricImpl> sorted = fabrics;
	std::sort(sorted.begin(), sorted.end(),
		  [](const FabricImpl &a, const FabricImpl &b) { return a.cluster.members < b.cluster.members; });
	auto instances = [&](const NaiveSolution &s) {
		int total = 0;
		for (std::size_t idx : s.indices)
			total += (int)sorted[idx].cluster.members.size();
		return total;
	};
	auto key = [&](const NaiveSolution &s) {
		std::vector<std::string> keys;
		for (std::size_t idx : s.indices)
			keys.push_back(sorted[idx].cluster.key());
		std::sort(keys.begin(), keys.end());
		std::string joined;
		for (const std::string &k : keys)
			joined += (joined.empty() ? "" : "|") + k;
		return joined;
	};
	const NaiveSolution *best = &solutions.front();
	for (const NaiveSolution &s : solutions) {
		if (&s == best)
			continue;
		bool better = false;
		if (s.score != best->score)
			better = order == RankOrder::Max ? s.score > best->score : s.score < best->score;
		else if (instances(s) != instances(*best))
			better = instances(s) > instances(*best);
		else if (s.indices.size() != best->indices.size())
			better = s.indices.size() < best->indices.size();
		else
			better = key(s) < key(*best);
		if (better)
			best = &s;
	}
	return *best;
}

int scan_fabric_width(const ResourceEstimate &est, const FlowParams &params)
{
	for (int w = params.fabric_w_min; w <= params.fabric_w_max; ++w)
		if (params.io_per_side_unit * w >= est.io_pins && 4 * w * w >= std::max(est.luts, est.ffs))
			return w;
	return 0;
}

InstanceTree random_tree(std::mt19937 &rng, int max_nodes)
{
	InstanceTree tree;
	InstanceTree::Node root;
	root.path = "top";
	root.instance_name = "top";
	root.target = "top";
	root.parent = -1;
	tree.nodes.push_back(root);
	tree.index["top"] = 0;
	std::uniform_int_distribution<int> parent_pick(0, 1 << 20);
	for (int i = 0; i < max_nodes; ++i) {
		int parent = parent_pick(rng) % (int)tree.nodes.size();
		InstanceTree::Node node;
		node.instance_name = "u" + std::to_string(i);
		node.path = tree.nodes[parent].path + "." + node.instance_name;
		node.target = "m" + std::to_string(i);
		node.parent = parent;
		int index = (int)tree.nodes.size();
		tree.nodes.push_back(node);
		tree.nodes[parent].children.push_back(index);
		tree.index[node.path] = index;
	}
	return tree;
}

std::set<std::string> cluster_keys(const ClusterSet &clusters)
{
	std::set<std::string> keys;
	for (const Cluster &c : clusters)
		keys.insert(c.key());
	return keys;
}

std::set<std::string> cluster_keys(const std::vector<std::vector<std::string>> &member_sets)
{
	std::set<std::string> keys;
	for (const std::vector<std::string> &members : member_sets) {
		std::string key;
		for (const std::string &m : members)
			key += (key.empty() ? "" : "+") + m;
		keys.insert(key);
	}
	return keys;
}

} // namespace alice::testing
