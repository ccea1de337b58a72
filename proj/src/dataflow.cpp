// SPDX-License-Identifier: Apache-2.0
#include "alice/dataflow.hpp"

#include <algorithm>
#include <deque>
#include <set>
#include <sstream>

namespace alice {

int DataflowGraph::find_node(const std::string &path, const std::string &signal) const
{
	auto it = index.find({path, signal});
	return it == index.end() ? -1 : it->second;
}

bool DataflowGraph::has_edge(const std::string &from_path, const std::string &from_signal, const std::string &to_path,
			     const std::string &to_signal) const
{
	int from = find_node(from_path, from_signal);
	int to = find_node(to_path, to_signal);
	if (from < 0 || to < 0)
		return false;
	return std::find(succ[from].begin(), succ[from].end(), to) != succ[from].end();
}

int DataflowGraph::add_node(const std::string &path, const std::string &signal)
{
	auto it = index.find({path, signal});
	if (it != index.end())
		return it->second;
	int id = (int)nodes.size();
	nodes.push_back({path, signal});
	index[{path, signal}] = id;
	succ.emplace_back();
	pred.emplace_back();
	return id;
}

void DataflowGraph::add_edge(int from, int to)
{
	if (std::find(succ[from].begin(), succ[from].end(), to) != succ[from].end())
		return;
	succ[from].push_back(to);
	pred[to].push_back(from);
}

std::string DataflowGraph::to_dot() const
{
	std::ostringstream out;
	out << "digraph dataflow {\n";
	for (std::size_t v = 0; v < nodes.size(); ++v)
		for (int w : succ[v])
			out << "  \"" << nodes[v].path << ":" << nodes[v].signal << "\" -> \"" << nodes[w].path << ":"
			    << nodes[w].signal << "\";\n";
	out << "}\n";
	return out.str();
}

namespace {

// Signals that only gate timing: names under posedge/negedge in a module's
// own sensitivity lists, plus nets feeding a clock-like input port of a
// child. They contribute no dependence edges.
class ClockLikeSets {
      public:
	explicit ClockLikeSets(const Design &design) : design_(design) {}

	const std::set<std::string> &of(const std::string &module_name)
	{
		auto it = cache_.find(module_name);
		if (it != cache_.end())
			return it->second;
		std::set<std::string> result;
		const ModuleDef *module = design_.find_module(module_name);
		if (module) {
			for (const Process &proc : module->processes)
				for (const SensitivityItem &item : proc.sensitivity)
					if (item.edge != SensitivityItem::Edge::None)
						result.insert(item.signal);
			for (const Instance &inst : module->instances) {
				const ModuleDef *target = design_.find_module(inst.target);
				if (!target)
					continue;
				const std::set<std::string> &child = of(inst.target);
				for (const Connection &conn : inst.connections) {
					const Port *port = target->find_port(conn.port);
					if (!port || port->dir != PortDir::Input || !conn.expr)
						continue;
					if (!child.count(conn.port))
						continue;
					// Only a bare identifier feed marks the
					// whole parent net as clock-like.
					if (conn.expr->kind == Expr::Kind::Ident)
						result.insert(conn.expr->name);
				}
			}
		}
		return cache_.emplace(module_name, std::move(result)).first->second;
	}

      private:
	const Design &design_;
	std::map<std::string, std::set<std::string>> cache_;
};

void collect_statement_reads_targets(const Statement &stmt, std::set<std::string> &reads, std::set<std::string> &targets)
{
	switch (stmt.kind) {
	case Statement::Kind::Block:
		for (const Statement &s : stmt.block)
			collect_statement_reads_targets(s, reads, targets);
		return;
	case Statement::Kind::If: {
		std::vector<std::string> r;
		collect_reads(stmt.cond, r);
		reads.insert(r.begin(), r.end());
		for (const Statement &s : stmt.then_branch)
			collect_statement_reads_targets(s, reads, targets);
		for (const Statement &s : stmt.else_branch)
			collect_statement_reads_targets(s, reads, targets);
		return;
	}
	case Statement::Kind::Case: {
		std::vector<std::string> r;
		collect_reads(stmt.cond, r);
		for (const auto &item : stmt.case_items)
			for (const Expr &label : item.labels)
				collect_reads(label, r);
		reads.insert(r.begin(), r.end());
		for (const auto &item : stmt.case_items)
			for (const Statement &s : item.body)
				collect_statement_reads_targets(s, reads, targets);
		return;
	}
	case Statement::Kind::Assign: {
		std::vector<std::string> r, t;
		collect_reads(stmt.rhs, r);
		collect_lvalue_targets(stmt.lhs, t);
		// Index expressions inside the lvalue are reads too.
		std::vector<std::string> lhs_names;
		collect_reads(stmt.lhs, lhs_names);
		for (const std::string &n : lhs_names)
			if (std::find(t.begin(), t.end(), n) == t.end())
				r.push_back(n);
		reads.insert(r.begin(), r.end());
		targets.insert(t.begin(), t.end());
		return;
	}
	}
}

} // namespace

DataflowGraph build_dataflow_graph(const Design &design, const InstanceTree &tree)
{
	DataflowGraph graph;
	graph.root_path = tree.nodes.empty() ? design.top : tree.nodes[0].path;
	ClockLikeSets clock_like(design);

	// Every declared signal of every context gets a node up front so the
	// graph covers every connection even when no edge touches it.
	for (const InstanceTree::Node &node : tree.nodes) {
		const ModuleDef *module = design.find_module(node.target);
		if (!module)
			continue;
		for (const Port &p : module->ports)
			graph.add_node(node.path, p.name);
		for (const Net &n : module->nets)
			graph.add_node(node.path, n.name);
	}

	for (const InstanceTree::Node &node : tree.nodes) {
		const ModuleDef *module = design.find_module(node.target);
		if (!module)
			continue;
		const std::set<std::string> &excluded = clock_like.of(node.target);

		auto edge = [&](const std::string &from, const std::string &to) {
			graph.add_edge(graph.add_node(node.path, from), graph.add_node(node.path, to));
		};

		for (const Assign &a : module->assigns) {
			std::vector<std::string> reads, targets;
			collect_reads(a.rhs, reads);
			collect_lvalue_targets(a.lhs, targets);
			std::vector<std::string> lhs_names;
			collect_reads(a.lhs, lhs_names);
			for (const std::string &n : lhs_names)
				if (std::find(targets.begin(), targets.end(), n) == targets.end())
					reads.push_back(n);
			for (const std::string &r : reads) {
				if (excluded.count(r))
					continue;
				for (const std::string &t : targets)
					edge(r, t);
			}
		}

		for (const Process &proc : module->processes) {
			std::set<std::string> reads, targets;
			for (const Statement &s : proc.body)
				collect_statement_reads_targets(s, reads, targets);
			for (const std::string &r : reads) {
				if (excluded.count(r))
					continue;
				for (const std::string &t : targets)
					edge(r, t);
			}
		}

		for (int child_index : node.children) {
			const InstanceTree::Node &child = tree.nodes[child_index];
			const ModuleDef *target = design.find_module(child.target);
			if (!target)
				continue;
			const Instance *inst = module->find_instance(child.instance_name);
			const std::set<std::string> &child_clocks = clock_like.of(child.target);

			if (inst) {
				for (const Connection &conn : inst->connections) {
					const Port *port = target->find_port(conn.port);
					if (!port || !conn.expr)
						continue;
					int port_node = graph.add_node(child.path, conn.port);
					bool into = port->dir == PortDir::Input || port->dir == PortDir::Inout;
					bool outof = port->dir == PortDir::Output || port->dir == PortDir::Inout;
					if (into && !child_clocks.count(conn.port)) {
						std::vector<std::string> reads;
						collect_reads(*conn.expr, reads);
						for (const std::string &r : reads) {
							if (excluded.count(r))
								continue;
							graph.add_edge(graph.add_node(node.path, r), port_node);
						}
					}
					if (outof) {
						std::vector<std::string> targets;
						collect_lvalue_targets(*conn.expr, targets);
						for (const std::string &t : targets)
							graph.add_edge(port_node, graph.add_node(node.path, t));
					}
				}
			}

			// Black-box closure: any non-clock input may affect
			// every output, whatever the internals say.
			std::vector<int> outputs;
			for (const Port &p : target->ports)
				if (p.dir != PortDir::Input)
					outputs.push_back(graph.add_node(child.path, p.name));
			graph.instance_outputs[child.path] = outputs;
			for (const Port &p : target->ports) {
				if (p.dir == PortDir::Output || child_clocks.count(p.name))
					continue;
				int in_node = graph.add_node(child.path, p.name);
				for (int out_node : outputs)
					if (out_node != in_node)
						graph.add_edge(in_node, out_node);
			}
		}
	}

	graph.instances = tree.instance_paths();

	// Dangling nets: internal nets that feed something but have no driver.
	for (std::size_t v = 0; v < graph.nodes.size(); ++v) {
		if (graph.pred[v].empty() && !graph.succ[v].empty()) {
			const DataflowGraph::NodeRef &ref = graph.nodes[v];
			const InstanceTree::Node *node = tree.find(ref.path);
			if (!node)
				continue;
			const ModuleDef *module = design.find_module(node->target);
			if (!module || !module->find_net(ref.signal))
				continue; // ports are driven externally
			graph.diagnostics.warn("net '" + ref.signal + "' in " + ref.path + " is used but never driven");
		}
	}
	return graph;
}

std::vector<std::string> affecting_instances(const DataflowGraph &graph, const Design &design, const std::string &output,
					     ImpactMode impact)
{
	const ModuleDef &top = design.top_module();
	const Port *port = top.find_port(output);
	if (!port || port->dir == PortDir::Input)
		throw FlowError(ErrorKind::UnknownOutput, "'" + output + "' is not an output of top module '" + top.name + "'");

	// Which instance, if any, owns each node as an output port.
	std::map<int, std::string> output_owner;
	for (const auto &[path, ids] : graph.instance_outputs)
		for (int id : ids)
			output_owner.emplace(id, path);

	int start = graph.find_node(graph.root_path, output);
	std::set<std::string> hits;
	if (start >= 0) {
		std::vector<char> visited(graph.nodes.size(), 0);
		std::deque<int> work{start};
		visited[start] = 1;
		while (!work.empty()) {
			int v = work.front();
			work.pop_front();
			for (int u : graph.pred[v]) {
				if (visited[u])
					continue;
				visited[u] = 1;
				auto owner = output_owner.find(u);
				if (owner != output_owner.end()) {
					hits.insert(owner->second);
					// Direct mode stops at the first
					// instance boundary on each path.
					if (impact == ImpactMode::Direct)
						continue;
				}
				work.push_back(u);
			}
		}
	}
	return std::vector<std::string>(hits.begin(), hits.end());
}

} // namespace alice
