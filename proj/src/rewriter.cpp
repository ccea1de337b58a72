// SPDX-License-Identifier: Apache-2.0
#include "alice/rewriter.hpp"

#include <algorithm>
#include <cassert>
#include <map>
#include <set>
#include <sstream>

#include "alice/parser.hpp"

namespace alice {

namespace {

std::vector<std::string> split_path(const std::string &path)
{
	std::vector<std::string> segments;
	std::size_t start = 0;
	while (true) {
		std::size_t dot = path.find('.', start);
		segments.push_back(path.substr(start, dot == std::string::npos ? dot : dot - start));
		if (dot == std::string::npos)
			break;
		start = dot + 1;
	}
	return segments;
}

std::string last_segment(const std::string &path)
{
	std::size_t dot = path.rfind('.');
	return dot == std::string::npos ? path : path.substr(dot + 1);
}

int path_depth(const std::string &path)
{
	return (int)std::count(path.begin(), path.end(), '.');
}

// Reference to `width` bits of a generated bus starting at `base`.
Expr bus_slice(const std::string &bus, int base, int width, int bus_width)
{
	if (width == bus_width)
		return Expr::ident(bus);
	Expr e;
	e.kind = Expr::Kind::Select;
	e.name = bus;
	if (width == 1) {
		e.is_part = false;
		e.children = {Expr::number_uint(0, (unsigned long long)base)};
	} else {
		e.is_part = true;
		e.msb = base + width - 1;
		e.lsb = base;
	}
	return e;
}

struct EditRecord {
	std::vector<Port> add_ports;
	std::vector<Net> add_nets;
	std::vector<Assign> add_assigns;
	std::vector<Instance> add_instances;
	std::set<std::string> delete_instances;
	std::map<std::string, std::vector<Connection>> child_conn_additions;
	std::map<std::string, std::string> child_retargets;
};

void apply_edit(ModuleDef &module, const EditRecord &edit)
{
	if (!edit.delete_instances.empty()) {
		module.instances.erase(std::remove_if(module.instances.begin(), module.instances.end(),
						      [&](const Instance &inst) {
							      return edit.delete_instances.count(inst.name) != 0;
						      }),
				       module.instances.end());
	}
	for (Instance &inst : module.instances) {
		auto retarget = edit.child_retargets.find(inst.name);
		if (retarget != edit.child_retargets.end())
			inst.target = retarget->second;
		auto extra = edit.child_conn_additions.find(inst.name);
		if (extra != edit.child_conn_additions.end())
			for (const Connection &conn : extra->second)
				inst.connections.push_back(conn);
	}
	for (const Port &p : edit.add_ports)
		module.ports.push_back(p);
	for (const Net &n : edit.add_nets)
		module.nets.push_back(n);
	for (const Assign &a : edit.add_assigns)
		module.assigns.push_back(a);
	for (const Instance &inst : edit.add_instances)
		module.instances.push_back(inst);
}

Port make_port(const std::string &name, PortDir dir, int width)
{
	Port p;
	p.name = name;
	p.dir = dir;
	p.width = width;
	return p;
}

Net make_net(const std::string &name, int width)
{
	Net n;
	n.name = name;
	n.width = width;
	return n;
}

Assign make_assign(Expr lhs, Expr rhs)
{
	Assign a;
	a.lhs = std::move(lhs);
	a.rhs = std::move(rhs);
	return a;
}

} // namespace

std::string insertion_point(const Cluster &cluster, const InstanceTree &tree)
{
	if (cluster.members.empty())
		throw FlowError(ErrorKind::Internal, "insertion point of an empty cluster");
	std::vector<std::string> lca;
	bool first = true;
	for (const std::string &member : cluster.members) {
		if (!tree.contains(member))
			throw FlowError(ErrorKind::Internal, "cluster member '" + member + "' is not in the tree");
		std::vector<std::string> parent = split_path(parent_path(member));
		if (first) {
			lca = parent;
			first = false;
			continue;
		}
		std::size_t common = 0;
		while (common < lca.size() && common < parent.size() && lca[common] == parent[common])
			++common;
		lca.resize(common);
	}
	std::string result;
	for (const std::string &segment : lca)
		result += (result.empty() ? "" : ".") + segment;
	return result;
}

GpioAssignment build_gpio_assignment(const Cluster &cluster, const Design &design)
{
	GpioAssignment assignment;
	for (const std::string &member : cluster.members) {
		const ModuleDef *target = resolve_target(design, member);
		if (!target)
			throw FlowError(ErrorKind::Internal, "cluster member '" + member + "' does not elaborate");
		for (const Port &p : target->ports) {
			if (p.dir == PortDir::Inout)
				throw FlowError(ErrorKind::UnsupportedConstruct,
						"inout port '" + p.name + "' on redacted instance " + member +
						    " (the eFPGA wrapper has no bidirectional bus)");
			GpioAssignment::Entry entry;
			entry.member = member;
			entry.port = p.name;
			entry.width = p.width;
			entry.is_input = p.dir == PortDir::Input;
			entry.base = entry.is_input ? assignment.in_width : assignment.out_width;
			(entry.is_input ? assignment.in_width : assignment.out_width) += p.width;
			assignment.entries.push_back(entry);
		}
	}
	return assignment;
}

ModuleDef generate_efpga_wrapper(const FabricImpl &fabric, const GpioAssignment &assignment, int id)
{
	if (assignment.total_pins() > fabric.io_capacity)
		throw FlowError(ErrorKind::AssignmentOverflow,
				std::to_string(assignment.total_pins()) + " assigned pins exceed the fabric's " +
				    std::to_string(fabric.io_capacity) + "-pin I/O capacity");
	ModuleDef wrapper;
	std::ostringstream name;
	name << "efpga_" << fabric.w << "x" << fabric.w << "_" << id;
	wrapper.name = name.str();
	if (assignment.in_width > 0)
		wrapper.ports.push_back(make_port("gpio_in", PortDir::Input, assignment.in_width));
	if (assignment.out_width > 0)
		wrapper.ports.push_back(make_port("gpio_out", PortDir::Output, assignment.out_width));
	wrapper.ports.push_back(make_port("cfg_clk", PortDir::Input, 1));
	wrapper.ports.push_back(make_port("cfg_en", PortDir::Input, 1));
	wrapper.ports.push_back(make_port("cfg_in", PortDir::Input, 1));
	wrapper.ports.push_back(make_port("cfg_out", PortDir::Output, 1));
	// Black-box stub: the programmed fabric netlist comes from the
	// external flow; only the interface matters here.
	return wrapper;
}

RedactedDesign redact_design(const Design &design, const Solution &solution, const InstanceTree &tree)
{
	if (solution.fabrics.empty())
		throw FlowError(ErrorKind::Internal, "redact_design needs a non-empty solution");

	const std::string root = tree.nodes[0].path;
	const ModuleDef &top = design.top_module();
	for (const char *reserved : {"cfg_clk", "cfg_en", "cfg_in", "cfg_out"}) {
		if (top.find_port(reserved) || top.find_net(reserved))
			throw FlowError(ErrorKind::ReservedIdentifier,
					std::string("top-level identifier '") + reserved + "' is reserved for the config chain");
	}

	std::vector<FabricImpl> fabrics = solution.fabrics;
	std::sort(fabrics.begin(), fabrics.end(),
		  [](const FabricImpl &a, const FabricImpl &b) { return a.cluster.members < b.cluster.members; });

	std::map<std::string, int> def_instance_count;
	for (const InstanceTree::Node &node : tree.nodes)
		def_instance_count[node.target] += 1;

	RedactedDesign result;
	result.design = design;
	std::map<std::string, EditRecord> edits;
	edits[root]; // the config chain always lands at the top

	for (std::size_t id = 0; id < fabrics.size(); ++id) {
		const FabricImpl &fabric = fabrics[id];
		const std::string rid = "alice_r" + std::to_string(id);
		const std::string ip = insertion_point(fabric.cluster, tree);
		GpioAssignment assignment = build_gpio_assignment(fabric.cluster, design);
		ModuleDef wrapper = generate_efpga_wrapper(fabric, assignment, (int)id);

		FabricManifest manifest;
		manifest.id = (int)id;
		manifest.module_name = wrapper.name;
		manifest.width = fabric.w;
		manifest.insertion_path = ip;
		manifest.members = fabric.cluster.members;
		manifest.assignment = assignment;
		result.manifest.push_back(manifest);
		result.wrappers.push_back(wrapper);
		result.design.modules.push_back(wrapper);

		EditRecord &at_ip = edits[ip];
		const std::string gi = rid + "_gi";
		const std::string go = rid + "_go";
		if (assignment.in_width > 0)
			at_ip.add_nets.push_back(make_net(gi, assignment.in_width));
		if (assignment.out_width > 0)
			at_ip.add_nets.push_back(make_net(go, assignment.out_width));

		// Wrapper instance at the insertion point.
		Instance inst;
		inst.name = "alice_efpga_" + std::to_string(id);
		inst.target = wrapper.name;
		if (assignment.in_width > 0)
			inst.connections.push_back({"gpio_in", Expr::ident(gi)});
		if (assignment.out_width > 0)
			inst.connections.push_back({"gpio_out", Expr::ident(go)});
		for (const char *cfg : {"cfg_clk", "cfg_en", "cfg_in", "cfg_out"})
			inst.connections.push_back({cfg, Expr::ident(rid + "_" + cfg)});
		at_ip.add_instances.push_back(inst);

		// Config chain from the insertion point to the top: the same
		// four alice_r<id>_cfg_* names are ports below the top and
		// wires at the top.
		{
			std::string q = ip;
			while (q != root) {
				EditRecord &at_q = edits[q];
				at_q.add_ports.push_back(make_port(rid + "_cfg_clk", PortDir::Input, 1));
				at_q.add_ports.push_back(make_port(rid + "_cfg_en", PortDir::Input, 1));
				at_q.add_ports.push_back(make_port(rid + "_cfg_in", PortDir::Input, 1));
				at_q.add_ports.push_back(make_port(rid + "_cfg_out", PortDir::Output, 1));
				EditRecord &at_parent = edits[parent_path(q)];
				for (const char *cfg : {"cfg_clk", "cfg_en", "cfg_in", "cfg_out"}) {
					std::string name = rid + "_" + cfg;
					at_parent.child_conn_additions[last_segment(q)].push_back({name, Expr::ident(name)});
				}
				q = parent_path(q);
			}
			EditRecord &at_root = edits[root];
			for (const char *cfg : {"cfg_clk", "cfg_en", "cfg_in", "cfg_out"})
				at_root.add_nets.push_back(make_net(rid + "_" + cfg, 1));
		}

		// Route every member pin to its GPIO slice.
		std::map<std::string, int> member_ordinal;
		for (std::size_t j = 0; j < fabric.cluster.members.size(); ++j)
			member_ordinal[fabric.cluster.members[j]] = (int)j;
		std::set<std::string> deleted;
		for (const GpioAssignment::Entry &entry : assignment.entries) {
			const std::string member_parent = parent_path(entry.member);
			const std::string member_name = last_segment(entry.member);
			if (!deleted.count(entry.member)) {
				edits[member_parent].delete_instances.insert(member_name);
				deleted.insert(entry.member);
			}

			// The member's former connection for this pin.
			const InstanceTree::Node *parent_node = tree.find(member_parent);
			const ModuleDef *parent_def = design.find_module(parent_node->target);
			const Instance *member_inst = parent_def->find_instance(member_name);
			std::optional<Expr> conn_expr;
			if (member_inst) {
				for (const Connection &conn : member_inst->connections)
					if (conn.port == entry.port && conn.expr)
						conn_expr = conn.expr;
			}

			const std::string &bus = entry.is_input ? gi : go;
			int bus_width = entry.is_input ? assignment.in_width : assignment.out_width;
			Expr slice = bus_slice(bus, entry.base, entry.width, bus_width);

			if (member_parent == ip) {
				EditRecord &at_parent = edits[member_parent];
				if (entry.is_input) {
					Expr rhs = conn_expr ? *conn_expr : Expr::number_uint(entry.width, 0);
					at_parent.add_assigns.push_back(make_assign(slice, rhs));
				} else if (conn_expr) {
					at_parent.add_assigns.push_back(make_assign(*conn_expr, slice));
				}
				continue;
			}

			// The pin travels through module boundaries as a
			// fresh alice_r<id>_m<j>_<port> port.
			const std::string pn = rid + "_m" + std::to_string(member_ordinal[entry.member]) + "_" + entry.port;
			PortDir dir = entry.is_input ? PortDir::Output : PortDir::Input;
			{
				EditRecord &at_parent = edits[member_parent];
				at_parent.add_ports.push_back(make_port(pn, dir, entry.width));
				if (entry.is_input) {
					Expr rhs = conn_expr ? *conn_expr : Expr::number_uint(entry.width, 0);
					at_parent.add_assigns.push_back(make_assign(Expr::ident(pn), rhs));
				} else if (conn_expr) {
					at_parent.add_assigns.push_back(make_assign(*conn_expr, Expr::ident(pn)));
				}
			}
			std::string q = member_parent;
			while (parent_path(q) != ip) {
				edits[parent_path(q)].child_conn_additions[last_segment(q)].push_back({pn, Expr::ident(pn)});
				q = parent_path(q);
				edits[q].add_ports.push_back(make_port(pn, dir, entry.width));
			}
			// q's parent is the insertion point: bridge the port
			// to the GPIO bus through a wire.
			edits[ip].child_conn_additions[last_segment(q)].push_back({pn, Expr::ident(pn)});
			edits[ip].add_nets.push_back(make_net(pn, entry.width));
			if (entry.is_input)
				edits[ip].add_assigns.push_back(make_assign(slice, Expr::ident(pn)));
			else
				edits[ip].add_assigns.push_back(make_assign(Expr::ident(pn), slice));
		}
	}

	// The canonical config ports and the daisy chain at the top.
	{
		EditRecord &at_root = edits[root];
		at_root.add_ports.push_back(make_port("cfg_clk", PortDir::Input, 1));
		at_root.add_ports.push_back(make_port("cfg_en", PortDir::Input, 1));
		at_root.add_ports.push_back(make_port("cfg_in", PortDir::Input, 1));
		at_root.add_ports.push_back(make_port("cfg_out", PortDir::Output, 1));
		for (std::size_t id = 0; id < fabrics.size(); ++id) {
			const std::string rid = "alice_r" + std::to_string(id);
			at_root.add_assigns.push_back(make_assign(Expr::ident(rid + "_cfg_clk"), Expr::ident("cfg_clk")));
			at_root.add_assigns.push_back(make_assign(Expr::ident(rid + "_cfg_en"), Expr::ident("cfg_en")));
			Expr chain_in = id == 0 ? Expr::ident("cfg_in")
						: Expr::ident("alice_r" + std::to_string(id - 1) + "_cfg_out");
			at_root.add_assigns.push_back(make_assign(Expr::ident(rid + "_cfg_in"), chain_in));
		}
		at_root.add_assigns.push_back(make_assign(
		    Expr::ident("cfg_out"), Expr::ident("alice_r" + std::to_string(fabrics.size() - 1) + "_cfg_out")));
	}

	// Apply deepest-first so clone retargets land in the parent's record
	// before the parent is rewritten. Modules with untouched instances
	// elsewhere are cloned; the originals stay pristine.
	std::vector<std::string> order;
	for (const auto &[path, edit] : edits)
		order.push_back(path);
	std::sort(order.begin(), order.end(), [](const std::string &a, const std::string &b) {
		int da = path_depth(a), db = path_depth(b);
		if (da != db)
			return da > db;
		return a < b;
	});

	std::vector<ModuleDef> clones;
	int clone_counter = 0;
	for (const std::string &path : order) {
		const EditRecord &edit = edits[path];
		const InstanceTree::Node *node = tree.find(path);
		if (!node)
			throw FlowError(ErrorKind::Internal, "edit path '" + path + "' is not in the tree");
		ModuleDef *def = result.design.find_module(node->target);
		if (!def)
			throw FlowError(ErrorKind::Internal, "module '" + node->target + "' missing during rewrite");
		if (path == root || def_instance_count[node->target] <= 1) {
			apply_edit(*def, edit);
			continue;
		}
		ModuleDef clone = *def;
		clone.name = "alice_m" + std::to_string(clone_counter++) + "_" + def->name;
		apply_edit(clone, edit);
		clones.push_back(std::move(clone));
		const std::string parent = parent_path(path);
		if (!edits.count(parent))
			throw FlowError(ErrorKind::Internal, "clone parent '" + parent + "' has no edit record");
		edits[parent].child_retargets[node->instance_name] = clones.back().name;
	}
	for (ModuleDef &clone : clones)
		result.design.modules.insert(result.design.modules.end() - (long)result.wrappers.size(), std::move(clone));

	// Self-check: the rewritten design must still satisfy every
	// structural invariant.
	try {
		link_design(result.design);
	} catch (const FlowError &e) {
		throw FlowError(ErrorKind::Internal, std::string("rewritten design is inconsistent: ") + e.what());
	}
	return result;
}

} // namespace alice
