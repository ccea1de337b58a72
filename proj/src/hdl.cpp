// SPDX-License-Identifier: Apache-2.0
#include "alice/hdl.hpp"

#include <algorithm>
#include <sstream>

namespace alice {

Expr Expr::number(int width, std::string value)
{
	Expr e;
	e.kind = Kind::Number;
	e.number_width = width;
	e.number_value = std::move(value);
	return e;
}

Expr Expr::number_uint(int width, unsigned long long value)
{
	std::ostringstream out;
	if (width > 0)
		out << std::hex << value;
	else
		out << std::dec << value;
	return number(width, out.str());
}

Expr Expr::ident(std::string name)
{
	Expr e;
	e.kind = Kind::Ident;
	e.name = std::move(name);
	return e;
}

bool Expr::operator==(const Expr &other) const
{
	return kind == other.kind && number_width == other.number_width && number_value == other.number_value &&
	       name == other.name && is_part == other.is_part && msb == other.msb && lsb == other.lsb && op == other.op &&
	       repeat_count == other.repeat_count && children == other.children;
}

bool Statement::operator==(const Statement &other) const
{
	if (kind != other.kind)
		return false;
	switch (kind) {
	case Kind::Block:
		return block == other.block;
	case Kind::If:
		return cond == other.cond && then_branch == other.then_branch && else_branch == other.else_branch;
	case Kind::Case: {
		if (!(cond == other.cond) || case_items.size() != other.case_items.size())
			return false;
		for (std::size_t i = 0; i < case_items.size(); ++i) {
			if (!(case_items[i].labels == other.case_items[i].labels) ||
			    !(case_items[i].body == other.case_items[i].body))
				return false;
		}
		return true;
	}
	case Kind::Assign:
		return lhs == other.lhs && rhs == other.rhs && nonblocking == other.nonblocking;
	}
	return false;
}

bool Process::clocked() const
{
	return std::any_of(sensitivity.begin(), sensitivity.end(),
			   [](const SensitivityItem &item) { return item.edge != SensitivityItem::Edge::None; });
}

bool Process::operator==(const Process &other) const
{
	return star == other.star && sensitivity == other.sensitivity && body == other.body;
}

const Port *ModuleDef::find_port(const std::string &port_name) const
{
	for (const Port &p : ports)
		if (p.name == port_name)
			return &p;
	return nullptr;
}

const Net *ModuleDef::find_net(const std::string &net_name) const
{
	for (const Net &n : nets)
		if (n.name == net_name)
			return &n;
	return nullptr;
}

std::optional<int> ModuleDef::signal_width(const std::string &signal) const
{
	if (const Port *p = find_port(signal))
		return p->width;
	if (const Net *n = find_net(signal))
		return n->width;
	return std::nullopt;
}

const Instance *ModuleDef::find_instance(const std::string &instance_name) const
{
	for (const Instance &inst : instances)
		if (inst.name == instance_name)
			return &inst;
	return nullptr;
}

const ModuleDef *Design::find_module(const std::string &name) const
{
	for (const ModuleDef &m : modules)
		if (m.name == name)
			return &m;
	return nullptr;
}

ModuleDef *Design::find_module(const std::string &name)
{
	for (ModuleDef &m : modules)
		if (m.name == name)
			return &m;
	return nullptr;
}

const ModuleDef &Design::top_module() const
{
	const ModuleDef *m = find_module(top);
	if (!m)
		throw FlowError(ErrorKind::Internal, "top module '" + top + "' missing");
	return *m;
}

int pin_count(const ModuleDef &module)
{
	int pins = 0;
	for (const Port &p : module.ports)
		pins += p.width;
	return pins;
}

int expr_width(const Expr &expr, const ModuleDef &module)
{
	switch (expr.kind) {
	case Expr::Kind::Number:
		return expr.number_width;
	case Expr::Kind::Ident:
		return module.signal_width(expr.name).value_or(0);
	case Expr::Kind::Select:
		if (expr.is_part)
			return std::abs(expr.msb - expr.lsb) + 1;
		return 1;
	case Expr::Kind::Unary: {
		if (expr.op == "~" || expr.op == "-" || expr.op == "+")
			return expr_width(expr.children[0], module);
		return 1; // reductions and !
	}
	case Expr::Kind::Binary: {
		const std::string &op = expr.op;
		if (op == "==" || op == "!=" || op == "<" || op == "<=" || op == ">" || op == ">=" || op == "&&" || op == "||")
			return 1;
		if (op == "<<" || op == ">>")
			return expr_width(expr.children[0], module);
		return std::max(expr_width(expr.children[0], module), expr_width(expr.children[1], module));
	}
	case Expr::Kind::Ternary:
		return std::max(expr_width(expr.children[1], module), expr_width(expr.children[2], module));
	case Expr::Kind::Concat: {
		int total = 0;
		for (const Expr &c : expr.children) {
			int w = expr_width(c, module);
			if (w == 0)
				return 0; // unsized member poisons the concat width
			total += w;
		}
		return total;
	}
	case Expr::Kind::Repeat: {
		int w = expr_width(expr.children[0], module);
		return w == 0 ? 0 : expr.repeat_count * w;
	}
	}
	return 0;
}

void collect_reads(const Expr &expr, std::vector<std::string> &out)
{
	switch (expr.kind) {
	case Expr::Kind::Number:
		return;
	case Expr::Kind::Ident:
		out.push_back(expr.name);
		return;
	case Expr::Kind::Select:
		out.push_back(expr.name);
		break;
	default:
		break;
	}
	for (const Expr &c : expr.children)
		collect_reads(c, out);
}

void collect_lvalue_targets(const Expr &lvalue, std::vector<std::string> &out)
{
	switch (lvalue.kind) {
	case Expr::Kind::Ident:
	case Expr::Kind::Select:
		out.push_back(lvalue.name);
		return;
	case Expr::Kind::Concat:
		for (const Expr &c : lvalue.children)
			collect_lvalue_targets(c, out);
		return;
	default:
		return;
	}
}

namespace {

bool ports_equal(const std::vector<Port> &a, const std::vector<Port> &b)
{
	if (a.size() != b.size())
		return false;
	for (std::size_t i = 0; i < a.size(); ++i)
		if (a[i].name != b[i].name || a[i].dir != b[i].dir || a[i].width != b[i].width || a[i].is_reg != b[i].is_reg)
			return false;
	return true;
}

bool nets_equal(const std::vector<Net> &a, const std::vector<Net> &b)
{
	if (a.size() != b.size())
		return false;
	for (std::size_t i = 0; i < a.size(); ++i)
		if (a[i].name != b[i].name || a[i].width != b[i].width || a[i].is_reg != b[i].is_reg)
			return false;
	return true;
}

bool instances_equal(const std::vector<Instance> &a, const std::vector<Instance> &b)
{
	if (a.size() != b.size())
		return false;
	for (std::size_t i = 0; i < a.size(); ++i) {
		if (a[i].name != b[i].name || a[i].target != b[i].target ||
		    a[i].connections.size() != b[i].connections.size())
			return false;
		for (std::size_t j = 0; j < a[i].connections.size(); ++j) {
			const Connection &ca = a[i].connections[j];
			const Connection &cb = b[i].connections[j];
			if (ca.port != cb.port || ca.expr.has_value() != cb.expr.has_value())
				return false;
			if (ca.expr && !(*ca.expr == *cb.expr))
				return false;
		}
	}
	return true;
}

} // namespace

bool structurally_equal(const ModuleDef &a, const ModuleDef &b)
{
	if (a.name != b.name || !ports_equal(a.ports, b.ports) || !nets_equal(a.nets, b.nets))
		return false;
	if (a.assigns.size() != b.assigns.size())
		return false;
	for (std::size_t i = 0; i < a.assigns.size(); ++i)
		if (!(a.assigns[i].lhs == b.assigns[i].lhs) || !(a.assigns[i].rhs == b.assigns[i].rhs))
			return false;
	if (a.processes.size() != b.processes.size())
		return false;
	for (std::size_t i = 0; i < a.processes.size(); ++i)
		if (!(a.processes[i] == b.processes[i]))
			return false;
	return instances_equal(a.instances, b.instances);
}

bool structurally_equal(const Design &a, const Design &b)
{
	if (a.top != b.top || a.modules.size() != b.modules.size())
		return false;
	for (std::size_t i = 0; i < a.modules.size(); ++i)
		if (!structurally_equal(a.modules[i], b.modules[i]))
			return false;
	return true;
}

const ModuleDef *resolve_target(const Design &design, const std::string &path)
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
	if (segments.empty() || segments[0] != design.top)
		return nullptr;
	const ModuleDef *current = design.find_module(design.top);
	for (std::size_t i = 1; current && i < segments.size(); ++i) {
		const Instance *inst = current->find_instance(segments[i]);
		if (!inst)
			return nullptr;
		current = design.find_module(inst->target);
	}
	return current;
}

std::string parent_path(const std::string &path)
{
	std::size_t dot = path.rfind('.');
	return dot == std::string::npos ? std::string() : path.substr(0, dot);
}

bool is_ancestor_path(const std::string &ancestor, const std::string &descendant)
{
	return descendant.size() > ancestor.size() + 1 && descendant.compare(0, ancestor.size(), ancestor) == 0 &&
	       descendant[ancestor.size()] == '.';
}

} // namespace alice
