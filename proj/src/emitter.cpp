// SPDX-License-Identifier: Apache-2.0
#include "alice/emitter.hpp"

#include <sstream>

namespace alice {

namespace {

// Binary precedence tiers, mirroring the parser. Higher binds tighter.
int level_of(const std::string &op)
{
	if (op == "||")
		return 1;
	if (op == "&&")
		return 2;
	if (op == "|")
		return 3;
	if (op == "^" || op == "~^")
		return 4;
	if (op == "&")
		return 5;
	if (op == "==" || op == "!=")
		return 6;
	if (op == "<" || op == "<=" || op == ">" || op == ">=")
		return 7;
	if (op == "<<" || op == ">>")
		return 8;
	if (op == "+" || op == "-")
		return 9;
	if (op == "*" || op == "/" || op == "%")
		return 10;
	return 0;
}

// `level` is the loosest precedence allowed unparenthesized in this context.
void emit_expr(std::ostringstream &out, const Expr &e, int level)
{
	switch (e.kind) {
	case Expr::Kind::Number:
		if (e.number_width > 0)
			out << e.number_width << "'h" << e.number_value;
		else
			out << e.number_value;
		return;
	case Expr::Kind::Ident:
		out << e.name;
		return;
	case Expr::Kind::Select:
		out << e.name << "[";
		if (e.is_part)
			out << e.msb << ":" << e.lsb;
		else
			emit_expr(out, e.children[0], 0);
		out << "]";
		return;
	case Expr::Kind::Unary:
		out << e.op;
		// Parenthesize any non-primary operand: ~~a and ~-a are fine
		// but & &a is not, so keep it uniform.
		if (e.children[0].kind == Expr::Kind::Unary || e.children[0].kind == Expr::Kind::Binary ||
		    e.children[0].kind == Expr::Kind::Ternary) {
			out << "(";
			emit_expr(out, e.children[0], 0);
			out << ")";
		} else {
			emit_expr(out, e.children[0], 100);
		}
		return;
	case Expr::Kind::Binary: {
		int my_level = level_of(e.op);
		bool parens = my_level < level;
		if (parens)
			out << "(";
		emit_expr(out, e.children[0], my_level);
		out << " " << e.op << " ";
		emit_expr(out, e.children[1], my_level + 1);
		if (parens)
			out << ")";
		return;
	}
	case Expr::Kind::Ternary: {
		bool parens = level > 0;
		if (parens)
			out << "(";
		emit_expr(out, e.children[0], 1);
		out << " ? ";
		emit_expr(out, e.children[1], 0);
		out << " : ";
		emit_expr(out, e.children[2], 0);
		if (parens)
			out << ")";
		return;
	}
	case Expr::Kind::Concat: {
		out << "{";
		for (std::size_t i = 0; i < e.children.size(); ++i) {
			if (i)
				out << ", ";
			emit_expr(out, e.children[i], 0);
		}
		out << "}";
		return;
	}
	case Expr::Kind::Repeat:
		out << "{" << e.repeat_count << "{";
		emit_expr(out, e.children[0], 0);
		out << "}}";
		return;
	}
}

std::string expr_str(const Expr &e)
{
	std::ostringstream out;
	emit_expr(out, e, 0);
	return out.str();
}

std::string range_str(int width)
{
	if (width <= 1)
		return "";
	std::ostringstream out;
	out << "[" << width - 1 << ":0] ";
	return out.str();
}

void emit_indent(std::ostringstream &out, int depth)
{
	for (int i = 0; i < depth; ++i)
		out << "  ";
}

void emit_statement(std::ostringstream &out, const Statement &s, int depth)
{
	switch (s.kind) {
	case Statement::Kind::Block:
		emit_indent(out, depth);
		out << "begin\n";
		for (const Statement &inner : s.block)
			emit_statement(out, inner, depth + 1);
		emit_indent(out, depth);
		out << "end\n";
		return;
	case Statement::Kind::If:
		emit_indent(out, depth);
		out << "if (" << expr_str(s.cond) << ")\n";
		emit_statement(out, s.then_branch[0], depth + 1);
		if (!s.else_branch.empty()) {
			emit_indent(out, depth);
			out << "else\n";
			emit_statement(out, s.else_branch[0], depth + 1);
		}
		return;
	case Statement::Kind::Case:
		emit_indent(out, depth);
		out << "case (" << expr_str(s.cond) << ")\n";
		for (const Statement::CaseItem &item : s.case_items) {
			emit_indent(out, depth + 1);
			if (item.labels.empty()) {
				out << "default:\n";
			} else {
				for (std::size_t i = 0; i < item.labels.size(); ++i) {
					if (i)
						out << ", ";
					out << expr_str(item.labels[i]);
				}
				out << ":\n";
			}
			emit_statement(out, item.body[0], depth + 2);
		}
		emit_indent(out, depth);
		out << "endcase\n";
		return;
	case Statement::Kind::Assign:
		emit_indent(out, depth);
		out << expr_str(s.lhs) << (s.nonblocking ? " <= " : " = ") << expr_str(s.rhs) << ";\n";
		return;
	}
}

void emit_module(std::ostringstream &out, const ModuleDef &module)
{
	out << "module " << module.name << "(";
	if (!module.ports.empty()) {
		out << "\n";
		for (std::size_t i = 0; i < module.ports.size(); ++i) {
			const Port &p = module.ports[i];
			out << "  " << (p.dir == PortDir::Input ? "input " : p.dir == PortDir::Output ? "output " : "inout ");
			if (p.is_reg)
				out << "reg ";
			out << range_str(p.width) << p.name;
			if (i + 1 < module.ports.size())
				out << ",";
			out << "\n";
		}
	}
	out << ");\n";

	for (const Net &n : module.nets)
		out << "  " << (n.is_reg ? "reg " : "wire ") << range_str(n.width) << n.name << ";\n";
	for (const Assign &a : module.assigns)
		out << "  assign " << expr_str(a.lhs) << " = " << expr_str(a.rhs) << ";\n";
	for (const Process &proc : module.processes) {
		out << "  always @";
		if (proc.star) {
			out << "(*)";
		} else {
			out << "(";
			for (std::size_t i = 0; i < proc.sensitivity.size(); ++i) {
				const SensitivityItem &item = proc.sensitivity[i];
				if (i)
					out << " or ";
				if (item.edge == SensitivityItem::Edge::Pos)
					out << "posedge ";
				else if (item.edge == SensitivityItem::Edge::Neg)
					out << "negedge ";
				out << item.signal;
			}
			out << ")";
		}
		out << "\n";
		emit_statement(out, proc.body[0], 2);
	}
	for (const Instance &inst : module.instances) {
		out << "  " << inst.target << " " << inst.name << "(";
		for (std::size_t i = 0; i < inst.connections.size(); ++i) {
			const Connection &conn = inst.connections[i];
			if (i)
				out << ", ";
			out << "." << conn.port << "(";
			if (conn.expr)
				out << expr_str(*conn.expr);
			out << ")";
		}
		out << ");\n";
	}
	out << "endmodule\n";
}

} // namespace

std::string emit_verilog(const ModuleDef &module)
{
	std::ostringstream out;
	emit_module(out, module);
	return out.str();
}

std::string emit_verilog(const Design &design)
{
	std::ostringstream out;
	for (std::size_t i = 0; i < design.modules.size(); ++i) {
		if (i)
			out << "\n";
		emit_module(out, design.modules[i]);
	}
	return out.str();
}

} // namespace alice
