// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "alice/diagnostics.hpp"

namespace alice {

// ---------------------------------------------------------------------------
// Expressions
// ---------------------------------------------------------------------------

/// Expression tree for the supported synthesizable subset. Children are held
/// by value; the node kinds are:
///   Number   - literal; width 0 means unsized (context-determined)
///   Ident    - signal reference
///   Select   - bit select (index expr) or constant part select [msb:lsb]
///   Unary    - ~ ! - + & | ^ ~& ~| ~^ (reductions included)
///   Binary   - bitwise/arith/compare/shift/logical operators
///   Ternary  - cond ? a : b
///   Concat   - {a, b, ...}
///   Repeat   - {n{expr}}
struct Expr {
	enum class Kind { Number, Ident, Select, Unary, Binary, Ternary, Concat, Repeat };

	Kind kind = Kind::Number;
	// Number: width (0 = unsized) and canonical value text (lowercase hex
	// for sized, decimal for unsized).
	int number_width = 0;
	std::string number_value;
	// Ident / Select base name.
	std::string name;
	// Select: part select bounds when is_part, else children[0] is the
	// bit index expression.
	bool is_part = false;
	int msb = 0;
	int lsb = 0;
	// Unary/Binary operator spelling ("~", "&&", "<=", ...).
	std::string op;
	// Repeat count.
	int repeat_count = 0;

	std::vector<Expr> children;

	static Expr number(int width, std::string value);
	static Expr number_uint(int width, unsigned long long value);
	static Expr ident(std::string name);

	bool operator==(const Expr &other) const;
};

// ---------------------------------------------------------------------------
// Statements and processes
// ---------------------------------------------------------------------------

struct Statement {
	enum class Kind { Block, If, Case, Assign };

	struct CaseItem {
		std::vector<Expr> labels; // empty => default
		std::vector<Statement> body;
	};

	Kind kind = Kind::Block;
	std::vector<Statement> block; // Block
	Expr cond;                    // If / Case selector
	std::vector<Statement> then_branch;
	std::vector<Statement> else_branch; // empty => no else
	std::vector<CaseItem> case_items;
	Expr lhs; // Assign
	Expr rhs;
	bool nonblocking = false;

	bool operator==(const Statement &other) const;
};

struct SensitivityItem {
	enum class Edge { None, Pos, Neg };
	Edge edge = Edge::None;
	std::string signal;

	bool operator==(const SensitivityItem &other) const = default;
};

struct Process {
	bool star = false; // always @(*)
	std::vector<SensitivityItem> sensitivity;
	std::vector<Statement> body;
	SourceLoc loc;

	/// Edge-triggered sensitivity marks a clocked process; its assignment
	/// targets are registers.
	bool clocked() const;

	bool operator==(const Process &other) const;
};

// ---------------------------------------------------------------------------
// Module structure
// ---------------------------------------------------------------------------

enum class PortDir { Input, Output, Inout };

struct Port {
	std::string name;
	PortDir dir = PortDir::Input;
	int width = 1;
	bool is_reg = false;
	SourceLoc loc;
};

struct Net {
	std::string name;
	int width = 1;
	bool is_reg = false;
	SourceLoc loc;
};

struct Assign {
	Expr lhs;
	Expr rhs;
	SourceLoc loc;
};

struct Connection {
	std::string port;         // resolved port name
	std::optional<Expr> expr; // absent => explicitly unconnected
};

struct Instance {
	std::string name;
	std::string target;
	std::vector<Connection> connections;
	SourceLoc loc;
};

struct ModuleDef {
	std::string name;
	std::vector<Port> ports;
	std::vector<Net> nets; // internal nets only; ports are looked up separately
	std::vector<Assign> assigns;
	std::vector<Process> processes;
	std::vector<Instance> instances;
	SourceLoc loc;

	const Port *find_port(const std::string &name) const;
	const Net *find_net(const std::string &name) const;
	/// Width of a declared port or net, or nullopt if undeclared.
	std::optional<int> signal_width(const std::string &name) const;
	const Instance *find_instance(const std::string &name) const;
};

struct Design {
	std::vector<ModuleDef> modules; // source order
	std::string top;

	const ModuleDef *find_module(const std::string &name) const;
	ModuleDef *find_module(const std::string &name);
	const ModuleDef &top_module() const;
};

// ---------------------------------------------------------------------------
// Operations
// ---------------------------------------------------------------------------

/// Total pin count of a module: the sum of all port widths, every direction
/// (an inout pin counts once).
int pin_count(const ModuleDef &module);

/// Self-determined width of an expression in the context of `module`.
/// Unsized numbers yield 0 (wildcard in width checks).
int expr_width(const Expr &expr, const ModuleDef &module);

/// Collect the names of signals read by the expression (appends, may repeat).
void collect_reads(const Expr &expr, std::vector<std::string> &out);

/// Collect the base names assigned by an lvalue (identifier, select, concat).
void collect_lvalue_targets(const Expr &lvalue, std::vector<std::string> &out);

/// Deep structural equality ignoring source locations: same module order,
/// names, ports, nets, assigns, processes, instances and connections.
bool structurally_equal(const Design &a, const Design &b);
bool structurally_equal(const ModuleDef &a, const ModuleDef &b);

/// Resolve the target module of an elaborated instance path
/// ("top.u1.core"); the leading segment must be the top module name.
/// Returns nullptr when the path does not elaborate.
const ModuleDef *resolve_target(const Design &design, const std::string &path);

// Instance-path helpers. Paths are dot-separated and rooted at the top
// module's name.
std::string parent_path(const std::string &path);
bool is_ancestor_path(const std::string &ancestor, const std::string &descendant);

} // namespace alice
