// SPDX-License-Identifier: Apache-2.0
#include "alice/parser.hpp"

#include <algorithm>
#include <cctype>
#include <cstdint>
#include <map>
#include <set>
#include <sstream>

namespace alice {

namespace {

// ---------------------------------------------------------------------------
// Lexer
// ---------------------------------------------------------------------------

enum class TokenKind { Ident, Number, Symbol, End };

struct Token {
	TokenKind kind = TokenKind::End;
	std::string text;
	SourceLoc loc;
};

bool is_ident_start(char c)
{
	return std::isalpha(static_cast<unsigned char>(c)) || c == '_';
}

bool is_ident_char(char c)
{
	return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '$';
}

class Lexer {
      public:
	Lexer(const std::string &text, std::string file) : text_(text), file_(std::move(file)) {}

	std::vector<Token> run()
	{
		std::vector<Token> tokens;
		while (pos_ < text_.size()) {
			char c = text_[pos_];
			if (c == '\n') {
				++line_;
				col_ = 1;
				++pos_;
				continue;
			}
			if (std::isspace(static_cast<unsigned char>(c))) {
				advance();
				continue;
			}
			if (c == '/' && peek(1) == '/') {
				while (pos_ < text_.size() && text_[pos_] != '\n')
					advance();
				continue;
			}
			if (c == '/' && peek(1) == '*') {
				skip_block_comment();
				continue;
			}
			if (c == '`')
				throw FlowError(ErrorKind::UnsupportedConstruct, "compiler directive", here());
			if (c == '\\')
				throw FlowError(ErrorKind::UnsupportedConstruct, "escaped identifier", here());
			if (c == '(' && peek(1) == '*')
				throw FlowError(ErrorKind::UnsupportedConstruct, "attribute", here());
			if (is_ident_start(c)) {
				tokens.push_back(lex_ident());
				continue;
			}
			if (std::isdigit(static_cast<unsigned char>(c)) || c == '\'') {
				tokens.push_back(lex_number());
				continue;
			}
			tokens.push_back(lex_symbol());
		}
		tokens.push_back(Token{TokenKind::End, "", here()});
		return tokens;
	}

      private:
	char peek(std::size_t off) const { return pos_ + off < text_.size() ? text_[pos_ + off] : '\0'; }

	SourceLoc here() const { return SourceLoc{file_, line_, col_}; }

	void advance()
	{
		++pos_;
		++col_;
	}

	void skip_block_comment()
	{
		SourceLoc start = here();
		advance();
		advance();
		while (pos_ + 1 < text_.size()) {
			if (text_[pos_] == '*' && text_[pos_ + 1] == '/') {
				advance();
				advance();
				return;
			}
			if (text_[pos_] == '\n') {
				++line_;
				col_ = 1;
				++pos_;
			} else {
				advance();
			}
		}
		throw FlowError(ErrorKind::Syntax, "unterminated block comment", start);
	}

	Token lex_ident()
	{
		Token t{TokenKind::Ident, "", here()};
		while (pos_ < text_.size() && is_ident_char(text_[pos_])) {
			t.text.push_back(text_[pos_]);
			advance();
		}
		if (t.text[0] == '$')
			throw FlowError(ErrorKind::UnsupportedConstruct, "system task " + t.text, t.loc);
		return t;
	}

	// Numbers keep their raw spelling; the parser canonicalizes.
	Token lex_number()
	{
		Token t{TokenKind::Number, "", here()};
		while (pos_ < text_.size() && (std::isdigit(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_')) {
			t.text.push_back(text_[pos_]);
			advance();
		}
		if (pos_ < text_.size() && text_[pos_] == '\'') {
			t.text.push_back('\'');
			advance();
			if (pos_ < text_.size()) {
				t.text.push_back(text_[pos_]);
				advance();
			}
			while (pos_ < text_.size() && (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_')) {
				t.text.push_back(text_[pos_]);
				advance();
			}
		}
		return t;
	}

	Token lex_symbol()
	{
		static const char *two_char[] = {"<=", ">=", "==", "!=", "&&", "||", "<<", ">>", "~&", "~|", "~^", "^~"};
		Token t{TokenKind::Symbol, "", here()};
		for (const char *sym : two_char) {
			if (text_[pos_] == sym[0] && peek(1) == sym[1]) {
				t.text = sym;
				advance();
				advance();
				return t;
			}
		}
		t.text = std::string(1, text_[pos_]);
		advance();
		return t;
	}

	const std::string &text_;
	std::string file_;
	std::size_t pos_ = 0;
	int line_ = 1;
	int col_ = 1;
};

// ---------------------------------------------------------------------------
// Number canonicalization
// ---------------------------------------------------------------------------

int hex_digit_value(char c)
{
	if (c >= '0' && c <= '9')
		return c - '0';
	if (c >= 'a' && c <= 'f')
		return c - 'a' + 10;
	if (c >= 'A' && c <= 'F')
		return c - 'A' + 10;
	return -1;
}

std::string strip_zeros(std::string digits)
{
	std::size_t first = digits.find_first_not_of('0');
	if (first == std::string::npos)
		return "0";
	return digits.substr(first);
}

// Converts a based literal body to canonical lowercase hex. Binary/octal/hex
// map digit-wise (arbitrary width); decimal must fit 64 bits.
std::string to_canonical_hex(char base, const std::string &digits, const SourceLoc &loc)
{
	static const char *hex_chars = "0123456789abcdef";
	if (digits.empty())
		throw FlowError(ErrorKind::Syntax, "empty literal value", loc);
	for (char c : digits)
		if (c == 'x' || c == 'X' || c == 'z' || c == 'Z' || c == '?')
			throw FlowError(ErrorKind::UnsupportedConstruct, "x/z literal", loc);
	if (base == 'd') {
		unsigned long long value = 0;
		for (char c : digits) {
			if (!std::isdigit(static_cast<unsigned char>(c)))
				throw FlowError(ErrorKind::Syntax, "bad decimal digit in literal", loc);
			if (value > (~0ULL - (unsigned)(c - '0')) / 10)
				throw FlowError(ErrorKind::UnsupportedConstruct, "decimal literal over 64 bits", loc);
			value = value * 10 + (unsigned)(c - '0');
		}
		std::ostringstream out;
		out << std::hex << value;
		return out.str();
	}
	int bits_per = base == 'b' ? 1 : base == 'o' ? 3 : 4;
	// Accumulate into a bit string, then regroup as hex.
	std::string bits;
	for (char c : digits) {
		int v = hex_digit_value(c);
		if (v < 0 || v >= (1 << bits_per))
			throw FlowError(ErrorKind::Syntax, std::string("bad digit '") + c + "' in literal", loc);
		for (int i = bits_per - 1; i >= 0; --i)
			bits.push_back((v >> i) & 1 ? '1' : '0');
	}
	std::string hex;
	int acc = 0, n = 0;
	for (auto it = bits.rbegin(); it != bits.rend(); ++it) {
		acc |= (*it == '1' ? 1 : 0) << n;
		if (++n == 4) {
			hex.push_back(hex_chars[acc]);
			acc = 0;
			n = 0;
		}
	}
	if (n)
		hex.push_back(hex_chars[acc]);
	std::reverse(hex.begin(), hex.end());
	return strip_zeros(hex);
}

Expr parse_number_token(const Token &token)
{
	const std::string &text = token.text;
	std::size_t quote = text.find('\'');
	std::string clean;
	if (quote == std::string::npos) {
		for (char c : text)
			if (c != '_')
				clean.push_back(c);
		return Expr::number(0, strip_zeros(clean));
	}
	std::string size_part = text.substr(0, quote);
	int width = 0;
	if (!size_part.empty()) {
		for (char c : size_part)
			if (c != '_')
				width = width * 10 + (c - '0');
		if (width <= 0)
			throw FlowError(ErrorKind::Syntax, "zero-width literal", token.loc);
	}
	if (quote + 1 >= text.size())
		throw FlowError(ErrorKind::Syntax, "missing literal base", token.loc);
	char base = static_cast<char>(std::tolower(text[quote + 1]));
	if (base != 'b' && base != 'o' && base != 'd' && base != 'h')
		throw FlowError(ErrorKind::Syntax, std::string("bad literal base '") + base + "'", token.loc);
	std::string digits;
	for (std::size_t i = quote + 2; i < text.size(); ++i)
		if (text[i] != '_')
			digits.push_back(text[i]);
	std::string hex = to_canonical_hex(base, digits, token.loc);
	// An unsized based literal stays context-determined, like a plain
	// decimal.
	if (width == 0) {
		unsigned long long value = 0;
		if (hex.size() > 16)
			throw FlowError(ErrorKind::UnsupportedConstruct, "unsized literal over 64 bits", token.loc);
		for (char c : hex)
			value = value * 16 + (unsigned)hex_digit_value(c);
		std::ostringstream out;
		out << value;
		return Expr::number(0, out.str());
	}
	return Expr::number(width, hex);
}

unsigned long long number_to_uint(const Expr &number, const SourceLoc &loc)
{
	unsigned long long value = 0;
	if (number.number_width == 0) {
		for (char c : number.number_value)
			value = value * 10 + (unsigned)(c - '0');
		return value;
	}
	if (number.number_value.size() > 16)
		throw FlowError(ErrorKind::UnsupportedConstruct, "constant over 64 bits", loc);
	for (char c : number.number_value)
		value = value * 16 + (unsigned)hex_digit_value(c);
	return value;
}

// ---------------------------------------------------------------------------
// Parser
// ---------------------------------------------------------------------------

const std::set<std::string> kUnsupportedKeywords = {
    "generate", "endgenerate", "genvar",   "parameter", "localparam", "function", "endfunction", "task",   "endtask",
    "initial",  "specify",     "primitive", "defparam",  "integer",    "real",     "realtime",    "time",   "event",
    "fork",     "join",        "casex",    "casez",     "for",        "while",    "repeat",      "forever", "wait",
    "deassign", "force",       "release",  "signed",    "supply0",    "supply1",  "tri",         "trireg", "tri0",
    "tri1",     "wand",        "wor",      "and",       "nand",       "nor",      "xor",         "xnor",   "not",
    "buf",      "bufif0",      "bufif1",   "notif0",    "notif1",     "pullup",   "pulldown",    "cmos",   "nmos",
    "pmos",     "scalared",    "vectored", "small",     "medium",     "large",    "macromodule",
};

const std::set<std::string> kKeywords = {
    "module", "endmodule", "input", "output", "inout", "wire", "reg",     "assign",  "always", "begin", "end",
    "if",     "else",      "case",  "endcase", "default", "posedge", "negedge", "or",     "and",   "not",
};

class Parser {
      public:
	Parser(std::vector<Token> tokens, bool allow_reserved) : tokens_(std::move(tokens)), allow_reserved_(allow_reserved) {}

	std::vector<ModuleDef> run()
	{
		std::vector<ModuleDef> modules;
		while (!at_end()) {
			expect_keyword("module");
			modules.push_back(parse_module());
		}
		return modules;
	}

      private:
	const Token &cur() const { return tokens_[pos_]; }
	const Token &next() const { return tokens_[std::min(pos_ + 1, tokens_.size() - 1)]; }
	bool at_end() const { return cur().kind == TokenKind::End; }

	bool is_symbol(const std::string &sym) const { return cur().kind == TokenKind::Symbol && cur().text == sym; }
	bool is_keyword(const std::string &kw) const { return cur().kind == TokenKind::Ident && cur().text == kw; }

	Token take()
	{
		Token t = cur();
		if (!at_end())
			++pos_;
		return t;
	}

	[[noreturn]] void fail(const std::string &expected) const
	{
		std::string got = cur().kind == TokenKind::End ? "end of input" : "'" + cur().text + "'";
		throw FlowError(ErrorKind::Syntax, "expected " + expected + ", got " + got, cur().loc);
	}

	Token expect_symbol(const std::string &sym)
	{
		if (!is_symbol(sym))
			fail("'" + sym + "'");
		return take();
	}

	Token expect_keyword(const std::string &kw)
	{
		if (!is_keyword(kw))
			fail("'" + kw + "'");
		return take();
	}

	void check_unsupported(const Token &t) const
	{
		if (t.kind == TokenKind::Ident && kUnsupportedKeywords.count(t.text))
			throw FlowError(ErrorKind::UnsupportedConstruct, t.text, t.loc);
	}

	Token expect_ident()
	{
		if (cur().kind != TokenKind::Ident)
			fail("identifier");
		check_unsupported(cur());
		if (kKeywords.count(cur().text))
			fail("identifier");
		Token t = take();
		if (!allow_reserved_ && t.text.rfind("alice_", 0) == 0)
			throw FlowError(ErrorKind::ReservedIdentifier, "identifier '" + t.text + "' uses the reserved alice_ prefix",
					t.loc);
		return t;
	}

	Expr expect_number()
	{
		if (cur().kind != TokenKind::Number)
			fail("number");
		Token t = take();
		return parse_number_token(t);
	}

	// [msb:lsb] with constant bounds; returns the width.
	int parse_range(int *msb_out = nullptr, int *lsb_out = nullptr)
	{
		expect_symbol("[");
		SourceLoc loc = cur().loc;
		Expr msb = expect_number();
		expect_symbol(":");
		Expr lsb = expect_number();
		expect_symbol("]");
		long long m = (long long)number_to_uint(msb, loc);
		long long l = (long long)number_to_uint(lsb, loc);
		if (msb_out)
			*msb_out = (int)m;
		if (lsb_out)
			*lsb_out = (int)l;
		return (int)(std::max(m, l) - std::min(m, l) + 1);
	}

	// ---- expressions -------------------------------------------------

	Expr parse_expr() { return parse_ternary(); }

	Expr parse_ternary()
	{
		Expr cond = parse_binary(0);
		if (!is_symbol("?"))
			return cond;
		take();
		Expr then_e = parse_expr();
		expect_symbol(":");
		Expr else_e = parse_expr();
		Expr e;
		e.kind = Expr::Kind::Ternary;
		e.children = {std::move(cond), std::move(then_e), std::move(else_e)};
		return e;
	}

	// Precedence-climbing over the binary operator tiers.
	static int binary_level(const std::string &op)
	{
		if (op == "||")
			return 1;
		if (op == "&&")
			return 2;
		if (op == "|")
			return 3;
		if (op == "^" || op == "~^" || op == "^~")
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

	Expr parse_binary(int min_level)
	{
		Expr lhs = parse_unary();
		while (cur().kind == TokenKind::Symbol) {
			int level = binary_level(cur().text);
			if (level == 0 || level < min_level)
				break;
			std::string op = take().text;
			if (op == "^~")
				op = "~^";
			Expr rhs = parse_binary(level + 1);
			Expr e;
			e.kind = Expr::Kind::Binary;
			e.op = op;
			e.children = {std::move(lhs), std::move(rhs)};
			lhs = std::move(e);
		}
		return lhs;
	}

	Expr parse_unary()
	{
		static const std::set<std::string> unary_ops = {"~", "!", "-", "+", "&", "|", "^", "~&", "~|", "~^", "^~"};
		if (cur().kind == TokenKind::Symbol && unary_ops.count(cur().text)) {
			std::string op = take().text;
			if (op == "^~")
				op = "~^";
			Expr e;
			e.kind = Expr::Kind::Unary;
			e.op = op;
			e.children = {parse_unary()};
			return e;
		}
		return parse_primary();
	}

	Expr parse_primary()
	{
		if (cur().kind == TokenKind::Number)
			return expect_number();
		if (is_symbol("(")) {
			take();
			Expr e = parse_expr();
			expect_symbol(")");
			return e;
		}
		if (is_symbol("{"))
			return parse_concat();
		if (cur().kind == TokenKind::Ident) {
			check_unsupported(cur());
			Token name = expect_ident();
			if (!is_symbol("["))
				return Expr::ident(name.text);
			take();
			SourceLoc loc = cur().loc;
			Expr first = parse_expr();
			if (is_symbol(":")) {
				take();
				if (first.kind != Expr::Kind::Number)
					throw FlowError(ErrorKind::UnsupportedConstruct, "non-constant part select", loc);
				Expr second = expect_number();
				expect_symbol("]");
				Expr e;
				e.kind = Expr::Kind::Select;
				e.name = name.text;
				e.is_part = true;
				e.msb = (int)number_to_uint(first, loc);
				e.lsb = (int)number_to_uint(second, loc);
				return e;
			}
			if (is_symbol("+") || is_symbol("-"))
				; // fallthrough: a[x+1] is a plain index expression
			expect_symbol("]");
			Expr e;
			e.kind = Expr::Kind::Select;
			e.name = name.text;
			e.is_part = false;
			e.children = {std::move(first)};
			return e;
		}
		fail("expression");
	}

	Expr parse_concat()
	{
		SourceLoc loc = cur().loc;
		expect_symbol("{");
		// Replication: {N{...}}
		if (cur().kind == TokenKind::Number) {
			std::size_t save = pos_;
			Expr count = expect_number();
			if (is_symbol("{")) {
				take();
				Expr inner = parse_expr();
				if (is_symbol(",")) {
					Expr cat;
					cat.kind = Expr::Kind::Concat;
					cat.children.push_back(std::move(inner));
					while (is_symbol(",")) {
						take();
						cat.children.push_back(parse_expr());
					}
					inner = std::move(cat);
				}
				expect_symbol("}");
				expect_symbol("}");
				Expr e;
				e.kind = Expr::Kind::Repeat;
				e.repeat_count = (int)number_to_uint(count, loc);
				if (e.repeat_count <= 0)
					throw FlowError(ErrorKind::Syntax, "replication count must be positive", loc);
				e.children = {std::move(inner)};
				return e;
			}
			pos_ = save;
		}
		Expr e;
		e.kind = Expr::Kind::Concat;
		e.children.push_back(parse_expr());
		while (is_symbol(",")) {
			take();
			e.children.push_back(parse_expr());
		}
		expect_symbol("}");
		return e;
	}

	bool is_lvalue(const Expr &e) const
	{
		switch (e.kind) {
		case Expr::Kind::Ident:
			return true;
		case Expr::Kind::Select:
			return !e.is_part || true;
		case Expr::Kind::Concat:
			return std::all_of(e.children.begin(), e.children.end(), [this](const Expr &c) { return is_lvalue(c); });
		default:
			return false;
		}
	}

	Expr parse_lvalue()
	{
		SourceLoc loc = cur().loc;
		Expr e = parse_primary();
		if (!is_lvalue(e))
			throw FlowError(ErrorKind::Syntax, "expected lvalue", loc);
		return e;
	}

	// ---- statements ---------------------------------------------------

	Statement parse_statement()
	{
		if (is_keyword("begin")) {
			take();
			Statement s;
			s.kind = Statement::Kind::Block;
			while (!is_keyword("end"))
				s.block.push_back(parse_statement());
			take();
			return s;
		}
		if (is_keyword("if")) {
			take();
			Statement s;
			s.kind = Statement::Kind::If;
			expect_symbol("(");
			s.cond = parse_expr();
			expect_symbol(")");
			s.then_branch.push_back(parse_statement());
			if (is_keyword("else")) {
				take();
				s.else_branch.push_back(parse_statement());
			}
			return s;
		}
		if (is_keyword("case")) {
			take();
			Statement s;
			s.kind = Statement::Kind::Case;
			expect_symbol("(");
			s.cond = parse_expr();
			expect_symbol(")");
			while (!is_keyword("endcase")) {
				Statement::CaseItem item;
				if (is_keyword("default")) {
					take();
					if (is_symbol(":"))
						take();
				} else {
					item.labels.push_back(parse_expr());
					while (is_symbol(",")) {
						take();
						item.labels.push_back(parse_expr());
					}
					expect_symbol(":");
				}
				item.body.push_back(parse_statement());
				s.case_items.push_back(std::move(item));
			}
			take();
			return s;
		}
		check_unsupported(cur());
		Statement s;
		s.kind = Statement::Kind::Assign;
		s.lhs = parse_lvalue();
		if (is_symbol("<=")) {
			take();
			s.nonblocking = true;
		} else if (is_symbol("=")) {
			take();
			s.nonblocking = false;
		} else {
			fail("'=' or '<='");
		}
		s.rhs = parse_expr();
		expect_symbol(";");
		return s;
	}

	std::vector<SensitivityItem> parse_sensitivity(bool &star)
	{
		std::vector<SensitivityItem> items;
		star = false;
		if (is_symbol("*")) {
			take();
			star = true;
			return items;
		}
		expect_symbol("(");
		if (is_symbol("*")) {
			take();
			expect_symbol(")");
			star = true;
			return items;
		}
		while (true) {
			SensitivityItem item;
			if (is_keyword("posedge")) {
				take();
				item.edge = SensitivityItem::Edge::Pos;
			} else if (is_keyword("negedge")) {
				take();
				item.edge = SensitivityItem::Edge::Neg;
			}
			item.signal = expect_ident().text;
			items.push_back(std::move(item));
			if (is_keyword("or") || is_symbol(",")) {
				take();
				continue;
			}
			break;
		}
		expect_symbol(")");
		return items;
	}

	// ---- module items ---------------------------------------------------

	struct HeaderPort {
		std::string name;
		bool declared = false;
		SourceLoc loc;
	};

	void parse_port_decl_into(ModuleDef &module, std::vector<HeaderPort> &header, PortDir dir, const Token &at)
	{
		bool is_reg = false;
		if (is_keyword("reg")) {
			take();
			is_reg = true;
		}
		int width = 1;
		if (is_symbol("["))
			width = parse_range();
		while (true) {
			Token name = expect_ident();
			auto it = std::find_if(header.begin(), header.end(),
					       [&](const HeaderPort &hp) { return hp.name == name.text; });
			if (it == header.end())
				throw FlowError(ErrorKind::Syntax, "port '" + name.text + "' not in the module port list", name.loc);
			if (it->declared)
				throw FlowError(ErrorKind::Syntax, "duplicate declaration of port '" + name.text + "'", name.loc);
			it->declared = true;
			for (Port &p : module.ports) {
				if (p.name == name.text) {
					p.dir = dir;
					p.width = width;
					p.is_reg = is_reg;
					p.loc = name.loc;
				}
			}
			if (is_symbol(",")) {
				take();
				continue;
			}
			break;
		}
		expect_symbol(";");
		(void)at;
	}

	void parse_net_decl(ModuleDef &module, bool is_reg)
	{
		int width = 1;
		if (is_symbol("["))
			width = parse_range();
		while (true) {
			Token name = expect_ident();
			Net net;
			net.name = name.text;
			net.width = width;
			net.is_reg = is_reg;
			net.loc = name.loc;
			module.nets.push_back(net);
			if (is_symbol("=")) {
				// Net declaration assignment sugars to a
				// continuous assign.
				take();
				if (is_reg)
					throw FlowError(ErrorKind::UnsupportedConstruct, "reg initializer", name.loc);
				Assign a;
				a.lhs = Expr::ident(name.text);
				a.rhs = parse_expr();
				a.loc = name.loc;
				module.assigns.push_back(std::move(a));
			}
			if (is_symbol(",")) {
				take();
				continue;
			}
			break;
		}
		expect_symbol(";");
	}

	void parse_instance(ModuleDef &module, const Token &target)
	{
		Instance inst;
		inst.target = target.text;
		inst.loc = target.loc;
		Token name = expect_ident();
		inst.name = name.text;
		expect_symbol("(");
		if (is_symbol(")")) {
			take();
			expect_symbol(";");
			module.instances.push_back(std::move(inst));
			return;
		}
		bool named = is_symbol(".");
		if (named) {
			while (true) {
				expect_symbol(".");
				Token port = expect_ident();
				expect_symbol("(");
				Connection conn;
				conn.port = port.text;
				if (!is_symbol(")"))
					conn.expr = parse_expr();
				expect_symbol(")");
				inst.connections.push_back(std::move(conn));
				if (is_symbol(",")) {
					take();
					continue;
				}
				break;
			}
		} else {
			// Positional; port names resolved during linking.
			while (true) {
				Connection conn;
				if (!is_symbol(",") && !is_symbol(")"))
					conn.expr = parse_expr();
				inst.connections.push_back(std::move(conn));
				if (is_symbol(",")) {
					take();
					continue;
				}
				break;
			}
		}
		expect_symbol(")");
		expect_symbol(";");
		module.instances.push_back(std::move(inst));
	}

	ModuleDef parse_module()
	{
		ModuleDef module;
		Token name = expect_ident();
		module.name = name.text;
		module.loc = name.loc;

		std::vector<HeaderPort> header;
		if (is_symbol("(")) {
			take();
			if (!is_symbol(")")) {
				// ANSI when the first entry names a direction.
				bool ansi = is_keyword("input") || is_keyword("output") || is_keyword("inout");
				if (ansi) {
					PortDir dir = PortDir::Input;
					while (true) {
						if (is_keyword("input")) {
							take();
							dir = PortDir::Input;
						} else if (is_keyword("output")) {
							take();
							dir = PortDir::Output;
						} else if (is_keyword("inout")) {
							take();
							dir = PortDir::Inout;
						}
						bool is_reg = false;
						if (is_keyword("wire"))
							take();
						else if (is_keyword("reg")) {
							take();
							is_reg = true;
						}
						int width = 1;
						if (is_symbol("["))
							width = parse_range();
						Token pname = expect_ident();
						Port port;
						port.name = pname.text;
						port.dir = dir;
						port.width = width;
						port.is_reg = is_reg;
						port.loc = pname.loc;
						module.ports.push_back(port);
						header.push_back({pname.text, true, pname.loc});
						if (is_symbol(",")) {
							take();
							continue;
						}
						break;
					}
				} else {
					while (true) {
						Token pname = expect_ident();
						Port port;
						port.name = pname.text;
						port.loc = pname.loc;
						module.ports.push_back(port);
						header.push_back({pname.text, false, pname.loc});
						if (is_symbol(",")) {
							take();
							continue;
						}
						break;
					}
				}
			}
			expect_symbol(")");
		}
		expect_symbol(";");

		while (!is_keyword("endmodule")) {
			if (at_end())
				fail("'endmodule'");
			check_unsupported(cur());
			if (is_symbol("#"))
				throw FlowError(ErrorKind::UnsupportedConstruct, "parameter/delay control", cur().loc);
			if (is_keyword("input") || is_keyword("output") || is_keyword("inout")) {
				Token t = take();
				PortDir dir = t.text == "input" ? PortDir::Input : t.text == "output" ? PortDir::Output : PortDir::Inout;
				parse_port_decl_into(module, header, dir, t);
				continue;
			}
			if (is_keyword("wire")) {
				take();
				parse_net_decl(module, false);
				continue;
			}
			if (is_keyword("reg")) {
				take();
				parse_net_decl(module, true);
				continue;
			}
			if (is_keyword("assign")) {
				take();
				Assign a;
				a.loc = cur().loc;
				a.lhs = parse_lvalue();
				expect_symbol("=");
				a.rhs = parse_expr();
				expect_symbol(";");
				module.assigns.push_back(std::move(a));
				continue;
			}
			if (is_keyword("always")) {
				Token t = take();
				Process proc;
				proc.loc = t.loc;
				expect_symbol("@");
				proc.sensitivity = parse_sensitivity(proc.star);
				proc.body.push_back(parse_statement());
				module.processes.push_back(std::move(proc));
				continue;
			}
			if (cur().kind == TokenKind::Ident) {
				Token target = expect_ident();
				parse_instance(module, target);
				continue;
			}
			fail("module item");
		}
		take(); // endmodule

		for (const HeaderPort &hp : header)
			if (!hp.declared)
				throw FlowError(ErrorKind::Syntax, "port '" + hp.name + "' has no direction declaration", hp.loc);
		return module;
	}

	std::vector<Token> tokens_;
	bool allow_reserved_ = false;
	std::size_t pos_ = 0;
};

// ---------------------------------------------------------------------------
// Linking / validation
// ---------------------------------------------------------------------------

void check_expr_signals(const Expr &expr, const ModuleDef &module, const SourceLoc &loc)
{
	std::vector<std::string> reads;
	collect_reads(expr, reads);
	for (const std::string &name : reads) {
		if (!module.signal_width(name))
			throw FlowError(ErrorKind::UnsupportedConstruct,
					"implicit net '" + name + "' in module '" + module.name + "'", loc);
	}
}

void check_statement_signals(const Statement &stmt, const ModuleDef &module, const SourceLoc &loc)
{
	switch (stmt.kind) {
	case Statement::Kind::Block:
		for (const Statement &s : stmt.block)
			check_statement_signals(s, module, loc);
		return;
	case Statement::Kind::If:
		check_expr_signals(stmt.cond, module, loc);
		for (const Statement &s : stmt.then_branch)
			check_statement_signals(s, module, loc);
		for (const Statement &s : stmt.else_branch)
			check_statement_signals(s, module, loc);
		return;
	case Statement::Kind::Case:
		check_expr_signals(stmt.cond, module, loc);
		for (const auto &item : stmt.case_items) {
			for (const Expr &label : item.labels)
				check_expr_signals(label, module, loc);
			for (const Statement &s : item.body)
				check_statement_signals(s, module, loc);
		}
		return;
	case Statement::Kind::Assign:
		check_expr_signals(stmt.lhs, module, loc);
		check_expr_signals(stmt.rhs, module, loc);
		return;
	}
}

bool is_lvalue_expr(const Expr &e)
{
	switch (e.kind) {
	case Expr::Kind::Ident:
	case Expr::Kind::Select:
		return true;
	case Expr::Kind::Concat:
		return std::all_of(e.children.begin(), e.children.end(), is_lvalue_expr);
	default:
		return false;
	}
}

void detect_instantiation_cycle(const Design &design)
{
	enum class Mark { White, Grey, Black };
	std::map<std::string, Mark> marks;
	// Iterative DFS with an explicit stack; path kept for the message.
	for (const ModuleDef &root : design.modules) {
		if (marks[root.name] != Mark::White)
			continue;
		std::vector<std::pair<std::string, std::size_t>> stack{{root.name, 0}};
		marks[root.name] = Mark::Grey;
		while (!stack.empty()) {
			auto &[name, child_idx] = stack.back();
			const ModuleDef *module = design.find_module(name);
			if (child_idx >= module->instances.size()) {
				marks[name] = Mark::Black;
				stack.pop_back();
				continue;
			}
			const std::string &target = module->instances[child_idx].target;
			++child_idx;
			if (marks[target] == Mark::Grey) {
				std::string path;
				for (const auto &[n, i] : stack)
					path += n + " -> ";
				throw FlowError(ErrorKind::RecursionDetected, "instantiation cycle: " + path + target);
			}
			if (marks[target] == Mark::White) {
				marks[target] = Mark::Grey;
				stack.push_back({target, 0});
			}
		}
	}
}

} // namespace

void link_design(Design &design)
{
	std::set<std::string> module_names;
	for (const ModuleDef &m : design.modules)
		if (!module_names.insert(m.name).second)
			throw FlowError(ErrorKind::Syntax, "duplicate module '" + m.name + "'", m.loc);

	for (ModuleDef &module : design.modules) {
		std::set<std::string> signal_names;
		for (const Port &p : module.ports) {
			if (p.width < 1)
				throw FlowError(ErrorKind::WidthMismatch, "port '" + p.name + "' has width < 1", p.loc);
			if (!signal_names.insert(p.name).second)
				throw FlowError(ErrorKind::Syntax, "duplicate signal '" + p.name + "'", p.loc);
		}
		for (const Net &n : module.nets) {
			if (n.width < 1)
				throw FlowError(ErrorKind::WidthMismatch, "net '" + n.name + "' has width < 1", n.loc);
			if (!signal_names.insert(n.name).second)
				throw FlowError(ErrorKind::Syntax, "duplicate signal '" + n.name + "'", n.loc);
		}
		std::set<std::string> instance_names;
		for (const Instance &inst : module.instances)
			if (!instance_names.insert(inst.name).second)
				throw FlowError(ErrorKind::Syntax, "duplicate instance '" + inst.name + "'", inst.loc);

		for (const Assign &a : module.assigns) {
			check_expr_signals(a.lhs, module, a.loc);
			check_expr_signals(a.rhs, module, a.loc);
		}
		for (const Process &proc : module.processes) {
			for (const SensitivityItem &item : proc.sensitivity)
				if (!module.signal_width(item.signal))
					throw FlowError(ErrorKind::UnsupportedConstruct,
							"implicit net '" + item.signal + "' in module '" + module.name + "'",
							proc.loc);
			for (const Statement &s : proc.body)
				check_statement_signals(s, module, proc.loc);
		}

		for (Instance &inst : module.instances) {
			const ModuleDef *target = nullptr;
			for (const ModuleDef &m : design.modules)
				if (m.name == inst.target)
					target = &m;
			if (!target)
				throw FlowError(ErrorKind::UnresolvedModule, inst.target, inst.loc);

			bool positional = std::any_of(inst.connections.begin(), inst.connections.end(),
						      [](const Connection &c) { return c.port.empty(); });
			if (positional) {
				if (inst.connections.size() != target->ports.size())
					throw FlowError(ErrorKind::WidthMismatch,
							"instance '" + inst.name + "' has " +
							    std::to_string(inst.connections.size()) + " connections for module '" +
							    target->name + "' with " + std::to_string(target->ports.size()) +
							    " ports",
							inst.loc);
				for (std::size_t i = 0; i < inst.connections.size(); ++i)
					inst.connections[i].port = target->ports[i].name;
			}

			std::set<std::string> seen_ports;
			for (const Connection &conn : inst.connections) {
				const Port *port = target->find_port(conn.port);
				if (!port)
					throw FlowError(ErrorKind::Syntax,
							"instance '" + inst.name + "' connects unknown port '" + conn.port +
							    "' of module '" + target->name + "'",
							inst.loc);
				if (!seen_ports.insert(conn.port).second)
					throw FlowError(ErrorKind::Syntax,
							"instance '" + inst.name + "' connects port '" + conn.port + "' twice",
							inst.loc);
				if (!conn.expr)
					continue;
				check_expr_signals(*conn.expr, module, inst.loc);
				if (port->dir != PortDir::Input && !is_lvalue_expr(*conn.expr))
					throw FlowError(ErrorKind::Syntax,
							"output port '" + conn.port + "' of instance '" + inst.name +
							    "' needs an lvalue connection",
							inst.loc);
				int width = expr_width(*conn.expr, module);
				if (width != 0 && width != port->width)
					throw FlowError(ErrorKind::WidthMismatch,
							"connection to port '" + conn.port + "' of instance '" + inst.name +
							    "' is " + std::to_string(width) + " bits, port is " +
							    std::to_string(port->width),
							inst.loc);
			}
		}
	}

	if (design.top.empty()) {
		std::set<std::string> instantiated;
		for (const ModuleDef &m : design.modules)
			for (const Instance &inst : m.instances)
				instantiated.insert(inst.target);
		std::vector<std::string> roots;
		for (const ModuleDef &m : design.modules)
			if (!instantiated.count(m.name))
				roots.push_back(m.name);
		if (roots.empty())
			throw FlowError(ErrorKind::RecursionDetected, "no uninstantiated module; hierarchy is cyclic");
		if (roots.size() > 1) {
			std::string list;
			for (const std::string &r : roots)
				list += (list.empty() ? "" : ", ") + r;
			throw FlowError(ErrorKind::Syntax, "ambiguous top module (candidates: " + list + ")");
		}
		design.top = roots[0];
	} else if (!design.find_module(design.top)) {
		throw FlowError(ErrorKind::UnresolvedModule, design.top);
	}

	detect_instantiation_cycle(design);
}

Design parse_design(const std::string &source, const std::string &file_name, const std::string &top, bool allow_reserved)
{
	return parse_design_files({{file_name, source}}, top, allow_reserved);
}

Design parse_design_files(const std::vector<SourceFile> &files, const std::string &top, bool allow_reserved)
{
	Design design;
	design.top = top;
	for (const SourceFile &file : files) {
		Lexer lexer(file.text, file.name);
		Parser parser(lexer.run(), allow_reserved);
		for (ModuleDef &m : parser.run())
			design.modules.push_back(std::move(m));
	}
	link_design(design);
	return design;
}

} // namespace alice
