#include "semiflow/expression.hpp"

#include <array>
#include <charconv>
#include <cmath>
#include <cstddef>
#include <vector>

#include "semiflow/errors.hpp"

namespace semiflow {

bool VarSet::subset_of(const VarSet& allowed) const {
  return (!x || allowed.x) && (!u || allowed.u) && (!t || allowed.t) && (!s || allowed.s);
}

std::string VarSet::names() const {
  std::string out;
  const auto add = [&out](bool present, char name) {
    if (!present) return;
    if (!out.empty()) out += ", ";
    out += name;
  };
  add(x, 'x');
  add(u, 'u');
  add(t, 't');
  add(s, 's');
  return out;
}

namespace detail {

enum class NodeKind { number, variable, unary_minus, binary, call };

struct ExprNode {
  NodeKind kind = NodeKind::number;
  double number = 0.0;
  char var = 'x';
  char op = '+';
  std::string func;
  std::vector<ExprNode> children;
  std::size_t offset = 0;
};

namespace {

bool equal_nodes(const ExprNode& a, const ExprNode& b) {
  if (a.kind != b.kind) return false;
  switch (a.kind) {
    case NodeKind::number:
      if (a.number != b.number) return false;
      break;
    case NodeKind::variable:
      if (a.var != b.var) return false;
      break;
    case NodeKind::unary_minus:
      break;
    case NodeKind::binary:
      if (a.op != b.op) return false;
      break;
    case NodeKind::call:
      if (a.func != b.func) return false;
      break;
  }
  if (a.children.size() != b.children.size()) return false;
  for (std::size_t i = 0; i < a.children.size(); ++i) {
    if (!equal_nodes(a.children[i], b.children[i])) return false;
  }
  return true;
}

void collect_vars(const ExprNode& node, VarSet& vars) {
  if (node.kind == NodeKind::variable) {
    switch (node.var) {
      case 'x': vars.x = true; break;
      case 'u': vars.u = true; break;
      case 't': vars.t = true; break;
      case 's': vars.s = true; break;
    }
  }
  for (const ExprNode& child : node.children) collect_vars(child, vars);
}

std::string print_number(double value) {
  std::array<char, 32> buf{};
  const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), value);
  return std::string(buf.data(), res.ptr);
}

void print_node(const ExprNode& node, std::string& out) {
  switch (node.kind) {
    case NodeKind::number:
      out += print_number(node.number);
      break;
    case NodeKind::variable:
      out += node.var;
      break;
    case NodeKind::unary_minus:
      out += "(-";
      print_node(node.children[0], out);
      out += ')';
      break;
    case NodeKind::binary:
      out += '(';
      print_node(node.children[0], out);
      out += ' ';
      out += node.op;
      out += ' ';
      print_node(node.children[1], out);
      out += ')';
      break;
    case NodeKind::call:
      out += node.func;
      out += '(';
      print_node(node.children[0], out);
      if (node.children.size() == 2) {
        out += ", ";
        print_node(node.children[1], out);
      }
      out += ')';
      break;
  }
}

double lookup(const EvalEnv& env, char var, std::size_t offset) {
  const std::optional<double>* slot = nullptr;
  switch (var) {
    case 'x': slot = &env.x; break;
    case 'u': slot = &env.u; break;
    case 't': slot = &env.t; break;
    case 's': slot = &env.s; break;
  }
  if (!slot || !slot->has_value()) {
    throw EvalError(std::string("variable '") + var + "' is not available here (byte " +
                    std::to_string(offset) + ")");
  }
  return **slot;
}

double eval_node(const ExprNode& node, const EvalEnv& env) {
  switch (node.kind) {
    case NodeKind::number:
      return node.number;
    case NodeKind::variable:
      return lookup(env, node.var, node.offset);
    case NodeKind::unary_minus:
      return -eval_node(node.children[0], env);
    case NodeKind::binary: {
      const double a = eval_node(node.children[0], env);
      const double b = eval_node(node.children[1], env);
      switch (node.op) {
        case '+': return a + b;
        case '-': return a - b;
        case '*': return a * b;
        case '/': return a / b;
        case '^': return std::pow(a, b);
      }
      return 0.0;
    }
    case NodeKind::call: {
      const double a = eval_node(node.children[0], env);
      if (node.func == "sin") return std::sin(a);
      if (node.func == "cos") return std::cos(a);
      if (node.func == "exp") return std::exp(a);
      if (node.func == "abs") return std::abs(a);
      if (node.func == "sign") return a > 0.0 ? 1.0 : (a < 0.0 ? -1.0 : 0.0);
      if (node.func == "ln") {
        if (!(a > 0.0)) {
          throw EvalError("ln of a nonpositive value at byte " + std::to_string(node.offset));
        }
        return std::log(a);
      }
      if (node.func == "sqrt") {
        if (a < 0.0) {
          throw EvalError("sqrt of a negative value at byte " + std::to_string(node.offset));
        }
        return std::sqrt(a);
      }
      const double b = eval_node(node.children[1], env);
      return node.func == "min" ? std::min(a, b) : std::max(a, b);
    }
  }
  return 0.0;
}

struct Parser {
  std::string_view text;
  std::size_t pos = 0;

  void skip_space() {
    while (pos < text.size() && (text[pos] == ' ' || text[pos] == '\t')) ++pos;
  }

  bool at_end() {
    skip_space();
    return pos >= text.size();
  }

  char peek() {
    skip_space();
    return pos < text.size() ? text[pos] : '\0';
  }

  [[noreturn]] void fail(std::vector<std::string> expected) {
    skip_space();
    throw ParseError(pos, std::move(expected));
  }

  void expect(char c, const char* label) {
    if (peek() != c) fail({label});
    ++pos;
  }

  ExprNode parse_expr() {
    ExprNode left = parse_term();
    while (true) {
      const char c = peek();
      if (c != '+' && c != '-') return left;
      const std::size_t at = pos;
      ++pos;
      ExprNode node;
      node.kind = NodeKind::binary;
      node.op = c;
      node.offset = at;
      node.children.push_back(std::move(left));
      node.children.push_back(parse_term());
      left = std::move(node);
    }
  }

  ExprNode parse_term() {
    ExprNode left = parse_factor();
    while (true) {
      const char c = peek();
      if (c != '*' && c != '/') return left;
      const std::size_t at = pos;
      ++pos;
      ExprNode node;
      node.kind = NodeKind::binary;
      node.op = c;
      node.offset = at;
      node.children.push_back(std::move(left));
      node.children.push_back(parse_factor());
      left = std::move(node);
    }
  }

  ExprNode parse_factor() {
    if (peek() == '-') {
      ExprNode node;
      node.kind = NodeKind::unary_minus;
      node.offset = pos;
      ++pos;
      node.children.push_back(parse_factor());
      return node;
    }
    return parse_power();
  }

  ExprNode parse_power() {
    ExprNode base = parse_primary();
    if (peek() != '^') return base;
    const std::size_t at = pos;
    ++pos;
    ExprNode node;
    node.kind = NodeKind::binary;
    node.op = '^';
    node.offset = at;
    node.children.push_back(std::move(base));
    // Right associative, and the exponent admits a unary minus: 2^-3.
    node.children.push_back(parse_factor());
    return node;
  }

  ExprNode parse_primary() {
    const char c = peek();
    if (c == '(') {
      ++pos;
      ExprNode inner = parse_expr();
      expect(')', "')'");
      return inner;
    }
    if (c >= '0' && c <= '9') return parse_number();
    if (c >= 'a' && c <= 'z') return parse_name();
    fail({"a number", "a name", "'('", "'-'"});
  }

  ExprNode parse_number() {
    skip_space();
    const std::size_t start = pos;
    while (pos < text.size() && text[pos] >= '0' && text[pos] <= '9') ++pos;
    if (pos < text.size() && text[pos] == '.') {
      ++pos;
      while (pos < text.size() && text[pos] >= '0' && text[pos] <= '9') ++pos;
    }
    if (pos < text.size() && (text[pos] == 'e' || text[pos] == 'E')) {
      std::size_t mark = pos;
      ++pos;
      if (pos < text.size() && (text[pos] == '+' || text[pos] == '-')) ++pos;
      if (pos < text.size() && text[pos] >= '0' && text[pos] <= '9') {
        while (pos < text.size() && text[pos] >= '0' && text[pos] <= '9') ++pos;
      } else {
        pos = mark;  // the 'e' belongs to an identifier or is stray
      }
    }
    double value = 0.0;
    const auto res = std::from_chars(text.data() + start, text.data() + pos, value);
    if (res.ec != std::errc() || res.ptr != text.data() + pos) {
      pos = start;
      fail({"a number"});
    }
    ExprNode node;
    node.kind = NodeKind::number;
    node.number = value;
    node.offset = start;
    return node;
  }

  ExprNode parse_name() {
    skip_space();
    const std::size_t start = pos;
    while (pos < text.size() &&
           ((text[pos] >= 'a' && text[pos] <= 'z') || (text[pos] >= '0' && text[pos] <= '9'))) {
      ++pos;
    }
    const std::string_view name = text.substr(start, pos - start);

    if (name == "pi" || name == "e") {
      ExprNode node;
      node.kind = NodeKind::number;
      node.number = name == "pi" ? 3.14159265358979323846 : 2.71828182845904523536;
      node.offset = start;
      return node;
    }
    if (name.size() == 1 && (name[0] == 'x' || name[0] == 'u' || name[0] == 't' || name[0] == 's')) {
      ExprNode node;
      node.kind = NodeKind::variable;
      node.var = name[0];
      node.offset = start;
      return node;
    }

    static constexpr std::array<std::string_view, 7> kUnary = {"sin", "cos", "exp", "ln",
                                                               "abs", "sqrt", "sign"};
    const bool is_unary = [&] {
      for (const auto fn : kUnary) {
        if (name == fn) return true;
      }
      return false;
    }();
    const bool is_binary = name == "min" || name == "max";
    if (!is_unary && !is_binary) {
      pos = start;
      fail({"a known function or variable name"});
    }

    ExprNode node;
    node.kind = NodeKind::call;
    node.func = std::string(name);
    node.offset = start;
    expect('(', "'('");
    node.children.push_back(parse_expr());
    if (is_binary) {
      expect(',', "','");
      node.children.push_back(parse_expr());
    }
    expect(')', "')'");
    return node;
  }
};

}  // namespace
}  // namespace detail

double Expression::eval(const EvalEnv& env) const {
  if (!root_) throw PreconditionError("Expression: evaluating an empty expression");
  return detail::eval_node(*root_, env);
}

std::string Expression::print() const {
  if (!root_) return "";
  std::string out;
  detail::print_node(*root_, out);
  return out;
}

VarSet Expression::references() const {
  VarSet vars;
  if (root_) detail::collect_vars(*root_, vars);
  return vars;
}

bool operator==(const Expression& a, const Expression& b) {
  if (!a.root_ || !b.root_) return a.root_ == b.root_;
  return detail::equal_nodes(*a.root_, *b.root_);
}

Expression parse_expression(std::string_view text) {
  detail::Parser parser{text};
  if (parser.at_end()) parser.fail({"an expression"});
  detail::ExprNode root = parser.parse_expr();
  if (!parser.at_end()) {
    parser.fail({"an operator", "end of input"});
  }
  Expression expr;
  expr.root_ = std::make_shared<const detail::ExprNode>(std::move(root));
  return expr;
}

}  // namespace semiflow
