#pragma once

#include <memory>
#include <optional>
#include <string>
#include <string_view>

namespace semiflow {

namespace detail {
struct ExprNode;
}

// Which of the four slot variables an expression may read. Scenario slots
// restrict this set (a birth kernel may depend on x only, a forcing on
// x, u and t, ...).
struct VarSet {
  bool x = false;
  bool u = false;
  bool t = false;
  bool s = false;

  bool subset_of(const VarSet& allowed) const;
  std::string names() const;

  bool operator==(const VarSet&) const = default;
};

struct EvalEnv {
  std::optional<double> x;
  std::optional<double> u;
  std::optional<double> t;
  std::optional<double> s;
};

// Parsed arithmetic expression over x, u, t, s with + - * / ^ (right
// associative, binding over unary minus), the functions sin cos exp ln abs
// sqrt sign min max, and the constants pi and e (folded to literals).
class Expression {
 public:
  Expression() = default;

  double eval(const EvalEnv& env) const;
  // Canonical fully parenthesized form; parsing it back yields an equal AST.
  std::string print() const;
  VarSet references() const;
  bool empty() const { return root_ == nullptr; }

  // Structural equality, ignoring source positions.
  friend bool operator==(const Expression& a, const Expression& b);

 private:
  friend Expression parse_expression(std::string_view text);
  std::shared_ptr<const detail::ExprNode> root_;
};

Expression parse_expression(std::string_view text);

}  // namespace semiflow
