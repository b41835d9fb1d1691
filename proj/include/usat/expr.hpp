#ifndef USAT_EXPR_HPP_
#define USAT_EXPR_HPP_

#include <map>
#include <memory>
#include <set>
#include <string>
#include <string_view>

namespace usat {

// Immutable arithmetic expression tree used for target-metric formulas.
//
// Grammar accepted by parse_expression:
//   expr   := term (('+' | '-') term)*
//   term   := factor (('*' | '/') factor)*
//   factor := number | identifier | '-' factor | '(' expr ')'
// Identifiers match [A-Za-z_][A-Za-z0-9_]*. Numbers are unsigned decimal
// literals with optional fraction and exponent; a leading minus is always
// parsed as unary negation.
class Expr {
 public:
  enum class Kind { kNumber, kVariable, kNeg, kAdd, kSub, kMul, kDiv };

  static Expr number(double value);
  static Expr variable(std::string name);
  static Expr neg(Expr operand);
  static Expr binary(Kind kind, Expr lhs, Expr rhs);

  Kind kind() const { return node_->kind; }
  double value() const { return node_->value; }
  const std::string& name() const { return node_->name; }
  // Operand of kNeg, left operand of binary nodes.
  const Expr& lhs() const { return *node_->lhs; }
  const Expr& rhs() const { return *node_->rhs; }

  bool is_binary() const;

  // Structural equality (number literals compare by value).
  friend bool operator==(const Expr& a, const Expr& b);

 private:
  struct Node {
    Kind kind;
    double value = 0.0;
    std::string name;
    std::shared_ptr<const Expr> lhs;
    std::shared_ptr<const Expr> rhs;
  };
  explicit Expr(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
  std::shared_ptr<const Node> node_;
};

Expr parse_expression(std::string_view text);

// Minimal-parenthesis text that parses back to a structurally equal tree.
std::string to_string(const Expr& expr);

// Point evaluation. Throws UnboundIdentifier, or EvalError on division by
// exactly zero.
double evaluate(const Expr& expr, const std::map<std::string, double>& env);

std::set<std::string> identifiers(const Expr& expr);

}  // namespace usat

#endif  // USAT_EXPR_HPP_
