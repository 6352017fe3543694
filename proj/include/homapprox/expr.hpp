#pragma once

#include <memory>
#include <span>
#include <string>
#include <vector>

#include "homapprox/rational.hpp"

namespace homapprox {

enum class ExprKind {
  kConstant,
  kVariable,
  kSum,
  kProduct,
  kQuotient,
  kPower,
  kSin,
  kCos,
  kExp,
  kNegation,
};

// Independent variable of a system: time t (index 0) or a state x_i (i >= 1).
struct Variable {
  int index = 0;

  static constexpr Variable t() { return Variable{0}; }
  static constexpr Variable x(int i) { return Variable{i}; }
  bool is_time() const { return index == 0; }
  bool operator==(const Variable&) const = default;
};

// Immutable expression tree over t, x1..xn with exact rational constants.
// Copies share structure; nodes are never mutated after construction, so an
// Expr may be read concurrently from any number of threads.
class Expr {
 public:
  Expr();  // the constant 0

  static Expr constant(Rational value);
  static Expr variable(Variable v);
  static Expr sum(std::vector<Expr> terms);
  static Expr product(std::vector<Expr> factors);
  static Expr quotient(Expr numerator, Expr denominator);
  static Expr power(Expr base, unsigned exponent);
  static Expr sin(Expr arg);
  static Expr cos(Expr arg);
  static Expr exp(Expr arg);
  static Expr negation(Expr arg);

  ExprKind kind() const;
  // Valid for kConstant.
  const Rational& value() const;
  // Valid for kVariable.
  Variable var() const;
  // Children: terms, factors, {numerator, denominator}, {base} or {argument}.
  const std::vector<Expr>& operands() const;
  // Valid for kPower.
  unsigned exponent() const;

  bool is_constant() const { return kind() == ExprKind::kConstant; }
  bool is_zero() const;
  bool is_one() const;

  // Structural equality; no algebraic reasoning.
  bool operator==(const Expr& other) const;

 private:
  struct Node;
  explicit Expr(std::shared_ptr<const Node> node);
  std::shared_ptr<const Node> node_;
};

// Total structural order used to canonicalize operand lists.
int compare(const Expr& a, const Expr& b);

struct ExprLess {
  bool operator()(const Expr& a, const Expr& b) const { return compare(a, b) < 0; }
};

// Raw tree builders; no simplification happens here.
Expr operator+(const Expr& a, const Expr& b);
Expr operator-(const Expr& a, const Expr& b);
Expr operator*(const Expr& a, const Expr& b);
Expr operator-(const Expr& a);

// Rule-based simplification: flattening, constant folding, merging of like
// terms and equal bases, 0/1 absorption. Idempotent.
Expr simplify(const Expr& e);

// Exact partial derivative, simplified.
Expr differentiate(const Expr& e, Variable v);

// Value at t = 0, x = 0. Throws EvaluationError on a zero denominator or on
// sin/cos/exp of an argument that is nonzero at the origin.
Rational eval_at_origin(const Expr& e);

// Floating evaluation at (t, x); x[i-1] holds x_i.
double evaluate(const Expr& e, double t, std::span<const double> x);

// Replaces every state variable by 0 (t is kept), then simplifies.
Expr substitute_zero_state(const Expr& e);

// Largest state index referenced (0 when only t or constants occur).
int max_state_index(const Expr& e);

// Text in the input grammar. For simplified trees, parsing the output gives
// back the identical tree.
std::string to_string(const Expr& e);

}  // namespace homapprox
