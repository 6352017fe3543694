#include "homapprox/expr.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <utility>

#include "homapprox/error.hpp"

namespace homapprox {

struct Expr::Node {
  ExprKind kind;
  Rational value;
  Variable var;
  unsigned exponent = 0;
  std::vector<Expr> operands;
};

Expr::Expr() {
  static const std::shared_ptr<const Node> zero = [] {
    auto n = std::make_shared<Node>();
    n->kind = ExprKind::kConstant;
    n->value = 0;
    return std::shared_ptr<const Node>(n);
  }();
  node_ = zero;
}
Expr::Expr(std::shared_ptr<const Node> node) : node_(std::move(node)) {}

Expr Expr::constant(Rational value) {
  auto n = std::make_shared<Node>();
  n->kind = ExprKind::kConstant;
  n->value = std::move(value);
  return Expr(std::move(n));
}

Expr Expr::variable(Variable v) {
  auto n = std::make_shared<Node>();
  n->kind = ExprKind::kVariable;
  n->var = v;
  return Expr(std::move(n));
}

namespace {

template <class NodeT>
std::shared_ptr<NodeT> make_node(ExprKind kind, std::vector<Expr> operands) {
  auto n = std::make_shared<NodeT>();
  n->kind = kind;
  n->operands = std::move(operands);
  return n;
}

}  // namespace

Expr Expr::sum(std::vector<Expr> terms) {
  if (terms.empty()) return Expr();
  if (terms.size() == 1) return terms.front();
  return Expr(make_node<Node>(ExprKind::kSum, std::move(terms)));
}

Expr Expr::product(std::vector<Expr> factors) {
  if (factors.empty()) return constant(1);
  if (factors.size() == 1) return factors.front();
  return Expr(make_node<Node>(ExprKind::kProduct, std::move(factors)));
}

Expr Expr::quotient(Expr numerator, Expr denominator) {
  return Expr(make_node<Node>(ExprKind::kQuotient, {std::move(numerator), std::move(denominator)}));
}

Expr Expr::power(Expr base, unsigned exponent) {
  auto n = make_node<Node>(ExprKind::kPower, {std::move(base)});
  n->exponent = exponent;
  return Expr(std::move(n));
}

Expr Expr::sin(Expr arg) { return Expr(make_node<Node>(ExprKind::kSin, {std::move(arg)})); }
Expr Expr::cos(Expr arg) { return Expr(make_node<Node>(ExprKind::kCos, {std::move(arg)})); }
Expr Expr::exp(Expr arg) { return Expr(make_node<Node>(ExprKind::kExp, {std::move(arg)})); }
Expr Expr::negation(Expr arg) { return Expr(make_node<Node>(ExprKind::kNegation, {std::move(arg)})); }

ExprKind Expr::kind() const { return node_->kind; }
const Rational& Expr::value() const { return node_->value; }
Variable Expr::var() const { return node_->var; }
const std::vector<Expr>& Expr::operands() const { return node_->operands; }
unsigned Expr::exponent() const { return node_->exponent; }

bool Expr::is_zero() const { return kind() == ExprKind::kConstant && value() == 0; }
bool Expr::is_one() const { return kind() == ExprKind::kConstant && value() == 1; }

bool Expr::operator==(const Expr& other) const {
  return node_ == other.node_ || compare(*this, other) == 0;
}

namespace {

int kind_rank(ExprKind k) {
  switch (k) {
    case ExprKind::kConstant: return 0;
    case ExprKind::kVariable: return 1;
    case ExprKind::kPower: return 2;
    case ExprKind::kProduct: return 3;
    case ExprKind::kQuotient: return 4;
    case ExprKind::kSum: return 5;
    case ExprKind::kSin: return 6;
    case ExprKind::kCos: return 7;
    case ExprKind::kExp: return 8;
    case ExprKind::kNegation: return 9;
  }
  return 10;
}

int three_way(auto a, auto b) { return a < b ? -1 : (b < a ? 1 : 0); }

}  // namespace

int compare(const Expr& a, const Expr& b) {
  if (int c = three_way(kind_rank(a.kind()), kind_rank(b.kind()))) return c;
  switch (a.kind()) {
    case ExprKind::kConstant:
      return cmp(a.value(), b.value()) < 0 ? -1 : (cmp(a.value(), b.value()) > 0 ? 1 : 0);
    case ExprKind::kVariable:
      return three_way(a.var().index, b.var().index);
    case ExprKind::kPower:
      if (int c = compare(a.operands()[0], b.operands()[0])) return c;
      return three_way(a.exponent(), b.exponent());
    default: {
      const auto& x = a.operands();
      const auto& y = b.operands();
      for (std::size_t i = 0; i < std::min(x.size(), y.size()); ++i) {
        if (int c = compare(x[i], y[i])) return c;
      }
      return three_way(x.size(), y.size());
    }
  }
}

Expr operator+(const Expr& a, const Expr& b) { return Expr::sum({a, b}); }
Expr operator-(const Expr& a, const Expr& b) { return Expr::sum({a, Expr::negation(b)}); }
Expr operator*(const Expr& a, const Expr& b) { return Expr::product({a, b}); }
Expr operator-(const Expr& a) { return Expr::negation(a); }

// --- simplification -------------------------------------------------------

namespace {

Expr simplify_sum(const std::vector<Expr>& terms);
Expr simplify_product(const std::vector<Expr>& factors);

// Splits a simplified term into (coefficient, body). A bare constant has body 1.
std::pair<Rational, Expr> split_coefficient(const Expr& term) {
  if (term.is_constant()) return {term.value(), Expr::constant(1)};
  if (term.kind() == ExprKind::kProduct && term.operands().front().is_constant()) {
    const auto& ops = term.operands();
    std::vector<Expr> rest(ops.begin() + 1, ops.end());
    return {ops.front().value(), Expr::product(std::move(rest))};
  }
  return {Rational(1), term};
}

Expr with_coefficient(const Rational& coef, const Expr& body) {
  if (coef == 0) return Expr();
  if (body.is_one()) return Expr::constant(coef);
  if (coef == 1) return body;
  std::vector<Expr> factors{Expr::constant(coef)};
  if (body.kind() == ExprKind::kProduct) {
    factors.insert(factors.end(), body.operands().begin(), body.operands().end());
  } else {
    factors.push_back(body);
  }
  return Expr::product(std::move(factors));
}

Expr simplify_sum(const std::vector<Expr>& terms) {
  std::vector<Expr> flat;
  for (const auto& t : terms) {
    if (t.kind() == ExprKind::kSum) {
      flat.insert(flat.end(), t.operands().begin(), t.operands().end());
    } else {
      flat.push_back(t);
    }
  }
  Rational constant = 0;
  std::map<Expr, Rational, ExprLess> collected;
  for (const auto& t : flat) {
    auto [coef, body] = split_coefficient(t);
    if (body.is_one()) {
      constant += coef;
    } else {
      collected[body] += coef;
    }
  }
  std::vector<Expr> out;
  if (constant != 0) out.push_back(Expr::constant(constant));
  for (const auto& [body, coef] : collected) {
    if (coef != 0) out.push_back(with_coefficient(coef, body));
  }
  if (out.empty()) return Expr();
  std::sort(out.begin(), out.end(), ExprLess{});
  return Expr::sum(std::move(out));
}

Expr simplify_product(const std::vector<Expr>& factors) {
  std::vector<Expr> flat;
  for (const auto& f : factors) {
    if (f.kind() == ExprKind::kProduct) {
      flat.insert(flat.end(), f.operands().begin(), f.operands().end());
    } else {
      flat.push_back(f);
    }
  }
  Rational coef = 1;
  std::map<Expr, unsigned, ExprLess> powers;
  for (const auto& f : flat) {
    if (f.is_constant()) {
      coef *= f.value();
    } else if (f.kind() == ExprKind::kPower) {
      powers[f.operands()[0]] += f.exponent();
    } else {
      powers[f] += 1;
    }
  }
  if (coef == 0) return Expr();
  std::vector<Expr> out;
  for (const auto& [base, k] : powers) {
    out.push_back(k == 1 ? base : Expr::power(base, k));
  }
  std::sort(out.begin(), out.end(), ExprLess{});
  if (out.empty()) return Expr::constant(coef);
  if (coef != 1) out.insert(out.begin(), Expr::constant(coef));
  return Expr::product(std::move(out));
}

Rational rational_pow(const Rational& base, unsigned k) {
  Rational r = 1;
  for (unsigned i = 0; i < k; ++i) r *= base;
  return r;
}

}  // namespace

Expr simplify(const Expr& e) {
  switch (e.kind()) {
    case ExprKind::kConstant:
    case ExprKind::kVariable:
      return e;
    case ExprKind::kNegation:
      return simplify_product({Expr::constant(-1), simplify(e.operands()[0])});
    case ExprKind::kSum: {
      std::vector<Expr> terms;
      terms.reserve(e.operands().size());
      for (const auto& t : e.operands()) terms.push_back(simplify(t));
      return simplify_sum(terms);
    }
    case ExprKind::kProduct: {
      std::vector<Expr> factors;
      factors.reserve(e.operands().size());
      for (const auto& f : e.operands()) factors.push_back(simplify(f));
      return simplify_product(factors);
    }
    case ExprKind::kQuotient: {
      Expr num = simplify(e.operands()[0]);
      Expr den = simplify(e.operands()[1]);
      if (den.is_constant() && den.value() != 0) {
        return simplify_product({Expr::constant(1 / den.value()), num});
      }
      return Expr::quotient(std::move(num), std::move(den));
    }
    case ExprKind::kPower: {
      Expr base = simplify(e.operands()[0]);
      unsigned k = e.exponent();
      if (k == 0) return Expr::constant(1);
      if (k == 1) return base;
      if (base.is_constant()) return Expr::constant(rational_pow(base.value(), k));
      if (base.kind() == ExprKind::kPower) return Expr::power(base.operands()[0], base.exponent() * k);
      return Expr::power(std::move(base), k);
    }
    case ExprKind::kSin: {
      Expr arg = simplify(e.operands()[0]);
      return arg.is_zero() ? Expr() : Expr::sin(std::move(arg));
    }
    case ExprKind::kCos: {
      Expr arg = simplify(e.operands()[0]);
      return arg.is_zero() ? Expr::constant(1) : Expr::cos(std::move(arg));
    }
    case ExprKind::kExp: {
      Expr arg = simplify(e.operands()[0]);
      return arg.is_zero() ? Expr::constant(1) : Expr::exp(std::move(arg));
    }
  }
  throw InternalError("simplify: unknown expression kind");
}

// --- differentiation ------------------------------------------------------

namespace {

Expr derive(const Expr& e, Variable v) {
  switch (e.kind()) {
    case ExprKind::kConstant:
      return Expr();
    case ExprKind::kVariable:
      return Expr::constant(e.var() == v ? 1 : 0);
    case ExprKind::kNegation:
      return Expr::negation(derive(e.operands()[0], v));
    case ExprKind::kSum: {
      std::vector<Expr> terms;
      for (const auto& t : e.operands()) terms.push_back(derive(t, v));
      return Expr::sum(std::move(terms));
    }
    case ExprKind::kProduct: {
      const auto& f = e.operands();
      std::vector<Expr> terms;
      for (std::size_t i = 0; i < f.size(); ++i) {
        Expr df = derive(f[i], v);
        if (simplify(df).is_zero()) continue;
        std::vector<Expr> factors = f;
        factors[i] = df;
        terms.push_back(Expr::product(std::move(factors)));
      }
      return Expr::sum(std::move(terms));
    }
    case ExprKind::kQuotient: {
      const Expr& n = e.operands()[0];
      const Expr& d = e.operands()[1];
      Expr numer = Expr::sum({Expr::product({derive(n, v), d}),
                              Expr::negation(Expr::product({n, derive(d, v)}))});
      return Expr::quotient(std::move(numer), Expr::power(d, 2));
    }
    case ExprKind::kPower: {
      const Expr& b = e.operands()[0];
      unsigned k = e.exponent();
      if (k == 0) return Expr();
      return Expr::product({Expr::constant(k), Expr::power(b, k - 1), derive(b, v)});
    }
    case ExprKind::kSin:
      return Expr::product({Expr::cos(e.operands()[0]), derive(e.operands()[0], v)});
    case ExprKind::kCos:
      return Expr::product(
          {Expr::constant(-1), Expr::sin(e.operands()[0]), derive(e.operands()[0], v)});
    case ExprKind::kExp:
      return Expr::product({e, derive(e.operands()[0], v)});
  }
  throw InternalError("differentiate: unknown expression kind");
}

}  // namespace

Expr differentiate(const Expr& e, Variable v) { return simplify(derive(e, v)); }

// --- evaluation -----------------------------------------------------------

Rational eval_at_origin(const Expr& e) {
  switch (e.kind()) {
    case ExprKind::kConstant:
      return e.value();
    case ExprKind::kVariable:
      return 0;
    case ExprKind::kNegation:
      return -eval_at_origin(e.operands()[0]);
    case ExprKind::kSum: {
      Rational s = 0;
      for (const auto& t : e.operands()) s += eval_at_origin(t);
      return s;
    }
    case ExprKind::kProduct: {
      Rational p = 1;
      for (const auto& f : e.operands()) p *= eval_at_origin(f);
      return p;
    }
    case ExprKind::kQuotient: {
      Rational n = eval_at_origin(e.operands()[0]);
      Rational d = eval_at_origin(e.operands()[1]);
      if (d == 0) throw EvaluationError("division by zero at the origin in " + to_string(e));
      return n / d;
    }
    case ExprKind::kPower:
      return rational_pow(eval_at_origin(e.operands()[0]), e.exponent());
    case ExprKind::kSin:
    case ExprKind::kCos:
    case ExprKind::kExp: {
      if (eval_at_origin(e.operands()[0]) != 0) {
        throw EvaluationError("transcendental function of an argument nonzero at the origin: " +
                              to_string(e));
      }
      return e.kind() == ExprKind::kSin ? 0 : 1;
    }
  }
  throw InternalError("eval_at_origin: unknown expression kind");
}

double evaluate(const Expr& e, double t, std::span<const double> x) {
  switch (e.kind()) {
    case ExprKind::kConstant:
      return e.value().get_d();
    case ExprKind::kVariable:
      return e.var().is_time() ? t : x[e.var().index - 1];
    case ExprKind::kNegation:
      return -evaluate(e.operands()[0], t, x);
    case ExprKind::kSum: {
      double s = 0;
      for (const auto& term : e.operands()) s += evaluate(term, t, x);
      return s;
    }
    case ExprKind::kProduct: {
      double p = 1;
      for (const auto& f : e.operands()) p *= evaluate(f, t, x);
      return p;
    }
    case ExprKind::kQuotient:
      return evaluate(e.operands()[0], t, x) / evaluate(e.operands()[1], t, x);
    case ExprKind::kPower:
      return std::pow(evaluate(e.operands()[0], t, x), static_cast<int>(e.exponent()));
    case ExprKind::kSin:
      return std::sin(evaluate(e.operands()[0], t, x));
    case ExprKind::kCos:
      return std::cos(evaluate(e.operands()[0], t, x));
    case ExprKind::kExp:
      return std::exp(evaluate(e.operands()[0], t, x));
  }
  throw InternalError("evaluate: unknown expression kind");
}

namespace {

Expr zero_state(const Expr& e) {
  switch (e.kind()) {
    case ExprKind::kConstant:
      return e;
    case ExprKind::kVariable:
      return e.var().is_time() ? e : Expr();
    case ExprKind::kPower:
      return Expr::power(zero_state(e.operands()[0]), e.exponent());
    default: {
      std::vector<Expr> ops;
      for (const auto& o : e.operands()) ops.push_back(zero_state(o));
      switch (e.kind()) {
        case ExprKind::kSum: return Expr::sum(std::move(ops));
        case ExprKind::kProduct: return Expr::product(std::move(ops));
        case ExprKind::kQuotient: return Expr::quotient(ops[0], ops[1]);
        case ExprKind::kSin: return Expr::sin(ops[0]);
        case ExprKind::kCos: return Expr::cos(ops[0]);
        case ExprKind::kExp: return Expr::exp(ops[0]);
        case ExprKind::kNegation: return Expr::negation(ops[0]);
        default: break;
      }
    }
  }
  throw InternalError("substitute_zero_state: unknown expression kind");
}

}  // namespace

Expr substitute_zero_state(const Expr& e) { return simplify(zero_state(e)); }

int max_state_index(const Expr& e) {
  if (e.kind() == ExprKind::kVariable) return e.var().index;
  int m = 0;
  for (const auto& o : e.operands()) m = std::max(m, max_state_index(o));
  return m;
}

// --- printing -------------------------------------------------------------

namespace {

bool is_atomic(const Expr& e) {
  switch (e.kind()) {
    case ExprKind::kVariable:
    case ExprKind::kSin:
    case ExprKind::kCos:
    case ExprKind::kExp:
      return true;
    case ExprKind::kConstant:
      return e.value() >= 0 && e.value().get_den() == 1;
    default:
      return false;
  }
}

std::string print(const Expr& e);

std::string wrapped(const Expr& e) { return is_atomic(e) ? print(e) : "(" + print(e) + ")"; }

std::string print(const Expr& e) {
  switch (e.kind()) {
    case ExprKind::kConstant:
      return to_string(e.value());
    case ExprKind::kVariable:
      return e.var().is_time() ? "t" : "x" + std::to_string(e.var().index);
    case ExprKind::kSum: {
      std::string out;
      for (std::size_t i = 0; i < e.operands().size(); ++i) {
        const Expr& term = e.operands()[i];
        if (i) out += " + ";
        out += term.kind() == ExprKind::kSum ? "(" + print(term) + ")" : print(term);
      }
      return out;
    }
    case ExprKind::kProduct: {
      std::string out;
      for (std::size_t i = 0; i < e.operands().size(); ++i) {
        const Expr& f = e.operands()[i];
        if (i) out += "*";
        if (i == 0 && f.is_constant()) {
          out += print(f);
        } else if (f.kind() == ExprKind::kPower) {
          out += print(f);
        } else {
          out += wrapped(f);
        }
      }
      return out;
    }
    case ExprKind::kQuotient:
      return wrapped(e.operands()[0]) + "/" + wrapped(e.operands()[1]);
    case ExprKind::kPower:
      return wrapped(e.operands()[0]) + "^" + std::to_string(e.exponent());
    case ExprKind::kSin:
      return "sin(" + print(e.operands()[0]) + ")";
    case ExprKind::kCos:
      return "cos(" + print(e.operands()[0]) + ")";
    case ExprKind::kExp:
      return "exp(" + print(e.operands()[0]) + ")";
    case ExprKind::kNegation: {
      const Expr& a = e.operands()[0];
      bool bare = a.kind() == ExprKind::kVariable || a.kind() == ExprKind::kPower ||
                  a.kind() == ExprKind::kSin || a.kind() == ExprKind::kCos || a.kind() == ExprKind::kExp;
      return "-" + (bare ? print(a) : "(" + print(a) + ")");
    }
  }
  return "?";
}

}  // namespace

std::string to_string(const Expr& e) { return print(e); }

}  // namespace homapprox
