#include "homapprox/parser.hpp"

#include <cctype>
#include <string>

#include "homapprox/error.hpp"

namespace homapprox {

namespace {

class Parser {
 public:
  Parser(std::string_view text, int dimension) : text_(text), dimension_(dimension) {}

  Expr parse() {
    Expr e = expr();
    skip_space();
    if (pos_ != text_.size()) {
      throw ParseError(std::string("unexpected '") + text_[pos_] + "'", pos_);
    }
    return e;
  }

 private:
  void skip_space() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  bool accept(char c) {
    skip_space();
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  char peek() {
    skip_space();
    return pos_ < text_.size() ? text_[pos_] : '\0';
  }

  Expr expr() {
    std::vector<Expr> terms{term()};
    for (;;) {
      if (accept('+')) {
        terms.push_back(term());
      } else if (accept('-')) {
        Expr t = term();
        terms.push_back(t.is_constant() ? Expr::constant(-t.value()) : Expr::negation(t));
      } else {
        break;
      }
    }
    return Expr::sum(std::move(terms));
  }

  Expr term() {
    std::vector<Expr> factors{unary()};
    for (;;) {
      if (accept('*')) {
        factors.push_back(unary());
      } else if (peek() == '/') {
        std::size_t at = pos_;
        ++pos_;
        Expr den = unary();
        Expr num = Expr::product(std::move(factors));
        if (num.is_constant() && den.is_constant()) {
          if (den.value() == 0) throw ParseError("division by zero literal", at);
          factors = {Expr::constant(num.value() / den.value())};
        } else {
          factors = {Expr::quotient(std::move(num), std::move(den))};
        }
      } else {
        break;
      }
    }
    return Expr::product(std::move(factors));
  }

  Expr unary() {
    if (accept('-')) {
      Expr operand = unary();
      return operand.is_constant() ? Expr::constant(-operand.value()) : Expr::negation(operand);
    }
    return power();
  }

  Expr power() {
    Expr base = primary();
    if (accept('^')) {
      skip_space();
      std::size_t start = pos_;
      while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
      if (start == pos_) throw ParseError("exponent must be a non-negative integer literal", start);
      std::string digits(text_.substr(start, pos_ - start));
      if (digits.size() > 4) throw ParseError("exponent too large", start);
      return Expr::power(std::move(base), static_cast<unsigned>(std::stoul(digits)));
    }
    return base;
  }

  Expr primary() {
    skip_space();
    if (pos_ >= text_.size()) throw ParseError("unexpected end of input", pos_);
    char c = text_[pos_];
    if (c == '(') {
      ++pos_;
      Expr inner = expr();
      if (!accept(')')) throw ParseError("expected ')'", pos_);
      return inner;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
    if (std::isalpha(static_cast<unsigned char>(c))) return identifier();
    throw ParseError(std::string("unexpected '") + c + "'", pos_);
  }

  Expr number() {
    std::size_t start = pos_;
    while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    if (pos_ < text_.size() && text_[pos_] == '.') {
      ++pos_;
      while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    }
    std::string_view lit = text_.substr(start, pos_ - start);
    if (lit == ".") throw ParseError("malformed number", start);
    reject_implicit_multiplication();
    return Expr::constant(parse_rational(lit));
  }

  Expr identifier() {
    std::size_t start = pos_;
    while (pos_ < text_.size() && std::isalnum(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    std::string name(text_.substr(start, pos_ - start));
    if (name == "sin" || name == "cos" || name == "exp") {
      if (!accept('(')) throw ParseError("expected '(' after " + name, pos_);
      Expr arg = expr();
      if (!accept(')')) throw ParseError("expected ')'", pos_);
      reject_implicit_multiplication();
      if (name == "sin") return Expr::sin(std::move(arg));
      if (name == "cos") return Expr::cos(std::move(arg));
      return Expr::exp(std::move(arg));
    }
    if (name == "t") {
      reject_implicit_multiplication();
      return Expr::variable(Variable::t());
    }
    if (name.size() >= 2 && name[0] == 'x' &&
        name.find_first_not_of("0123456789", 1) == std::string::npos && name[1] != '0') {
      if (name.size() > 4) throw ParseError("variable index out of range: " + name, start);
      int index = std::stoi(name.substr(1));
      if (index < 1 || index > dimension_) {
        throw ParseError("variable index out of range: " + name + " (dimension " +
                             std::to_string(dimension_) + ")",
                         start);
      }
      reject_implicit_multiplication();
      return Expr::variable(Variable::x(index));
    }
    throw ParseError("unknown identifier '" + name + "'", start);
  }

  // A literal, variable or call directly followed by '(' or another operand.
  void reject_implicit_multiplication() {
    std::size_t save = pos_;
    skip_space();
    if (pos_ < text_.size()) {
      char c = text_[pos_];
      if (c == '(' || std::isalnum(static_cast<unsigned char>(c)) || c == '.') {
        throw ParseError("implicit multiplication is not allowed", pos_);
      }
    }
    pos_ = save;
  }

  std::string_view text_;
  int dimension_;
  std::size_t pos_ = 0;
};

}  // namespace

Expr parse_expr(std::string_view text, int dimension) {
  return Parser(text, dimension).parse();
}

}  // namespace homapprox
