#include "usat/expr.hpp"

#include <cctype>
#include <charconv>
#include <cmath>

#include "usat/error.hpp"

namespace usat {

Expr Expr::number(double value) {
  if (!std::isfinite(value)) throw InvalidArgument("non-finite literal");
  return Expr(std::make_shared<const Node>(Node{Kind::kNumber, value, {}, {}, {}}));
}

Expr Expr::variable(std::string name) {
  return Expr(std::make_shared<const Node>(
      Node{Kind::kVariable, 0.0, std::move(name), {}, {}}));
}

Expr Expr::neg(Expr operand) {
  return Expr(std::make_shared<const Node>(
      Node{Kind::kNeg, 0.0, {}, std::make_shared<const Expr>(std::move(operand)), {}}));
}

Expr Expr::binary(Kind kind, Expr lhs, Expr rhs) {
  if (kind == Kind::kNumber || kind == Kind::kVariable || kind == Kind::kNeg)
    throw InvalidArgument("not a binary operator");
  return Expr(std::make_shared<const Node>(
      Node{kind, 0.0, {}, std::make_shared<const Expr>(std::move(lhs)),
           std::make_shared<const Expr>(std::move(rhs))}));
}

bool Expr::is_binary() const {
  switch (kind()) {
    case Kind::kAdd:
    case Kind::kSub:
    case Kind::kMul:
    case Kind::kDiv:
      return true;
    default:
      return false;
  }
}

bool operator==(const Expr& a, const Expr& b) {
  if (a.node_ == b.node_) return true;
  if (a.kind() != b.kind()) return false;
  switch (a.kind()) {
    case Expr::Kind::kNumber:
      return a.value() == b.value();
    case Expr::Kind::kVariable:
      return a.name() == b.name();
    case Expr::Kind::kNeg:
      return a.lhs() == b.lhs();
    default:
      return a.lhs() == b.lhs() && a.rhs() == b.rhs();
  }
}

namespace {

bool is_ident_start(char c) {
  return std::isalpha(static_cast<unsigned char>(c)) || c == '_';
}
bool is_ident_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_';
}
bool is_digit(char c) { return c >= '0' && c <= '9'; }

// Recursive-descent parser over the byte string.
class Parser {
 public:
  explicit Parser(std::string_view text) : text_(text) {}

  Expr parse() {
    Expr e = expr();
    skip_space();
    if (pos_ != text_.size()) fail("unexpected character");
    return e;
  }

 private:
  [[noreturn]] void fail(const char* what) const { throw ParseError(what, pos_); }

  void skip_space() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_])))
      ++pos_;
  }

  bool accept(char c) {
    skip_space();
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  Expr expr() {
    Expr lhs = term();
    for (;;) {
      if (accept('+')) {
        lhs = Expr::binary(Expr::Kind::kAdd, lhs, term());
      } else if (accept('-')) {
        lhs = Expr::binary(Expr::Kind::kSub, lhs, term());
      } else {
        return lhs;
      }
    }
  }

  Expr term() {
    Expr lhs = factor();
    for (;;) {
      if (accept('*')) {
        lhs = Expr::binary(Expr::Kind::kMul, lhs, factor());
      } else if (accept('/')) {
        lhs = Expr::binary(Expr::Kind::kDiv, lhs, factor());
      } else {
        return lhs;
      }
    }
  }

  Expr factor() {
    skip_space();
    if (pos_ >= text_.size()) fail("expected operand");
    const char c = text_[pos_];
    if (c == '-') {
      ++pos_;
      return Expr::neg(factor());
    }
    if (c == '(') {
      ++pos_;
      Expr inner = expr();
      if (!accept(')')) fail("expected ')'");
      return inner;
    }
    if (is_ident_start(c)) {
      const std::size_t start = pos_;
      while (pos_ < text_.size() && is_ident_char(text_[pos_])) ++pos_;
      return Expr::variable(std::string(text_.substr(start, pos_ - start)));
    }
    if (is_digit(c) || c == '.') return number();
    fail("expected operand");
  }

  Expr number() {
    const std::size_t start = pos_;
    std::size_t digits = 0;
    while (pos_ < text_.size() && is_digit(text_[pos_])) ++pos_, ++digits;
    if (pos_ < text_.size() && text_[pos_] == '.') {
      ++pos_;
      while (pos_ < text_.size() && is_digit(text_[pos_])) ++pos_, ++digits;
    }
    if (digits == 0) {
      pos_ = start;
      fail("malformed number");
    }
    if (pos_ < text_.size() && (text_[pos_] == 'e' || text_[pos_] == 'E')) {
      std::size_t p = pos_ + 1;
      if (p < text_.size() && (text_[p] == '+' || text_[p] == '-')) ++p;
      if (p >= text_.size() || !is_digit(text_[p])) {
        pos_ = p;
        fail("malformed exponent");
      }
      while (p < text_.size() && is_digit(text_[p])) ++p;
      pos_ = p;
    }
    double value = 0.0;
    const char* first = text_.data() + start;
    const char* last = text_.data() + pos_;
    auto [ptr, ec] = std::from_chars(first, last, value);
    if (ec != std::errc() || ptr != last || !std::isfinite(value)) {
      pos_ = start;
      fail("number out of range");
    }
    return Expr::number(value);
  }

  std::string_view text_;
  std::size_t pos_ = 0;
};

int precedence(const Expr& e) {
  switch (e.kind()) {
    case Expr::Kind::kAdd:
    case Expr::Kind::kSub:
      return 1;
    case Expr::Kind::kMul:
    case Expr::Kind::kDiv:
      return 2;
    case Expr::Kind::kNeg:
      return 3;
    default:
      return 4;
  }
}

std::string format_number(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

void print(const Expr& e, std::string& out) {
  auto wrapped = [&out](const Expr& child, bool parens) {
    if (parens) out += '(';
    print(child, out);
    if (parens) out += ')';
  };
  switch (e.kind()) {
    case Expr::Kind::kNumber:
      if (std::signbit(e.value())) {
        out += '(' + format_number(e.value()) + ')';
      } else {
        out += format_number(e.value());
      }
      return;
    case Expr::Kind::kVariable:
      out += e.name();
      return;
    case Expr::Kind::kNeg:
      out += '-';
      wrapped(e.lhs(), e.lhs().is_binary());
      return;
    default:
      break;
  }
  const int p = precedence(e);
  wrapped(e.lhs(), precedence(e.lhs()) < p);
  switch (e.kind()) {
    case Expr::Kind::kAdd: out += " + "; break;
    case Expr::Kind::kSub: out += " - "; break;
    case Expr::Kind::kMul: out += " * "; break;
    default: out += " / "; break;
  }
  wrapped(e.rhs(), precedence(e.rhs()) <= p);
}

void collect(const Expr& e, std::set<std::string>& names) {
  switch (e.kind()) {
    case Expr::Kind::kNumber:
      return;
    case Expr::Kind::kVariable:
      names.insert(e.name());
      return;
    case Expr::Kind::kNeg:
      collect(e.lhs(), names);
      return;
    default:
      collect(e.lhs(), names);
      collect(e.rhs(), names);
  }
}

}  // namespace

Expr parse_expression(std::string_view text) { return Parser(text).parse(); }

std::string to_string(const Expr& expr) {
  std::string out;
  print(expr, out);
  return out;
}

double evaluate(const Expr& e, const std::map<std::string, double>& env) {
  switch (e.kind()) {
    case Expr::Kind::kNumber:
      return e.value();
    case Expr::Kind::kVariable: {
      auto it = env.find(e.name());
      if (it == env.end()) throw UnboundIdentifier(e.name());
      return it->second;
    }
    case Expr::Kind::kNeg:
      return -evaluate(e.lhs(), env);
    case Expr::Kind::kAdd:
      return evaluate(e.lhs(), env) + evaluate(e.rhs(), env);
    case Expr::Kind::kSub:
      return evaluate(e.lhs(), env) - evaluate(e.rhs(), env);
    case Expr::Kind::kMul:
      return evaluate(e.lhs(), env) * evaluate(e.rhs(), env);
    case Expr::Kind::kDiv: {
      const double num = evaluate(e.lhs(), env);
      const double den = evaluate(e.rhs(), env);
      if (den == 0.0) throw EvalError("division by zero");
      return num / den;
    }
  }
  return 0.0;
}

std::set<std::string> identifiers(const Expr& expr) {
  std::set<std::string> names;
  collect(expr, names);
  return names;
}

}  // namespace usat
