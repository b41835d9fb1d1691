#include "usat/propagation.hpp"

#include <algorithm>
#include <vector>

#include "usat/error.hpp"

namespace usat {

namespace {

Interval mul(const Interval& a, const Interval& b) {
  const double p[] = {a.lo() * b.lo(), a.lo() * b.hi(), a.hi() * b.lo(), a.hi() * b.hi()};
  return Interval(*std::min_element(std::begin(p), std::end(p)),
                  *std::max_element(std::begin(p), std::end(p)));
}

// Corner quotients rather than a * (1 / b): the reciprocal would round
// before the product and could shrink the enclosure by an ulp.
Interval quotient(const Interval& a, const Interval& b) {
  const double q[] = {a.lo() / b.lo(), a.lo() / b.hi(), a.hi() / b.lo(), a.hi() / b.hi()};
  return Interval(*std::min_element(std::begin(q), std::end(q)),
                  *std::max_element(std::begin(q), std::end(q)));
}

}  // namespace

Interval propagate_interval(const Expr& e, const std::map<std::string, Interval>& env) {
  switch (e.kind()) {
    case Expr::Kind::kNumber:
      return Interval::point(e.value());
    case Expr::Kind::kVariable: {
      auto it = env.find(e.name());
      if (it == env.end()) throw UnboundIdentifier(e.name());
      return it->second;
    }
    case Expr::Kind::kNeg: {
      const Interval a = propagate_interval(e.lhs(), env);
      return Interval(-a.hi(), -a.lo());
    }
    default:
      break;
  }
  const Interval a = propagate_interval(e.lhs(), env);
  const Interval b = propagate_interval(e.rhs(), env);
  switch (e.kind()) {
    case Expr::Kind::kAdd:
      return Interval(a.lo() + b.lo(), a.hi() + b.hi());
    case Expr::Kind::kSub:
      return Interval(a.lo() - b.hi(), a.hi() - b.lo());
    case Expr::Kind::kMul:
      return mul(a, b);
    default:
      if (b.lo() <= 0.0 && 0.0 <= b.hi())
        throw DivisionByZeroInterval("divisor interval [" + std::to_string(b.lo()) +
                                     ", " + std::to_string(b.hi()) + "] contains zero");
      return quotient(a, b);
  }
}

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

MonteCarloResult propagate_monte_carlo(const Expr& expr,
                                       const std::map<std::string, UncertaintyRepr>& env,
                                       std::size_t n, std::uint64_t seed) {
  if (n == 0) throw InvalidArgument("sample count must be at least 1");
  for (const auto& name : identifiers(expr))
    if (!env.contains(name)) throw UnboundIdentifier(name);

  std::vector<std::pair<std::string, std::vector<double>>> columns;
  std::uint64_t index = 0;
  for (const auto& [name, repr] : env) {
    columns.emplace_back(name, sample(repr, n, splitmix64(seed + index)));
    ++index;
  }

  std::vector<double> values;
  values.reserve(n);
  std::size_t excluded = 0;
  std::map<std::string, double> point;
  for (std::size_t i = 0; i < n; ++i) {
    for (const auto& [name, column] : columns) point[name] = column[i];
    try {
      values.push_back(evaluate(expr, point));
    } catch (const EvalError&) {
      ++excluded;
    }
  }
  if (values.empty()) throw EvalError("every Monte-Carlo sample hit a division by zero");
  return MonteCarloResult{EmpiricalDistribution(std::move(values), "monte-carlo: " + to_string(expr)),
                          excluded};
}

}  // namespace usat
