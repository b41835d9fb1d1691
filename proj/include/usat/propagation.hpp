#ifndef USAT_PROPAGATION_HPP_
#define USAT_PROPAGATION_HPP_

#include <cstddef>
#include <cstdint>
#include <map>
#include <string>

#include "usat/expr.hpp"
#include "usat/repr.hpp"

namespace usat {

// Naive interval arithmetic: each operator is applied to its operand
// intervals independently, so repeated variables overestimate (a - a over
// [0, 1] gives [-1, 1]). Throws UnboundIdentifier, or DivisionByZeroInterval
// when a divisor interval contains zero.
Interval propagate_interval(const Expr& expr,
                            const std::map<std::string, Interval>& env);

struct MonteCarloResult {
  EmpiricalDistribution distribution;
  // Joint samples dropped because a division by exactly zero occurred.
  std::size_t excluded = 0;
};

// Draws n independent joint samples and evaluates expr on each. Every bound
// identifier (in name order, index i) is sampled from its own stream seeded
// with splitmix64(seed + i), so results do not depend on evaluation order.
// Throws as sample() does, UnboundIdentifier, and EvalError if every sample
// was excluded.
MonteCarloResult propagate_monte_carlo(
    const Expr& expr, const std::map<std::string, UncertaintyRepr>& env,
    std::size_t n, std::uint64_t seed);

std::uint64_t splitmix64(std::uint64_t x);

}  // namespace usat

#endif  // USAT_PROPAGATION_HPP_
