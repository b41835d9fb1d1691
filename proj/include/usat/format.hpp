#ifndef USAT_FORMAT_HPP_
#define USAT_FORMAT_HPP_

#include <cstdint>
#include <string>

namespace usat {

// Shortest decimal text that reads back to the same double.
std::string format_number(double v);

// Exact percentage of count/total using integer arithmetic. Emits the
// shortest exact decimal when one exists within max_decimals places,
// otherwise rounds half-up to max_decimals. format_percent(6460, 100000)
// yields "6.46".
std::string format_percent(std::uint64_t count, std::uint64_t total,
                           int max_decimals = 6);

}  // namespace usat

#endif  // USAT_FORMAT_HPP_
