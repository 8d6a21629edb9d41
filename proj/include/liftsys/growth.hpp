#ifndef LIFTSYS_GROWTH_HPP
#define LIFTSYS_GROWTH_HPP

#include <cstdint>
#include <optional>
#include <vector>

namespace liftsys::growth {

using Sequence = std::vector<std::int64_t>;

inline constexpr int kDefaultWindow = 4;

// Iterated forward differences; k = 0 returns the input.
Sequence finite_differences(const Sequence& seq, int k);

// Degree estimates for n -> seq[n-1]. A degree of -1 means the tail is zero.
struct GrowthReport {
  Sequence sequence;
  int window = kDefaultWindow;
  // Smallest k whose (k+1)-th differences vanish on the last `window` values.
  std::optional<int> fd_degree;
  // Nearest integer to the fitted exponent of the log-log model.
  int loglog_degree = 0;
  double loglog_slope = 0.0;
  double loglog_residual = 0.0;
  bool agreement = false;
  // fd_degree when it agrees with loglog_degree, otherwise loglog_degree.
  int degree = 0;
};

// Throws InputError when seq.size() < window + 3 or window < 1.
GrowthReport growth_degree(const Sequence& seq, int window = kDefaultWindow);

}  // namespace liftsys::growth

#endif  // LIFTSYS_GROWTH_HPP
