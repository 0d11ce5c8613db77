#pragma once
#include <cstdint>
#include <stdexcept>
#include <utility>
#include <vector>

namespace treecouple::stats {

class InsufficientCells : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

struct ChiSquareResult {
  double statistic = 0.0;
  std::uint32_t dof = 0;
  double p_value = 1.0;
  std::size_t cells_before = 0;
  std::size_t cells_after = 0;
};

/// Goodness of fit of counts against cell probabilities. Cells whose expected
/// count is below `min_expected` are pooled; fewer than 2 cells left is refused.
ChiSquareResult chi_square_gof(const std::vector<std::uint64_t>& observed, const std::vector<double>& probs,
                               double min_expected = 5.0);

/// Wilson score interval for a binomial proportion.
std::pair<double, double> wilson_interval(std::uint64_t successes, std::uint64_t n, double z = 1.96);

struct KsResult {
  double statistic = 0.0;
  double p_value = 1.0;
};

/// One-sample Kolmogorov-Smirnov test against Uniform(0,1), asymptotic p-value.
KsResult ks_uniform(std::vector<double> sample);

__extension__ using Int128 = __int128;

/// Exact integer moments; merging shards in any order gives the same result.
struct IntMoments {
  std::uint64_t n = 0;
  Int128 sum = 0;
  Int128 sumsq = 0;

  void add(std::int64_t x) {
    ++n;
    sum += x;
    sumsq += static_cast<Int128>(x) * x;
  }
  void merge(const IntMoments& o) {
    n += o.n;
    sum += o.sum;
    sumsq += o.sumsq;
  }
  double mean() const;
  /// Sample standard deviation over sqrt(n); 0 when n < 2.
  double stderr_of_mean() const;
};

} // namespace treecouple::stats
