#include "treecouple/stats.hpp"

#include <boost/math/distributions/chi_squared.hpp>

#include <algorithm>
#include <cmath>
#include <numeric>

namespace treecouple::stats {

ChiSquareResult chi_square_gof(const std::vector<std::uint64_t>& observed, const std::vector<double>& probs,
                               double min_expected) {
  if (observed.size() != probs.size())
    throw std::invalid_argument("chi_square_gof: observed and probs differ in length");
  const double n = static_cast<double>(std::accumulate(observed.begin(), observed.end(), std::uint64_t{0}));
  if (n <= 0)
    throw std::invalid_argument("chi_square_gof: no observations");

  std::vector<double> exp_cells, obs_cells;
  double pool_e = 0, pool_o = 0;
  for (std::size_t i = 0; i < probs.size(); ++i) {
    const double e = probs[i] * n;
    if (e < min_expected) {
      pool_e += e;
      pool_o += static_cast<double>(observed[i]);
    } else {
      exp_cells.push_back(e);
      obs_cells.push_back(static_cast<double>(observed[i]));
    }
  }
  if (pool_e > 0 || pool_o > 0) {
    if (pool_e >= min_expected || exp_cells.empty()) {
      exp_cells.push_back(pool_e);
      obs_cells.push_back(pool_o);
    } else {
      // Fold an undersized pool into the smallest surviving cell.
      const auto it = std::min_element(exp_cells.begin(), exp_cells.end());
      const auto idx = static_cast<std::size_t>(it - exp_cells.begin());
      exp_cells[idx] += pool_e;
      obs_cells[idx] += pool_o;
    }
  }
  if (exp_cells.size() < 2)
    throw InsufficientCells("chi_square_gof: fewer than 2 cells after pooling");

  ChiSquareResult r;
  r.cells_before = probs.size();
  r.cells_after = exp_cells.size();
  for (std::size_t i = 0; i < exp_cells.size(); ++i) {
    if (exp_cells[i] <= 0) {
      if (obs_cells[i] > 0) {
        r.statistic = INFINITY;
        r.p_value = 0.0;
      }
      continue;
    }
    const double diff = obs_cells[i] - exp_cells[i];
    r.statistic += diff * diff / exp_cells[i];
  }
  r.dof = static_cast<std::uint32_t>(exp_cells.size() - 1);
  if (std::isfinite(r.statistic))
    r.p_value = boost::math::cdf(boost::math::complement(boost::math::chi_squared(r.dof), r.statistic));
  return r;
}

std::pair<double, double> wilson_interval(std::uint64_t successes, std::uint64_t n, double z) {
  if (n == 0)
    return {0.0, 1.0};
  const double nn = static_cast<double>(n);
  const double p = static_cast<double>(successes) / nn;
  const double z2 = z * z;
  const double centre = (p + z2 / (2 * nn)) / (1 + z2 / nn);
  const double half = z * std::sqrt(p * (1 - p) / nn + z2 / (4 * nn * nn)) / (1 + z2 / nn);
  return {std::max(0.0, centre - half), std::min(1.0, centre + half)};
}

KsResult ks_uniform(std::vector<double> sample) {
  if (sample.empty())
    throw std::invalid_argument("ks_uniform: empty sample");
  std::sort(sample.begin(), sample.end());
  const double n = static_cast<double>(sample.size());
  double dmax = 0;
  for (std::size_t i = 0; i < sample.size(); ++i) {
    const double u = std::clamp(sample[i], 0.0, 1.0);
    dmax = std::max({dmax, (i + 1) / n - u, u - i / n});
  }
  const double sn = std::sqrt(n);
  const double lambda = (sn + 0.12 + 0.11 / sn) * dmax;
  double p = 0;
  for (int j = 1; j <= 100; ++j) {
    const double term = std::exp(-2.0 * j * j * lambda * lambda);
    p += (j % 2 ? 2.0 : -2.0) * term;
    if (term < 1e-12)
      break;
  }
  KsResult r;
  r.statistic = dmax;
  r.p_value = lambda < 1e-3 ? 1.0 : std::clamp(p, 0.0, 1.0);
  return r;
}

double IntMoments::mean() const { return n ? static_cast<double>(sum) / static_cast<double>(n) : 0.0; }

double IntMoments::stderr_of_mean() const {
  if (n < 2)
    return 0.0;
  // n * sumsq - sum^2 is exact in 128 bits for the counts used here.
  const Int128 num = static_cast<Int128>(n) * sumsq - sum * sum;
  const long double nn = static_cast<long double>(n);
  const long double var = static_cast<long double>(num) / (nn * (nn - 1));
  return var <= 0 ? 0.0 : static_cast<double>(std::sqrt(var / nn));
}

} // namespace treecouple::stats
