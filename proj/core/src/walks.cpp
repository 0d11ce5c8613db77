#include "treecouple/walks.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace treecouple::walks {

Rational first_passage_prob(std::uint32_t i) {
  BigInt den;
  mpz_ui_pow_ui(den.get_mpz_t(), 2, 2 * i + 1);
  den *= (i + 1);
  Rational r(binomial(2 * i, i), den);
  r.canonicalize();
  return r;
}

AbsorbedWalkResult absorbed_walk_dp(AbsorbedWalkSpec spec) {
  if (spec.cap < 1)
    throw std::invalid_argument("absorbed_walk_dp: cap must be >= 1");
  const std::uint32_t cap = spec.cap;
  std::vector<Rational> cur(cap + 2, Rational(0)), next(cap + 2);
  cur[1] = 1;  // position 0
  const Rational half(1, 2);
  for (std::uint32_t step = 0; step < cap; ++step) {
    for (auto& m : next)
      m = 0;
    next[0] = cur[0];
    for (std::uint32_t idx = 1; idx < cap + 1; ++idx) {
      if (cur[idx] == 0)
        continue;
      const Rational h = cur[idx] * half;
      next[idx - 1] += h;
      next[idx + 1] += h;
    }
    std::swap(cur, next);
  }
  AbsorbedWalkResult r;
  r.cap = cap;
  r.distribution = cur;
  r.absorbed = cur[0];
  r.survival = 1 - r.absorbed;
  Rational e = 0, pos_mass = 0;
  for (std::uint32_t idx = 1; idx < cap + 2; ++idx) {
    e += cur[idx] * static_cast<long>(idx);  // (p + 1) with p = idx - 1
    pos_mass += cur[idx] * static_cast<long>(idx - 1);
  }
  r.expected_stopped_plus_one = e;
  r.conditional_mean = r.survival == 0 ? Rational(0) : Rational(pos_mass / r.survival);
  r.expected_stopped_plus_one.canonicalize();
  r.conditional_mean.canonicalize();
  return r;
}

double claimed_stopped_bound() { return 2.3 / std::numbers::pi; }

PositiveMeanReport conditional_positive_mean(std::uint32_t cap) {
  const AbsorbedWalkResult dp = absorbed_walk_dp({cap});
  PositiveMeanReport rep;
  rep.cap = cap;
  rep.exact = dp.conditional_mean;
  rep.bound = std::sqrt(2.0 * cap / std::numbers::pi) * (1.0 + 3.0 / (2.0 * cap));
  rep.exceeds_bound = to_double(rep.exact) > rep.bound;
  return rep;
}

SMatrixRun s_matrix_run(std::size_t N, std::uint32_t cap_l, Rng& rng) {
  if (N < 1 || cap_l < 1)
    throw std::invalid_argument("s_matrix_run: N and cap_l must be >= 1");
  SMatrixRun run;
  SMatrix& m = run.matrix;
  m.N = N;
  m.columns.reserve(std::min<std::size_t>(N, 4096));
  m.columns.emplace_back(1, 0);
  std::int64_t sum = 1;
  while (sum > 0 && m.columns.size() < N) {
    m.round_starts.push_back(m.columns.size());
    const std::int64_t walks_this_round = sum;
    for (std::int64_t s = 0; s < walks_this_round && m.columns.size() < N; ++s) {
      std::int64_t rel = 0;
      for (std::uint32_t len = 0; len < cap_l && m.columns.size() < N; ++len) {
        const bool up = rng.coin();
        m.columns.emplace_back(up ? 1 : 0, up ? 0 : 1);
        rel += up ? 1 : -1;
        sum += up ? 1 : -1;
        if (rel == -1)
          break;
      }
    }
  }
  m.identical_tail = N - m.columns.size();
  run.delta = sum;
  return run;
}

std::int64_t stopped_walk_value(const std::vector<Column>& columns) {
  std::int64_t sum = 0;
  bool hit_zero = false;
  for (const auto& [x, y] : columns) {
    if (hit_zero && x != y)
      throw std::logic_error("stopped_walk_value: complementary column after the sum returned to 0");
    sum += static_cast<std::int64_t>(x) - static_cast<std::int64_t>(y);
    if (sum == 0)
      hit_zero = true;
  }
  return sum;
}

double claimed_delta_decay(std::size_t N) {
  return std::pow(2.3 / std::numbers::pi, 0.43 * std::log(static_cast<double>(N)));
}

} // namespace treecouple::walks
