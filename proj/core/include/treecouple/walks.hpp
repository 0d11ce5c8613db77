#pragma once
#include "treecouple/rational.hpp"
#include "treecouple/rng.hpp"

#include <cstddef>
#include <cstdint>
#include <utility>
#include <vector>

namespace treecouple::walks {

/// Symmetric +-1 walk from 0, absorbed at -1, truncated after `cap` steps.
struct AbsorbedWalkSpec {
  std::uint32_t cap = 1;
};

/// Pr[first visit to -1 happens at step 2i+1] = 2^-(2i+1) C(2i,i)/(i+1).
Rational first_passage_prob(std::uint32_t i);

struct AbsorbedWalkResult {
  std::uint32_t cap = 0;
  std::vector<Rational> distribution;  // entry p+1 holds Pr[W_cap = p], p = -1..cap
  Rational absorbed;                   // Pr[W_cap = -1]
  Rational survival;                   // Pr[T > cap]
  Rational expected_stopped_plus_one;  // E[W_cap + 1]; absorbed runs contribute 0
  Rational conditional_mean;           // E[W_cap | T > cap]
};

AbsorbedWalkResult absorbed_walk_dp(AbsorbedWalkSpec spec);

/// Value 2.3/pi that the stopped-walk expectation is claimed to stay below.
double claimed_stopped_bound();

struct PositiveMeanReport {
  std::uint32_t cap = 0;
  Rational exact;               // E[W_cap | never absorbed]
  double bound = 0.0;           // sqrt(2 cap/pi) (1 + 3/(2 cap))
  bool exceeds_bound = false;
};

PositiveMeanReport conditional_positive_mean(std::uint32_t cap);

/// Orientation columns (x_bit, y_bit); (1,0) raises the running sum, (0,1) lowers it.
using Column = std::pair<std::uint8_t, std::uint8_t>;

struct SMatrix {
  std::vector<Column> columns;             // revealed columns, first is (1,0)
  std::size_t N = 0;                       // column budget
  std::vector<std::size_t> round_starts;   // index of the first column of each round
  std::size_t identical_tail = 0;          // columns after the sum hit 0 (x_bit = y_bit, bits not drawn)
};

struct SMatrixRun {
  SMatrix matrix;
  std::int64_t delta = 0;  // sum of x_bit - y_bit
};

/// Round construction: each round spawns one sub-walk per unit of the current
/// sum; a sub-walk stops at relative -1 or after cap_l columns; the budget N
/// is shared across rounds.
SMatrixRun s_matrix_run(std::size_t N, std::uint32_t cap_l, Rng& rng);

/// Sum of x_bit - y_bit over a column sequence. Throws std::logic_error if a
/// complementary column follows the first return of the running sum to 0.
std::int64_t stopped_walk_value(const std::vector<Column>& columns);

/// (2.3/pi)^(0.43 ln N), the decay claimed for E|Delta| with N columns.
double claimed_delta_decay(std::size_t N);

} // namespace treecouple::walks
