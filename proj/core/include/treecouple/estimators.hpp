#pragma once
#include "treecouple/classify.hpp"
#include "treecouple/coupling.hpp"
#include "treecouple/stats.hpp"
#include "treecouple/tree_model.hpp"

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace treecouple::estimators {

/// Which (k, epsilon) parameterisation a bound uses.
///   V1: k = (1+eps) d / ln d, level rate (d^(-0.1 (eps-1)/(eps+1)))^(l/2)
///   V2: k = (2+eps) d / ln d, level rate (d^(-0.1 eps/(eps+2)))^floor(l/2)
enum class BoundVariant : std::uint8_t { V1, V2 };
const char* variant_name(BoundVariant v);

struct BoundParams {
  double epsilon = 1.0;
  BoundVariant variant = BoundVariant::V1;
};

/// Epsilon implied by (d, k) under a variant; may be <= 0.
double epsilon_from_k(std::uint32_t d, std::uint32_t k, BoundVariant v);
/// Smallest k with k >= (1+eps) d/ln d (V1) or (2+eps) d/ln d (V2).
std::uint32_t k_from_epsilon(std::uint32_t d, double epsilon, BoundVariant v);
BoundParams params_for(std::uint32_t d, std::uint32_t k, BoundVariant v, std::optional<double> epsilon = {});

/// Level bound of a variant at level l; NaN when epsilon <= 0.
double level_bound(std::uint32_t d, double epsilon, BoundVariant v, std::uint32_t level);

enum class Relation : std::uint8_t { None, AtMost, AtLeast, Equals };
enum class Verdict : std::uint8_t { NotApplicable, Consistent, Violated };
const char* relation_name(Relation r);
const char* verdict_name(Verdict v);

/// 4-s.e. rule. AtMost is violated when mean - 4 se > ref, AtLeast when
/// mean + 4 se < ref, Equals when |mean - ref| > 4 se. Non-finite refs are NA.
Verdict judge(double mean, double se, double ref, Relation rel);

struct EstimateReport {
  std::string name;
  std::uint64_t trials = 0;
  double mean = 0.0;
  double std_error = 0.0;
  std::optional<double> reference;
  std::string reference_label;
  Relation relation = Relation::None;
  Verdict verdict = Verdict::NotApplicable;
  std::optional<std::string> exact;                   // "p/q" when the reference is exact
  std::optional<std::pair<double, double>> wilson;    // frequencies below 1e-3
  std::uint64_t seed = 0;
  double wall_seconds = 0.0;

  void attach(double ref, std::string label, Relation rel);
};

struct RunOptions {
  std::uint64_t trials = 1000;
  std::uint64_t seed = 1;
  unsigned threads = 1;
};

struct LevelReport {
  std::vector<EstimateReport> levels;  // one per level 0..h
  std::vector<double> bound_v1, bound_v2;
  BoundParams params;
  double naive_ratio = 0.0;            // d/(k-1)
};

LevelReport estimate_level_disagreements(const TreeShape& shape, std::uint32_t k, Colour c, Colour q,
                                         CouplingKind kind, const RunOptions& opt,
                                         std::optional<BoundParams> params = {});

struct BranchingReport {
  EstimateReport improved;                            // grandchildren disagreeing per improved block
  std::array<EstimateReport, kSourceCount> by_source; // split of `improved`
  EstimateReport naive_child;                         // children disagreeing per naive block, vs d/(k-1)
  EstimateReport naive;                               // grandchildren per naive block, vs (d/(k-1))^2
  std::uint64_t bookkeeping_mismatches = 0;           // runs whose source split did not add up
};

BranchingReport estimate_branching(std::uint32_t d, std::uint32_t k, Colour c, Colour q, const RunOptions& opt);

struct ListStatsOptions {
  double beta_tail_x = 1.0;     // tail point (1+x) d/(k-1)
  double h_constant = 3.0;      // conditioning beta <= c ln d
  double f_tail_y = 0.5;
};

struct ListStatsReport {
  BoundParams params;
  EstimateReport p_free;         // c absent from a list with parent != c
  EstimateReport p_bad;          // per index: slot q and c in the list
  EstimateReport beta;           // bad lists per block
  EstimateReport beta_tail;
  EstimateReport f;              // free colours of a list
  EstimateReport f_tail;
  EstimateReport delta_k;        // bad list is rescuable
  EstimateReport rho_k;          // index is special for a given rescuable
  EstimateReport h;              // goods for the first rescuable
  EstimateReport h_tail;
};

ListStatsReport estimate_list_statistics(std::uint32_t d, std::uint32_t k, Colour c, Colour q,
                                         const RunOptions& opt, std::optional<BoundParams> params = {},
                                         const ListStatsOptions& lopt = {});

struct EventAReport {
  BoundParams params;
  EstimateReport e1, e2, e3, any;
};

EventAReport estimate_event_A(std::uint32_t d, std::uint32_t k, const RunOptions& opt,
                              std::optional<BoundParams> params = {});

struct GofReport {
  stats::ChiSquareResult x, y;
  std::uint64_t trials = 0;
  std::uint64_t seed = 0;
  std::size_t support = 0;
};

GofReport gof_marginal_test(const TreeShape& shape, std::uint32_t k, Colour root_colour, CouplingKind kind,
                            Colour counterpart, const RunOptions& opt);

EstimateReport estimate_tv_upper(const TreeShape& shape, std::uint32_t k, Colour c, Colour q, CouplingKind kind,
                                 const RunOptions& opt);

/// Mean |Delta| of the round construction with N columns, against the claimed decay.
EstimateReport estimate_smatrix_delta(std::size_t N, std::uint32_t cap_l, const RunOptions& opt);

} // namespace treecouple::estimators
