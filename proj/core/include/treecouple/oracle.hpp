#pragma once
#include "treecouple/broadcast.hpp"
#include "treecouple/classify.hpp"
#include "treecouple/rational.hpp"
#include "treecouple/tree_model.hpp"

#include <cstdint>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace treecouple::oracle {

inline constexpr std::uint64_t kEnumerationBudget = 10'000'000;

class BudgetExceeded : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

class ContradictoryConstraints : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

/// Finite measure; support is kept in lexicographic order.
struct ExactMeasure {
  std::vector<std::vector<Colour>> support;
  std::vector<Rational> mass;

  Rational total() const;
  bool normalised() const { return total() == 1; }
  /// Mass of an element, 0 when it is not in the support.
  Rational at(const std::vector<Colour>& element) const;
};

/// Proper colourings (BFS vectors) with the root fixed; refuses when k^n > budget.
ExactMeasure enumerate_measure(const TreeShape& shape, std::uint32_t k, Colour root_colour,
                               std::uint64_t budget = kEnumerationBudget);

/// Product of channel rows along the edges of one colouring.
Rational broadcast_mass(const Colouring& colouring, std::uint32_t k);

/// Projection of enumerate_measure onto the last level.
ExactMeasure leaf_measure(const TreeShape& shape, std::uint32_t k, Colour root_colour,
                          std::uint64_t budget = kEnumerationBudget);

/// Half the l1 distance; both measures must be lexicographically sorted.
Rational tv_distance(const ExactMeasure& a, const ExactMeasure& b);

Rational tv_distance_leaves(const TreeShape& shape, std::uint32_t k, Colour c, Colour q,
                            std::uint64_t budget = kEnumerationBudget);

/// Conditioning events for a single list of d entries.
struct ListConstraints {
  std::optional<Colour> excluded_parent;
  std::vector<Colour> present;
  std::vector<Colour> absent;
  // At least one colour outside this set does not occur in the list (Q > 0).
  std::optional<std::vector<Colour>> unused_outside;

  std::string describe() const;
  bool admits(const std::vector<Colour>& entries, std::uint32_t k) const;
};

/// Uniform measure on the lists in [k]^d that satisfy the constraints.
ExactMeasure conditional_list_measure(std::uint32_t d, std::uint32_t k, const ListConstraints& constraints,
                                      std::uint64_t budget = kEnumerationBudget);

/// Element-wise image of a list measure under a colour map (support re-sorted).
ExactMeasure push_forward(const ExactMeasure& m, const std::function<Colour(Colour)>& map);

struct IdentityCheck {
  std::string name;
  std::uint32_t d = 0;
  std::uint32_t k = 0;
  bool equal = false;
  Rational tv;        // 0 iff equal
  std::size_t cases = 0;
};

/// Rescuable list against a good partner of the other side, per slot colour;
/// plus the side mirror and the c<->q relabelling between the two rescuable laws.
std::vector<IdentityCheck> rescuable_vs_good_checks(std::uint32_t d, std::uint32_t k, DisagreementPair pair = {});

/// Good against fail of the opposite side, as joint (slot, list) laws, for
/// every unused set a rescuable list can leave.
std::vector<IdentityCheck> good_vs_fail_checks(std::uint32_t d, std::uint32_t k, DisagreementPair pair = {});

/// Two conditionings that are not equal in law: dropping the slot-absence
/// event (Q > 0 no longer subsumed), and drawing the partner slot uniformly
/// from the rescuable list's unused set.
std::vector<IdentityCheck> conditioning_gap_report(std::uint32_t d, std::uint32_t k, DisagreementPair pair = {});

} // namespace treecouple::oracle
