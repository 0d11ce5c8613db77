#pragma once
#include "treecouple/broadcast.hpp"
#include "treecouple/rational.hpp"

#include <cstddef>
#include <optional>

namespace treecouple {

enum class Side { X, Y };

/// Root colour c under X and q under Y.
struct DisagreementPair {
  Colour c = 1;
  Colour q = 2;
};

struct ListFlags {
  bool bad = false;
  bool rescuable = false;
  std::optional<std::size_t> special_for;
  std::optional<std::size_t> good_for;
  std::optional<std::size_t> fail_for;

  bool consistent() const;
};

namespace classify {

/// X: parent = q and c among entries. Y: parent = c and q among entries.
bool is_bad(const ColourList& list, DisagreementPair pair, Side side);

/// Bad and fewer than k-1 distinct entries.
bool is_rescuable(const ColourList& list, DisagreementPair pair, Side side, std::uint32_t k);

/// Exactly one of c, q among the entries (an XOR of the two membership bits).
bool exactly_one_root_colour(const ColourList& list, DisagreementPair pair);

/**
 * Candidate list (its parent_colour is the slot colour L(i)) tested against
 * the rescuable list of the opposite side. X: slot != q, slot not in the
 * reference, exactly one of c, q. Y: slot != c, otherwise the same.
 */
bool is_special(const ColourList& candidate, const ColourList& rescuable_ref, DisagreementPair pair, Side side);

/// Special and oriented towards the swap: X has q and not c; Y has c and not q.
bool is_good(const ColourList& candidate, const ColourList& rescuable_ref, DisagreementPair pair, Side side);

/// Special with the opposite orientation.
bool is_fail(const ColourList& candidate, const ColourList& rescuable_ref, DisagreementPair pair, Side side);

ListFlags classify_candidate(const ColourList& candidate, const ColourList& rescuable_ref, std::size_t ref_index,
                             DisagreementPair pair, Side side, std::uint32_t k);

/// Probability that a fixed non-parent colour is missing from a random list: (1 - 1/(k-1))^d.
ExactValue p_free_exact(std::uint32_t d, std::uint32_t k);

/// Probability that a slot is q and its list contains c: (1/(k-1))(1 - (1 - 1/(k-1))^d).
ExactValue p_bad_exact(std::uint32_t d, std::uint32_t k);

struct ExpectedBad {
  ExactValue value;  // d * p_bad
  ExactValue bound;  // d / (k-1)
};

ExpectedBad expected_bad(std::uint32_t d, std::uint32_t k);

} // namespace classify
} // namespace treecouple
