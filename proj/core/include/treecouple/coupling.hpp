#pragma once
#include "treecouple/broadcast.hpp"
#include "treecouple/classify.hpp"

#include <array>
#include <cstddef>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace treecouple {

enum class CouplingKind { Naive, Improved };

/**
 * Where a disagreement inside a block comes from. The first three are the
 * grandchild-level sources of the improved block; RejectedPartner is the
 * surplus good whose exchange with the rescuable pair was refused; ChildSlot
 * marks child-level disagreements (which never propagate, their lists agree);
 * Naive tags everything produced by the naive coupling.
 */
enum class DisagreementSource { NonRescuableBad, UnmatchedRescuable, UnmatchedFail, RejectedPartner, ChildSlot, Naive };

constexpr std::size_t kSourceCount = 6;
const char* source_name(DisagreementSource s);

/// One child per entry: parent_colour is the slot colour L(i), entries is the list L^i.
using ListFamily = std::vector<ColourList>;

struct DisagreementRecord {
  std::uint32_t level = 0;     // 1 = child of the block root, 2 = grandchild
  std::uint64_t position = 0;  // child p, or grandchild p*d + g
  DisagreementSource source = DisagreementSource::Naive;
};

struct CoupledBlock {
  DisagreementPair pair;
  std::uint32_t d = 0;
  std::uint32_t k = 0;
  std::vector<Colour> x_children, y_children;            // length d
  std::vector<std::vector<Colour>> x_grand, y_grand;      // d arrays of length d
  std::vector<DisagreementRecord> records;

  std::uint64_t grandchild_disagreements() const;
  std::array<std::uint64_t, kSourceCount> grandchild_by_source() const;
  bool locally_proper() const;
  bool records_exact() const;
};

namespace coupling {

/// Maximal coupling of uniform([k]\{a}) with uniform([k]\{b}); disagreements are (b, a).
std::pair<Colour, Colour> maximal_child_coupling(std::uint32_t k, Colour a, Colour b, Rng& rng);

/// Colour identification used by transposed pairs: c and q swapped in the
/// entries, a parent slot q becomes c.
ColourList relabel_cq(const ColourList& l, DisagreementPair pair);

/// Two naive levels below a disagreeing pair.
CoupledBlock naive_block(DisagreementPair pair, std::uint32_t d, std::uint32_t k, Rng& rng);

/// How the Y list at an index is obtained from the X side.
enum class Rule : std::uint8_t {
  Identity,           // same slot, same list
  MembershipRelabel,  // slot q -> c, list unchanged (non-bad membership index)
  Transposition,      // list relabelled by the c<->q swap; a membership slot q becomes c
  WholeSwap,          // good/fail exchange: Y at t is the X pair at f(t)
  RescueExchange,     // rescuable j and its partner t exchange lists
};

enum class SearchOutcome : std::uint8_t { Matched, Rejected, Exhausted };
const char* outcome_name(SearchOutcome o);

/**
 * Revealed predicates of the first phase.
 *
 * The X family is sampled in full and held here; every predicate below is a
 * function of it. The Y family is produced from it in the third phase by a
 * bijection of the finite families, which is what makes the Y marginal exact.
 */
struct PartialState {
  DisagreementPair pair;
  std::uint32_t d = 0;
  std::uint32_t k = 0;
  ListFamily x;

  std::vector<bool> membership;  // L_X(i) = q (and L_Y(i) = c)
  std::vector<bool> bad;
  std::vector<bool> rescuable;
  std::vector<bool> eligible;    // candidate whose list holds exactly one of c, q
  std::vector<bool> special;     // eligible and slot absent from its rescuable's list

  std::vector<std::size_t> rescuable_indices;             // ascending
  std::vector<ColourSet> unused;                          // per rescuable: [k]\{c,q} minus its list
  std::vector<std::vector<std::size_t>> partitions;       // A_j per rescuable, ascending
  std::vector<std::ptrdiff_t> owner;                      // rescuable slot of each candidate, -1 otherwise

  bool valid() const;
};

struct Association {
  std::vector<std::size_t> f;
  std::vector<Rule> rule;
  std::vector<DisagreementSource> delta_source;                   // meaningful for Transposition indices
  std::vector<std::pair<std::size_t, std::size_t>> matched_pairs;  // (good, fail-or-rescuable)
  std::vector<std::vector<std::size_t>> delta_sets;               // per rescuable
  std::vector<SearchOutcome> outcomes;                            // per rescuable
  // Per rescuable: orientation columns (x_bit, y_bit) in revelation order; the
  // first column is the rescuable pair itself, (1,0).
  std::vector<std::vector<std::pair<std::uint8_t, std::uint8_t>>> columns;

  bool is_involution() const;
};

PartialState phase1(DisagreementPair pair, std::uint32_t d, std::uint32_t k, Rng& rng);

/// Same predicates computed for a given X family; used by exhaustive checks.
PartialState phase1_from_family(DisagreementPair pair, std::uint32_t k, ListFamily x);

Association phase2(const PartialState& state);

/// Y family in index form: Y list at t is coupled with the X list at f(t).
ListFamily y_family(const PartialState& state, const Association& assoc);

CoupledBlock phase3(const PartialState& state, const Association& assoc, Rng& rng);

/// phase1 + phase2 + phase3; k < 4 falls back to naive_block.
CoupledBlock improved_block(DisagreementPair pair, std::uint32_t d, std::uint32_t k, Rng& rng);

/// The deterministic family map used by the improved block, X family -> Y family.
ListFamily family_map(DisagreementPair pair, std::uint32_t k, const ListFamily& x);

struct TreeRecord {
  std::uint64_t vertex = 0;
  std::uint32_t level = 0;
  DisagreementSource source = DisagreementSource::Naive;
};

struct CoupledTrees {
  Colouring x, y;
  std::vector<std::uint64_t> per_level;  // disagreements at each level 0..h
  std::vector<TreeRecord> records;
  bool fell_back_to_naive = false;
};

/// Largest tree the materialising drivers accept.
constexpr std::uint64_t kMaxMaterialised = 20'000'000;

CoupledTrees naive_couple_tree(const TreeShape& shape, std::uint32_t k, Colour c, Colour q, Rng& rng);
CoupledTrees couple_tree_improved(const TreeShape& shape, std::uint32_t k, Colour c, Colour q, Rng& rng);
CoupledTrees couple_tree(const TreeShape& shape, std::uint32_t k, Colour c, Colour q, CouplingKind kind, Rng& rng);

/// Disagreement counts only, following disagreeing pairs; agreeing subtrees are never sampled.
struct DisagreementProfile {
  std::vector<std::uint64_t> per_level;
  std::array<std::uint64_t, kSourceCount> by_source{};
  std::uint64_t blocks = 0;
  bool any_leaf_disagreement() const { return !per_level.empty() && per_level.back() > 0; }
};

DisagreementProfile disagreement_profile(const TreeShape& shape, std::uint32_t k, Colour c, Colour q,
                                         CouplingKind kind, Rng& rng);

} // namespace coupling
} // namespace treecouple
