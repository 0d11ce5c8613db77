#include "treecouple/coupling.hpp"
#include "treecouple/stats.hpp"
#include "treecouple/walks.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <map>
#include <numeric>
#include <vector>

using namespace treecouple;
using namespace treecouple::coupling;

namespace {

// Lists below a vertex coloured `root`: slot off root, entries off slot.
// Index = slot rank, then entries in base k-1, most significant first.
struct ListCodec {
  std::uint32_t d, k;
  std::uint64_t per_list() const {
    std::uint64_t n = 1;
    for (std::uint32_t i = 0; i <= d; ++i)
      n *= k - 1;
    return n;
  }
  static std::uint32_t rank(Colour a, Colour skip) { return a < skip ? a - 1 : a - 2; }
  static Colour unrank(std::uint32_t r, Colour skip) { return r + 1 < skip ? r + 1 : r + 2; }

  std::uint64_t encode(const ColourList& l, Colour root) const {
    std::uint64_t idx = rank(l.parent_colour, root);
    for (Colour e : l.entries)
      idx = idx * (k - 1) + rank(e, l.parent_colour);
    return idx;
  }
  ColourList decode(std::uint64_t idx, Colour root) const {
    ColourList l;
    l.entries.assign(d, 0);
    for (std::uint32_t i = d; i-- > 0;) {
      l.entries[i] = static_cast<Colour>(idx % (k - 1));
      idx /= k - 1;
    }
    l.parent_colour = unrank(static_cast<std::uint32_t>(idx), root);
    for (auto& e : l.entries)
      e = unrank(e, l.parent_colour);
    return l;
  }
};

bool y_list_ok(const ColourList& l, DisagreementPair pr, std::uint32_t d, std::uint32_t k) {
  return l.parent_colour != pr.q && l.entries.size() == d && l.valid(k);
}

// Every X family maps to a distinct valid Y family: a bijection between two
// finite sets of equal size.
void exhaustive_bijection(std::uint32_t d, std::uint32_t k) {
  const DisagreementPair pr{1, 2};
  const ListCodec codec{d, k};
  const std::uint64_t L = codec.per_list();
  std::uint64_t families = 1;
  for (std::uint32_t i = 0; i < d; ++i)
    families *= L;
  std::vector<bool> hit(families, false);
  std::uint64_t collisions = 0, invalid = 0;
  ListFamily x(d);
  for (std::uint64_t f = 0; f < families; ++f) {
    std::uint64_t rest = f;
    for (std::uint32_t i = d; i-- > 0;) {
      x[i] = codec.decode(rest % L, pr.c);
      rest /= L;
    }
    const ListFamily y = family_map(pr, k, x);
    std::uint64_t code = 0;
    bool ok = y.size() == d;
    for (std::uint32_t i = 0; i < d && ok; ++i) {
      ok = y_list_ok(y[i], pr, d, k);
      code = code * L + (ok ? codec.encode(y[i], pr.q) : 0);
    }
    if (!ok) {
      ++invalid;
      continue;
    }
    collisions += hit[code];
    hit[code] = true;
  }
  EXPECT_EQ(invalid, 0u) << "d=" << d << " k=" << k;
  EXPECT_EQ(collisions, 0u) << "d=" << d << " k=" << k;
}

void block_invariants(std::uint32_t d, std::uint32_t k, int reps, std::uint64_t seed) {
  const DisagreementPair pr{1, 2};
  for (int r = 0; r < reps; ++r) {
    Rng rng = Rng::for_trial(seed, r);
    const PartialState st = phase1(pr, d, k, rng);
    ASSERT_TRUE(st.valid());
    const Association as = phase2(st);
    ASSERT_TRUE(as.is_involution());
    const ListFamily y = y_family(st, as);
    for (const auto& l : y)
      ASSERT_TRUE(y_list_ok(l, pr, d, k));
    // Delta size against the stopped walk over the revealed orientation columns.
    for (std::size_t i = 0; i < st.rescuable_indices.size(); ++i) {
      const std::int64_t walk = walks::stopped_walk_value(as.columns[i]);
      const std::int64_t extra = as.outcomes[i] == SearchOutcome::Rejected ? 2 : 0;
      ASSERT_EQ(static_cast<std::int64_t>(as.delta_sets[i].size()), walk + extra);
      ASSERT_EQ(as.outcomes[i] == SearchOutcome::Matched, as.delta_sets[i].empty());
    }
    const CoupledBlock blk = phase3(st, as, rng);
    ASSERT_TRUE(blk.locally_proper());
    ASSERT_TRUE(blk.records_exact());
    std::uint64_t total = 0;
    for (auto n : blk.grandchild_by_source())
      total += n;
    ASSERT_EQ(total, blk.grandchild_disagreements());
  }
}

} // namespace

TEST(Coupling, MaximalChildCoupling) {
  Rng rng(1);
  int disagree = 0;
  const int n = 40000;
  for (int i = 0; i < n; ++i) {
    const auto [x, y] = maximal_child_coupling(5, 1, 2, rng);
    ASSERT_NE(x, 1u);
    ASSERT_NE(y, 2u);
    disagree += x != y;
    if (x != y)
      ASSERT_TRUE(x == 2 && y == 1);
  }
  EXPECT_NEAR(disagree / double(n), 0.25, 0.01);
}

TEST(Coupling, NaiveBlockIsProperAndExact) {
  for (int r = 0; r < 200; ++r) {
    Rng rng = Rng::for_trial(2, r);
    const auto blk = naive_block({1, 2}, 6, 4, rng);
    ASSERT_TRUE(blk.locally_proper());
    ASSERT_TRUE(blk.records_exact());
  }
}

TEST(Coupling, FamilyMapIsBijection_d2_k4) { exhaustive_bijection(2, 4); }
TEST(Coupling, FamilyMapIsBijection_d2_k5) { exhaustive_bijection(2, 5); }
TEST(Coupling, FamilyMapIsBijection_d3_k4) { exhaustive_bijection(3, 4); }
TEST(Coupling, FamilyMapIsBijection_d3_k5) { exhaustive_bijection(3, 5); }

TEST(Coupling, BlockInvariantsSmall) { block_invariants(4, 4, 3000, 10); }
TEST(Coupling, BlockInvariantsMid) { block_invariants(20, 11, 1000, 11); }
TEST(Coupling, BlockInvariantsLargeK) { block_invariants(10, 50, 1000, 12); }
TEST(Coupling, BlockInvariantsDesk) { block_invariants(100, 60, 200, 13); }

TEST(Coupling, ImprovedFallsBackBelowFourColours) {
  Rng rng(3);
  const auto blk = improved_block({1, 2}, 3, 3, rng);
  EXPECT_TRUE(blk.locally_proper());
  EXPECT_THROW(phase1({1, 2}, 3, 3, rng), std::invalid_argument);
}

TEST(Coupling, TreeDriversAgreeWithProfile) {
  // different draw orders, so compare in law only
  const TreeShape s{3, 4};
  const int trials = 6000;
  for (CouplingKind kind : {CouplingKind::Naive, CouplingKind::Improved}) {
    std::vector<stats::IntMoments> tm(s.height + 1), pm(s.height + 1);
    for (int r = 0; r < trials; ++r) {
      Rng a = Rng::for_trial(4, r), b = Rng::for_trial(44, r);
      const auto t = couple_tree(s, 5, 1, 2, kind, a);
      const auto p = disagreement_profile(s, 5, 1, 2, kind, b);
      ASSERT_TRUE(t.x.is_proper());
      ASSERT_TRUE(t.y.is_proper());
      ASSERT_EQ(t.records.size() + 1, std::accumulate(t.per_level.begin(), t.per_level.end(), std::uint64_t{0}));
      for (std::uint32_t l = 0; l <= s.height; ++l) {
        std::uint64_t n = 0;
        const auto range = tree_model::level_range(s, l);
        for (auto v = range.first; v < range.end; ++v)
          n += t.x.colours[v] != t.y.colours[v];
        ASSERT_EQ(n, t.per_level[l]);
        tm[l].add(static_cast<std::int64_t>(t.per_level[l]));
        pm[l].add(static_cast<std::int64_t>(p.per_level[l]));
      }
    }
    for (std::uint32_t l = 0; l <= s.height; ++l) {
      const double se = std::hypot(tm[l].stderr_of_mean(), pm[l].stderr_of_mean());
      EXPECT_LE(std::abs(tm[l].mean() - pm[l].mean()), 5 * se + 1e-12) << "level " << l;
    }
  }
}

TEST(Coupling, IdentityWhenRootsAgree) {
  Rng rng(5);
  const auto t = couple_tree({2, 5}, 4, 3, 3, CouplingKind::Improved, rng);
  EXPECT_EQ(t.x.colours, t.y.colours);
  EXPECT_TRUE(t.records.empty());
}

TEST(Coupling, MaterialisingGuard) {
  Rng rng(6);
  EXPECT_THROW(couple_tree({100, 4}, 60, 1, 2, CouplingKind::Naive, rng), std::length_error);
}
