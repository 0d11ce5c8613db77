#include "treecouple/classify.hpp"

#include <gtest/gtest.h>

#include <vector>

using namespace treecouple;

namespace {

// Direct count over all (k-1)^d lists; independent of the closed forms.
Rational brute_p_free(std::uint32_t d, std::uint32_t k) {
  const Colour parent = 1, target = 2;
  std::vector<Colour> w(d, 0);
  std::uint64_t total = 0, hits = 0;
  std::vector<Colour> pal;
  for (Colour a = 1; a <= k; ++a)
    if (a != parent)
      pal.push_back(a);
  std::vector<std::size_t> idx(d, 0);
  while (true) {
    bool has = false;
    for (auto i : idx)
      has |= pal[i] == target;
    ++total;
    hits += !has;
    std::size_t p = d;
    while (p > 0 && idx[p - 1] + 1 == pal.size())
      idx[--p] = 0;
    if (p == 0)
      break;
    ++idx[p - 1];
  }
  return ratio(static_cast<long>(hits), total);
}

} // namespace

TEST(Classify, BadAndRescuableByHand) {
  const DisagreementPair pr{1, 2};
  const ColourList bad_full{2, {1, 3, 4}};  // k=4: uses all of {1,3,4}
  const ColourList bad_resc{2, {1, 1, 3}};
  const ColourList not_bad{3, {1, 2, 4}};
  EXPECT_TRUE(classify::is_bad(bad_full, pr, Side::X));
  EXPECT_FALSE(classify::is_rescuable(bad_full, pr, Side::X, 4));
  EXPECT_TRUE(classify::is_rescuable(bad_resc, pr, Side::X, 4));
  EXPECT_FALSE(classify::is_bad(not_bad, pr, Side::X));
  // Y side: slot c and q among the entries.
  EXPECT_TRUE(classify::is_bad(ColourList{1, {2, 3}}, pr, Side::Y));
  EXPECT_FALSE(classify::is_bad(ColourList{1, {3, 4}}, pr, Side::Y));
}

TEST(Classify, SpecialGoodFail) {
  const DisagreementPair pr{1, 2};
  const ColourList ref{2, {1, 1, 3}};  // leaves 4 and 5 unused at k=5
  const ColourList good{4, {2, 3, 3}};
  const ColourList fail{5, {1, 3, 3}};
  const ColourList neither{4, {1, 2, 3}};
  const ColourList used_slot{3, {2, 4, 4}};
  EXPECT_TRUE(classify::is_good(good, ref, pr, Side::X));
  EXPECT_TRUE(classify::is_fail(fail, ref, pr, Side::X));
  EXPECT_FALSE(classify::is_special(neither, ref, pr, Side::X));
  EXPECT_FALSE(classify::is_special(used_slot, ref, pr, Side::X));
  const auto f = classify::classify_candidate(good, ref, 0, pr, Side::X, 5);
  EXPECT_TRUE(f.consistent());
  EXPECT_EQ(f.good_for, std::optional<std::size_t>(0));
  EXPECT_FALSE(f.fail_for.has_value());
}

TEST(Classify, ClosedFormsMatchBruteForce) {
  for (std::uint32_t d : {1u, 2u, 3u, 4u})
    for (std::uint32_t k : {3u, 4u, 6u}) {
      const Rational pf = brute_p_free(d, k);
      EXPECT_EQ(classify::p_free_exact(d, k).exact, pf) << d << "," << k;
      // Slot is q with probability 1/(k-1); then c appears unless missing.
      EXPECT_EQ(classify::p_bad_exact(d, k).exact, Rational(1, k - 1) * (1 - pf)) << d << "," << k;
    }
}

TEST(Classify, SmallValues) {
  EXPECT_EQ(classify::p_free_exact(2, 3).exact, Rational(1, 4));
  EXPECT_EQ(classify::p_bad_exact(1, 3).exact, Rational(1, 4));
  const auto eb = classify::expected_bad(30, 12);
  EXPECT_EQ(eb.value.exact, 30 * classify::p_bad_exact(30, 12).exact);
  EXPECT_LE(eb.value.exact, eb.bound.exact);
  EXPECT_THROW(classify::p_free_exact(3, 2), std::invalid_argument);
}
