#include "treecouple/tree_model.hpp"

#include <gtest/gtest.h>

using namespace treecouple;

TEST(TreeModel, CountsForSmallShapes) {
  EXPECT_EQ(tree_model::vertex_count({2, 2}), 7u);
  EXPECT_EQ(tree_model::vertex_count({3, 2}), 13u);
  EXPECT_EQ(tree_model::vertex_count({1, 5}), 6u);
  EXPECT_EQ(tree_model::vertex_count({100, 0}), 1u);
  EXPECT_EQ(tree_model::edge_count({2, 2}), 6u);
  EXPECT_EQ(tree_model::level_size({3, 2}, 2), 9u);
  EXPECT_EQ(tree_model::level_start({2, 2}, 2), 3u);
}

TEST(TreeModel, LevelRangeIsHalfOpen) {
  const auto r = tree_model::level_range({2, 2}, 2);
  EXPECT_EQ(r.first, 3u);
  EXPECT_EQ(r.end, 7u);
  EXPECT_EQ(r.size(), 4u);
}

TEST(TreeModel, ChildrenAndParentsAreInverse) {
  const TreeShape s{3, 3};
  const auto n = tree_model::vertex_count(s);
  for (std::uint64_t v = 0; v < n; ++v) {
    const auto kids = tree_model::children(s, v);
    if (tree_model::level_of(s, v) == s.height) {
      EXPECT_TRUE(kids.empty());
      continue;
    }
    ASSERT_EQ(kids.size(), 3u);
    for (auto u = kids.first; u < kids.end; ++u) {
      EXPECT_EQ(tree_model::parent_of(s, u), v);
      EXPECT_EQ(tree_model::level_of(s, u), tree_model::level_of(s, v) + 1);
    }
  }
}

TEST(TreeModel, LevelOfMatchesRanges) {
  for (const TreeShape s : {TreeShape{1, 4}, TreeShape{2, 4}, TreeShape{5, 3}}) {
    for (std::uint32_t l = 0; l <= s.height; ++l) {
      const auto r = tree_model::level_range(s, l);
      for (auto v = r.first; v < r.end; ++v)
        ASSERT_EQ(tree_model::level_of(s, v), l);
    }
    EXPECT_THROW(tree_model::level_of(s, tree_model::vertex_count(s)), std::out_of_range);
  }
}

TEST(TreeModel, RejectsInvalidAndHugeShapes) {
  EXPECT_THROW(tree_model::validate({0, 1}), std::invalid_argument);
  EXPECT_THROW(tree_model::vertex_count({1000, 10}), tree_model::CountOverflow);
}
