#include "treecouple/coupling.hpp"

#include <stdexcept>
#include <string>

namespace treecouple::coupling {

namespace {

struct TreeBuffers {
  CoupledTrees out;
  std::vector<bool> children_set;
};

TreeBuffers start_trees(const TreeShape& shape, std::uint32_t k, Colour c, Colour q) {
  broadcast::validate_palette(k);
  if (c == q)
    throw std::invalid_argument("coupled trees: c and q must differ");
  if (c == 0 || c > k || q == 0 || q > k)
    throw std::invalid_argument("coupled trees: root colours outside 1..k");
  const std::uint64_t n = tree_model::vertex_count(shape);
  if (n > kMaxMaterialised)
    throw std::length_error("coupled trees: " + std::to_string(n) + " vertices exceed the materialising limit");
  TreeBuffers b;
  b.out.x = {shape, std::vector<Colour>(n, 0)};
  b.out.y = {shape, std::vector<Colour>(n, 0)};
  b.out.x.colours[0] = c;
  b.out.y.colours[0] = q;
  b.out.per_level.assign(shape.height + 1, 0);
  b.children_set.assign(n, false);
  return b;
}

void identical_children(TreeBuffers& b, std::uint64_t v, std::uint32_t k, Rng& rng) {
  const auto kids = tree_model::children(b.out.x.shape, v);
  for (auto u = kids.first; u < kids.end; ++u)
    b.out.x.colours[u] = b.out.y.colours[u] = broadcast::sample_non_parent(k, b.out.x.colours[v], rng);
}

void maximal_children(TreeBuffers& b, std::uint64_t v, std::uint32_t k, Rng& rng) {
  const auto kids = tree_model::children(b.out.x.shape, v);
  const std::uint32_t level = tree_model::level_of(b.out.x.shape, v) + 1;
  for (auto u = kids.first; u < kids.end; ++u) {
    auto [xc, yc] = maximal_child_coupling(k, b.out.x.colours[v], b.out.y.colours[v], rng);
    b.out.x.colours[u] = xc;
    b.out.y.colours[u] = yc;
    if (xc != yc)
      b.out.records.push_back({u, level, DisagreementSource::Naive});
  }
}

void count_levels(TreeBuffers& b) {
  const TreeShape& shape = b.out.x.shape;
  for (std::uint32_t l = 0; l <= shape.height; ++l) {
    const auto r = tree_model::level_range(shape, l);
    std::uint64_t n = 0;
    for (auto v = r.first; v < r.end; ++v)
      n += (b.out.x.colours[v] != b.out.y.colours[v]);
    b.out.per_level[l] = n;
  }
}

} // namespace

CoupledTrees naive_couple_tree(const TreeShape& shape, std::uint32_t k, Colour c, Colour q, Rng& rng) {
  TreeBuffers b = start_trees(shape, k, c, q);
  if (shape.height > 0) {
    const std::uint64_t internal = tree_model::level_start(shape, shape.height);
    for (std::uint64_t v = 0; v < internal; ++v) {
      if (b.out.x.colours[v] == b.out.y.colours[v])
        identical_children(b, v, k, rng);
      else
        maximal_children(b, v, k, rng);
    }
  }
  count_levels(b);
  return std::move(b.out);
}

CoupledTrees couple_tree_improved(const TreeShape& shape, std::uint32_t k, Colour c, Colour q, Rng& rng) {
  if (k < 4) {
    CoupledTrees out = naive_couple_tree(shape, k, c, q, rng);
    out.fell_back_to_naive = true;
    return out;
  }
  TreeBuffers b = start_trees(shape, k, c, q);
  const std::uint32_t d = shape.degree;
  if (shape.height > 0) {
    const std::uint64_t internal = tree_model::level_start(shape, shape.height);
    for (std::uint64_t v = 0; v < internal; ++v) {
      if (b.children_set[v])
        continue;
      const Colour xv = b.out.x.colours[v], yv = b.out.y.colours[v];
      if (xv == yv) {
        identical_children(b, v, k, rng);
        continue;
      }
      const std::uint32_t level = tree_model::level_of(shape, v);
      if (level + 1 == shape.height) {
        maximal_children(b, v, k, rng);
        continue;
      }
      const CoupledBlock blk = improved_block({xv, yv}, d, k, rng);
      const std::uint64_t first_child = v * d + 1;
      for (std::uint32_t p = 0; p < d; ++p) {
        const std::uint64_t u = first_child + p;
        b.out.x.colours[u] = blk.x_children[p];
        b.out.y.colours[u] = blk.y_children[p];
        b.children_set[u] = true;
        for (std::uint32_t g = 0; g < d; ++g) {
          b.out.x.colours[u * d + 1 + g] = blk.x_grand[p][g];
          b.out.y.colours[u * d + 1 + g] = blk.y_grand[p][g];
        }
      }
      for (const auto& r : blk.records) {
        const std::uint64_t vertex =
            r.level == 1 ? first_child + r.position : (first_child + r.position / d) * d + 1 + r.position % d;
        b.out.records.push_back({vertex, level + r.level, r.source});
      }
    }
  }
  count_levels(b);
  return std::move(b.out);
}

CoupledTrees couple_tree(const TreeShape& shape, std::uint32_t k, Colour c, Colour q, CouplingKind kind, Rng& rng) {
  if (c == q) {
    CoupledTrees out;
    out.x = broadcast::sample_broadcast(shape, k, c, rng);
    out.y = out.x;
    out.per_level.assign(shape.height + 1, 0);
    return out;
  }
  return kind == CouplingKind::Naive ? naive_couple_tree(shape, k, c, q, rng)
                                     : couple_tree_improved(shape, k, c, q, rng);
}

DisagreementProfile disagreement_profile(const TreeShape& shape, std::uint32_t k, Colour c, Colour q,
                                         CouplingKind kind, Rng& rng) {
  tree_model::validate(shape);
  broadcast::validate_palette(k);
  DisagreementProfile prof;
  prof.per_level.assign(shape.height + 1, 0);
  if (c == q)
    return prof;
  prof.per_level[0] = 1;
  const std::uint32_t d = shape.degree;
  const bool improved = kind == CouplingKind::Improved && k >= 4;

  struct Pending {
    Colour x, y;
    std::uint32_t level;
  };
  std::vector<Pending> stack{{c, q, 0}};
  while (!stack.empty()) {
    const Pending cur = stack.back();
    stack.pop_back();
    if (cur.level >= shape.height)
      continue;
    if (!improved || cur.level + 1 == shape.height) {
      for (std::uint32_t p = 0; p < d; ++p) {
        auto [xc, yc] = maximal_child_coupling(k, cur.x, cur.y, rng);
        if (xc != yc) {
          ++prof.per_level[cur.level + 1];
          ++prof.by_source[static_cast<std::size_t>(DisagreementSource::Naive)];
          stack.push_back({xc, yc, cur.level + 1});
        }
      }
      continue;
    }
    const CoupledBlock blk = improved_block({cur.x, cur.y}, d, k, rng);
    ++prof.blocks;
    for (const auto& r : blk.records) {
      ++prof.per_level[cur.level + r.level];
      ++prof.by_source[static_cast<std::size_t>(r.source)];
      if (r.level == 2) {
        const auto p = r.position / d, g = r.position % d;
        stack.push_back({blk.x_grand[p][g], blk.y_grand[p][g], cur.level + 2});
      }
    }
  }
  return prof;
}

} // namespace treecouple::coupling
