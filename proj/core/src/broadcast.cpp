#include "treecouple/broadcast.hpp"

#include <stdexcept>
#include <string>

namespace treecouple {

bool Colouring::is_proper() const {
  const std::uint64_t n = colours.size();
  for (std::uint64_t v = 1; v < n; ++v)
    if (colours[v] == colours[tree_model::parent_of(shape, v)])
      return false;
  return true;
}

bool ColourList::contains(Colour c) const {
  for (Colour e : entries)
    if (e == c)
      return true;
  return false;
}

std::size_t ColourList::count(Colour c) const {
  std::size_t n = 0;
  for (Colour e : entries)
    n += (e == c);
  return n;
}

ColourSet ColourList::colour_set(std::uint32_t k) const {
  ColourSet s(k);
  for (Colour e : entries)
    s.insert(e);
  return s;
}

bool ColourList::valid(std::uint32_t k) const {
  if (parent_colour == 0 || parent_colour > k)
    return false;
  for (Colour e : entries)
    if (e == 0 || e > k || e == parent_colour)
      return false;
  return true;
}

namespace broadcast {

void validate_palette(std::uint32_t k) {
  if (k < 2)
    throw std::invalid_argument("palette needs k >= 2, got " + std::to_string(k));
}

std::vector<Rational> transition_row(std::uint32_t k, Colour parent) {
  validate_palette(k);
  if (parent == 0 || parent > k)
    throw std::invalid_argument("transition_row: parent colour outside 1..k");
  std::vector<Rational> row(k, Rational(1, k - 1));
  row[parent - 1] = 0;
  return row;
}

Colour sample_non_parent(std::uint32_t k, Colour parent, Rng& rng) {
  auto c = static_cast<Colour>(rng.below(k - 1)) + 1;
  return c >= parent ? c + 1 : c;
}

void fill_subtree(Colouring& colouring, std::uint64_t v, std::uint32_t k, Rng& rng) {
  const TreeShape& shape = colouring.shape;
  const std::uint32_t top = tree_model::level_of(shape, v);
  if (top >= shape.height)
    return;
  // BFS over the subtree level by level: descendants of v at depth t form a
  // contiguous index block.
  std::uint64_t first = v;
  std::uint64_t width = 1;
  for (std::uint32_t level = top; level < shape.height; ++level) {
    for (std::uint64_t u = first; u < first + width; ++u) {
      const std::uint64_t c0 = u * shape.degree + 1;
      for (std::uint32_t i = 0; i < shape.degree; ++i)
        colouring.colours[c0 + i] = sample_non_parent(k, colouring.colours[u], rng);
    }
    first = first * shape.degree + 1;
    width *= shape.degree;
  }
}

Colouring sample_broadcast(const TreeShape& shape, std::uint32_t k, Colour root_colour, Rng& rng) {
  validate_palette(k);
  if (root_colour == 0 || root_colour > k)
    throw std::invalid_argument("sample_broadcast: root colour outside 1..k");
  Colouring out{shape, std::vector<Colour>(tree_model::vertex_count(shape), 0)};
  out.colours[0] = root_colour;
  fill_subtree(out, 0, k, rng);
  return out;
}

ColourList sample_list(std::uint32_t k, Colour parent, std::uint32_t d, Rng& rng) {
  validate_palette(k);
  ColourList list{parent, std::vector<Colour>(d)};
  for (auto& e : list.entries)
    e = sample_non_parent(k, parent, rng);
  return list;
}

std::vector<std::size_t> random_permutation(std::size_t n, Rng& rng) {
  std::vector<std::size_t> p(n);
  for (std::size_t i = 0; i < n; ++i)
    p[i] = i;
  for (std::size_t i = n; i > 1; --i)
    std::swap(p[i - 1], p[rng.below(i)]);
  return p;
}

std::vector<Colour> assign_by_permutation(const ColourList& list, Rng& rng) {
  const auto pi = random_permutation(list.entries.size(), rng);
  std::vector<Colour> out(list.entries.size());
  for (std::size_t i = 0; i < out.size(); ++i)
    out[i] = list.entries[pi[i]];
  return out;
}

} // namespace broadcast
} // namespace treecouple
