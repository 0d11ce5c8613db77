#pragma once
#include "treecouple/colour_set.hpp"
#include "treecouple/rational.hpp"
#include "treecouple/rng.hpp"
#include "treecouple/tree_model.hpp"

#include <cstddef>
#include <vector>

namespace treecouple {

struct Palette {
  std::uint32_t k = 2;
};

/// Colour per vertex in BFS order.
struct Colouring {
  TreeShape shape;
  std::vector<Colour> colours;

  bool is_proper() const;
};

/// The d child colours of a vertex together with that vertex's colour.
struct ColourList {
  Colour parent_colour = 0;
  std::vector<Colour> entries;

  bool contains(Colour c) const;
  std::size_t count(Colour c) const;
  ColourSet colour_set(std::uint32_t k) const;
  std::uint32_t distinct(std::uint32_t k) const { return colour_set(k).size(); }
  bool valid(std::uint32_t k) const;

  friend bool operator==(const ColourList&, const ColourList&) = default;
};

namespace broadcast {

void validate_palette(std::uint32_t k);

/// Row of the colouring channel: 1/(k-1) on every colour except `parent`. Entry i is colour i+1.
std::vector<Rational> transition_row(std::uint32_t k, Colour parent);

/// Uniform colour from 1..k other than `parent`.
Colour sample_non_parent(std::uint32_t k, Colour parent, Rng& rng);

Colouring sample_broadcast(const TreeShape& shape, std::uint32_t k, Colour root_colour, Rng& rng);

/// Fill the subtree under `v` (excluding v itself) given colours[v].
void fill_subtree(Colouring& colouring, std::uint64_t v, std::uint32_t k, Rng& rng);

ColourList sample_list(std::uint32_t k, Colour parent, std::uint32_t d, Rng& rng);

/// Uniform permutation of 0..n-1 (Fisher-Yates on Rng::below).
std::vector<std::size_t> random_permutation(std::size_t n, Rng& rng);

/// Child i receives entries[pi(i)] for a uniform permutation pi.
std::vector<Colour> assign_by_permutation(const ColourList& list, Rng& rng);

} // namespace broadcast
} // namespace treecouple
