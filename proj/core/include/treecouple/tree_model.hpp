#pragma once
#include <cstdint>
#include <stdexcept>

namespace treecouple {

/// Complete d-ary tree; root at level 0, leaves at level `height`.
struct TreeShape {
  std::uint32_t degree = 1;
  std::uint32_t height = 0;
};

namespace tree_model {

/// Half-open range [first, last) of BFS vertex indices.
struct IndexRange {
  std::uint64_t first = 0;
  std::uint64_t end = 0;  // one past the last index

  bool empty() const { return first == end; }
  std::uint64_t size() const { return end - first; }
};

/// Thrown when a count does not fit in 64 bits.
class CountOverflow : public std::overflow_error {
public:
  using std::overflow_error::overflow_error;
};

void validate(const TreeShape& shape);

/// (d^(h+1) - 1)/(d - 1), or h + 1 for d = 1. Throws CountOverflow rather than wrapping.
std::uint64_t vertex_count(const TreeShape& shape);

/// d^level. Throws CountOverflow.
std::uint64_t level_size(const TreeShape& shape, std::uint32_t level);

/// First BFS index of a level, equal to the number of vertices above it.
std::uint64_t level_start(const TreeShape& shape, std::uint32_t level);

IndexRange level_range(const TreeShape& shape, std::uint32_t level);

/// Children d*v+1 .. d*v+d; empty for leaves.
IndexRange children(const TreeShape& shape, std::uint64_t v);

/// Parent of a non-root vertex.
std::uint64_t parent_of(const TreeShape& shape, std::uint64_t v);

/// floor(log_d(v(d-1)+1)) for d >= 2, v for d = 1. Throws std::out_of_range for v outside the tree.
std::uint32_t level_of(const TreeShape& shape, std::uint64_t v);

std::uint64_t edge_count(const TreeShape& shape);

} // namespace tree_model
} // namespace treecouple
