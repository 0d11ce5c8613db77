#include "treecouple/tree_model.hpp"

#include <limits>
#include <string>

namespace treecouple::tree_model {

namespace {

constexpr std::uint64_t kMax = std::numeric_limits<std::uint64_t>::max();

std::uint64_t checked_mul(std::uint64_t a, std::uint64_t b) {
  if (a != 0 && b > kMax / a)
    throw CountOverflow("tree_model: count exceeds 64-bit range");
  return a * b;
}

std::uint64_t checked_add(std::uint64_t a, std::uint64_t b) {
  if (b > kMax - a)
    throw CountOverflow("tree_model: count exceeds 64-bit range");
  return a + b;
}

} // namespace

void validate(const TreeShape& shape) {
  if (shape.degree == 0)
    throw std::invalid_argument("tree_model: degree must be positive");
}

std::uint64_t level_size(const TreeShape& shape, std::uint32_t level) {
  validate(shape);
  std::uint64_t n = 1;
  for (std::uint32_t l = 0; l < level; ++l)
    n = checked_mul(n, shape.degree);
  return n;
}

std::uint64_t level_start(const TreeShape& shape, std::uint32_t level) {
  validate(shape);
  std::uint64_t start = 0;
  std::uint64_t width = 1;
  for (std::uint32_t l = 0; l < level; ++l) {
    start = checked_add(start, width);
    if (l + 1 < level)
      width = checked_mul(width, shape.degree);
  }
  return start;
}

std::uint64_t vertex_count(const TreeShape& shape) {
  validate(shape);
  if (shape.height == std::numeric_limits<std::uint32_t>::max())
    throw CountOverflow("tree_model: height too large");
  return checked_add(level_start(shape, shape.height), level_size(shape, shape.height));
}

IndexRange level_range(const TreeShape& shape, std::uint32_t level) {
  if (level > shape.height)
    throw std::out_of_range("tree_model: level " + std::to_string(level) + " beyond height");
  const std::uint64_t first = level_start(shape, level);
  return {first, first + level_size(shape, level)};
}

IndexRange children(const TreeShape& shape, std::uint64_t v) {
  if (level_of(shape, v) >= shape.height)
    return {};
  const std::uint64_t first = v * shape.degree + 1;
  return {first, first + shape.degree};
}

std::uint64_t parent_of(const TreeShape& shape, std::uint64_t v) {
  validate(shape);
  if (v == 0)
    throw std::out_of_range("tree_model: root has no parent");
  return (v - 1) / shape.degree;
}

std::uint32_t level_of(const TreeShape& shape, std::uint64_t v) {
  validate(shape);
  if (v >= vertex_count(shape))
    throw std::out_of_range("tree_model: vertex " + std::to_string(v) + " outside tree");
  if (shape.degree == 1)
    return static_cast<std::uint32_t>(v);
  // Integer form of floor(log_d(v(d-1)+1)): walk level starts upward.
  std::uint32_t level = 0;
  std::uint64_t start = 0;
  std::uint64_t width = 1;
  while (v >= start + width) {
    start += width;
    width *= shape.degree;
    ++level;
  }
  return level;
}

std::uint64_t edge_count(const TreeShape& shape) { return vertex_count(shape) - 1; }

} // namespace treecouple::tree_model
