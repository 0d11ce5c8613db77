#pragma once
#include <cstdint>
#include <initializer_list>
#include <vector>

namespace treecouple {

/// Colours are 1-based: a palette of size k holds 1..k.
using Colour = std::uint32_t;

/**
 * Set of colours from a palette 1..k.
 *
 * Colours 1..64 live in one machine word; a palette above 64 spills the
 * remaining colours into a dynamic word vector.
 */
class ColourSet {
public:
  ColourSet() = default;
  explicit ColourSet(std::uint32_t k);
  ColourSet(std::uint32_t k, std::initializer_list<Colour> colours);

  std::uint32_t palette() const { return k_; }

  void insert(Colour c);
  void erase(Colour c);
  bool contains(Colour c) const {
    if (c == 0 || c > k_)
      return false;
    if (c <= 64)
      return (word_ >> (c - 1)) & 1U;
    const std::uint32_t b = c - 65;
    return (spill_[b / 64] >> (b % 64)) & 1U;
  }

  std::uint32_t size() const;
  bool empty() const { return size() == 0; }

  /// Colours of the palette that are not in the set.
  ColourSet complement() const;

  ColourSet& operator|=(const ColourSet& other);
  ColourSet& operator&=(const ColourSet& other);
  ColourSet& operator-=(const ColourSet& other);

  std::vector<Colour> to_vector() const;

  friend bool operator==(const ColourSet& a, const ColourSet& b) {
    return a.k_ == b.k_ && a.word_ == b.word_ && a.spill_ == b.spill_;
  }

private:
  void check_same_palette(const ColourSet& other) const;

  std::uint32_t k_ = 0;
  std::uint64_t word_ = 0;
  std::vector<std::uint64_t> spill_;
};

} // namespace treecouple
