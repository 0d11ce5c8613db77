#include "treecouple/colour_set.hpp"

#include <bit>
#include <stdexcept>

namespace treecouple {

ColourSet::ColourSet(std::uint32_t k) : k_(k) {
  if (k > 64)
    spill_.assign((k - 64 + 63) / 64, 0);
}

ColourSet::ColourSet(std::uint32_t k, std::initializer_list<Colour> colours) : ColourSet(k) {
  for (Colour c : colours)
    insert(c);
}

void ColourSet::insert(Colour c) {
  if (c == 0 || c > k_)
    throw std::out_of_range("ColourSet::insert: colour outside palette");
  if (c <= 64) {
    word_ |= std::uint64_t{1} << (c - 1);
  } else {
    const std::uint32_t b = c - 65;
    spill_[b / 64] |= std::uint64_t{1} << (b % 64);
  }
}

void ColourSet::erase(Colour c) {
  if (c == 0 || c > k_)
    return;
  if (c <= 64) {
    word_ &= ~(std::uint64_t{1} << (c - 1));
  } else {
    const std::uint32_t b = c - 65;
    spill_[b / 64] &= ~(std::uint64_t{1} << (b % 64));
  }
}

std::uint32_t ColourSet::size() const {
  std::uint32_t n = std::popcount(word_);
  for (auto w : spill_)
    n += std::popcount(w);
  return n;
}

ColourSet ColourSet::complement() const {
  ColourSet out(k_);
  for (Colour c = 1; c <= k_; ++c)
    if (!contains(c))
      out.insert(c);
  return out;
}

void ColourSet::check_same_palette(const ColourSet& other) const {
  if (other.k_ != k_)
    throw std::invalid_argument("ColourSet: palette sizes differ");
}

ColourSet& ColourSet::operator|=(const ColourSet& other) {
  check_same_palette(other);
  word_ |= other.word_;
  for (std::size_t i = 0; i < spill_.size(); ++i)
    spill_[i] |= other.spill_[i];
  return *this;
}

ColourSet& ColourSet::operator&=(const ColourSet& other) {
  check_same_palette(other);
  word_ &= other.word_;
  for (std::size_t i = 0; i < spill_.size(); ++i)
    spill_[i] &= other.spill_[i];
  return *this;
}

ColourSet& ColourSet::operator-=(const ColourSet& other) {
  check_same_palette(other);
  word_ &= ~other.word_;
  for (std::size_t i = 0; i < spill_.size(); ++i)
    spill_[i] &= ~other.spill_[i];
  return *this;
}

std::vector<Colour> ColourSet::to_vector() const {
  std::vector<Colour> out;
  for (Colour c = 1; c <= k_; ++c)
    if (contains(c))
      out.push_back(c);
  return out;
}

} // namespace treecouple
