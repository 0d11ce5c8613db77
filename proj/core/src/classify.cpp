#include "treecouple/classify.hpp"

#include <stdexcept>
#include <string>

namespace treecouple {

bool ListFlags::consistent() const {
  if (rescuable && !bad)
    return false;
  if (good_for && special_for != good_for)
    return false;
  if (fail_for && special_for != fail_for)
    return false;
  return !(good_for && fail_for);
}

namespace classify {

namespace {

Colour own_root(DisagreementPair pair, Side side) { return side == Side::X ? pair.c : pair.q; }
Colour other_root(DisagreementPair pair, Side side) { return side == Side::X ? pair.q : pair.c; }

void require_k3(std::uint32_t k) {
  if (k < 3)
    throw std::invalid_argument("closed forms need k >= 3, got " + std::to_string(k));
}

} // namespace

bool is_bad(const ColourList& list, DisagreementPair pair, Side side) {
  return list.parent_colour == other_root(pair, side) && list.contains(own_root(pair, side));
}

bool is_rescuable(const ColourList& list, DisagreementPair pair, Side side, std::uint32_t k) {
  return is_bad(list, pair, side) && list.distinct(k) + 1 < k;
}

bool exactly_one_root_colour(const ColourList& list, DisagreementPair pair) {
  return list.contains(pair.c) != list.contains(pair.q);
}

bool is_special(const ColourList& candidate, const ColourList& rescuable_ref, DisagreementPair pair, Side side) {
  const Colour slot = candidate.parent_colour;
  if (slot == other_root(pair, side))
    return false;
  if (rescuable_ref.contains(slot))
    return false;
  return exactly_one_root_colour(candidate, pair);
}

bool is_good(const ColourList& candidate, const ColourList& rescuable_ref, DisagreementPair pair, Side side) {
  return is_special(candidate, rescuable_ref, pair, side) && candidate.contains(other_root(pair, side));
}

bool is_fail(const ColourList& candidate, const ColourList& rescuable_ref, DisagreementPair pair, Side side) {
  return is_special(candidate, rescuable_ref, pair, side) && candidate.contains(own_root(pair, side));
}

ListFlags classify_candidate(const ColourList& candidate, const ColourList& rescuable_ref, std::size_t ref_index,
                             DisagreementPair pair, Side side, std::uint32_t k) {
  ListFlags f;
  f.bad = is_bad(candidate, pair, side);
  f.rescuable = is_rescuable(candidate, pair, side, k);
  if (is_special(candidate, rescuable_ref, pair, side)) {
    f.special_for = ref_index;
    if (candidate.contains(other_root(pair, side)))
      f.good_for = ref_index;
    else
      f.fail_for = ref_index;
  }
  return f;
}

ExactValue p_free_exact(std::uint32_t d, std::uint32_t k) {
  require_k3(k);
  return make_exact(rational_pow(Rational(k - 2, k - 1), d));
}

ExactValue p_bad_exact(std::uint32_t d, std::uint32_t k) {
  require_k3(k);
  Rational v = Rational(1, k - 1) * (1 - p_free_exact(d, k).exact);
  v.canonicalize();
  return make_exact(v);
}

ExpectedBad expected_bad(std::uint32_t d, std::uint32_t k) {
  Rational v = Rational(d) * p_bad_exact(d, k).exact;
  v.canonicalize();
  return {make_exact(v), make_exact(ratio(d, k - 1))};
}

} // namespace classify
} // namespace treecouple
