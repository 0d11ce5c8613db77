#include "treecouple/coupling.hpp"

#include <algorithm>
#include <deque>
#include <stdexcept>
#include <string>

namespace treecouple {

const char* source_name(DisagreementSource s) {
  switch (s) {
  case DisagreementSource::NonRescuableBad: return "non-rescuable-bad";
  case DisagreementSource::UnmatchedRescuable: return "unmatched-rescuable";
  case DisagreementSource::UnmatchedFail: return "unmatched-fail";
  case DisagreementSource::RejectedPartner: return "rejected-partner";
  case DisagreementSource::ChildSlot: return "child-slot";
  case DisagreementSource::Naive: return "naive";
  }
  return "unknown";
}

std::uint64_t CoupledBlock::grandchild_disagreements() const {
  std::uint64_t n = 0;
  for (const auto& r : records)
    n += (r.level == 2);
  return n;
}

std::array<std::uint64_t, kSourceCount> CoupledBlock::grandchild_by_source() const {
  std::array<std::uint64_t, kSourceCount> out{};
  for (const auto& r : records)
    if (r.level == 2)
      ++out[static_cast<std::size_t>(r.source)];
  return out;
}

bool CoupledBlock::locally_proper() const {
  for (std::uint32_t p = 0; p < d; ++p) {
    if (x_children[p] == pair.c || y_children[p] == pair.q)
      return false;
    for (std::uint32_t g = 0; g < d; ++g)
      if (x_grand[p][g] == x_children[p] || y_grand[p][g] == y_children[p])
        return false;
  }
  return true;
}

bool CoupledBlock::records_exact() const {
  std::size_t expected = 0;
  for (std::uint32_t p = 0; p < d; ++p) {
    expected += (x_children[p] != y_children[p]);
    for (std::uint32_t g = 0; g < d; ++g)
      expected += (x_grand[p][g] != y_grand[p][g]);
  }
  if (expected != records.size())
    return false;
  for (const auto& r : records) {
    if (r.level == 1) {
      if (r.position >= d || x_children[r.position] == y_children[r.position])
        return false;
    } else {
      const auto p = r.position / d, g = r.position % d;
      if (p >= d || x_grand[p][g] == y_grand[p][g])
        return false;
    }
  }
  return true;
}

namespace coupling {

const char* outcome_name(SearchOutcome o) {
  switch (o) {
  case SearchOutcome::Matched: return "matched";
  case SearchOutcome::Rejected: return "rejected";
  case SearchOutcome::Exhausted: return "exhausted";
  }
  return "unknown";
}

std::pair<Colour, Colour> maximal_child_coupling(std::uint32_t k, Colour a, Colour b, Rng& rng) {
  if (a == b)
    throw std::invalid_argument("maximal_child_coupling: parents agree");
  const Colour x = broadcast::sample_non_parent(k, a, rng);
  // Overlap [k]\{a,b} is shared; the single X-only colour b pairs with the Y-only colour a.
  return {x, x == b ? a : x};
}

namespace {

void sized_block(CoupledBlock& blk, DisagreementPair pair, std::uint32_t d, std::uint32_t k) {
  blk.pair = pair;
  blk.d = d;
  blk.k = k;
  blk.x_children.assign(d, 0);
  blk.y_children.assign(d, 0);
  blk.x_grand.assign(d, std::vector<Colour>(d, 0));
  blk.y_grand.assign(d, std::vector<Colour>(d, 0));
}

void check_pair(DisagreementPair pair, std::uint32_t k) {
  if (pair.c == pair.q)
    throw std::invalid_argument("coupling: c and q must differ");
  if (pair.c == 0 || pair.c > k || pair.q == 0 || pair.q > k)
    throw std::invalid_argument("coupling: root colours outside 1..k");
}

} // namespace

ColourList relabel_cq(const ColourList& l, DisagreementPair pair) {
  ColourList out = l;
  for (auto& e : out.entries) {
    if (e == pair.c)
      e = pair.q;
    else if (e == pair.q)
      e = pair.c;
  }
  if (out.parent_colour == pair.q)
    out.parent_colour = pair.c;
  return out;
}

CoupledBlock naive_block(DisagreementPair pair, std::uint32_t d, std::uint32_t k, Rng& rng) {
  check_pair(pair, k);
  CoupledBlock blk;
  sized_block(blk, pair, d, k);
  for (std::uint32_t p = 0; p < d; ++p) {
    auto [xc, yc] = maximal_child_coupling(k, pair.c, pair.q, rng);
    blk.x_children[p] = xc;
    blk.y_children[p] = yc;
    if (xc != yc)
      blk.records.push_back({1, p, DisagreementSource::Naive});
    for (std::uint32_t g = 0; g < d; ++g) {
      if (xc == yc) {
        blk.x_grand[p][g] = blk.y_grand[p][g] = broadcast::sample_non_parent(k, xc, rng);
      } else {
        auto [xg, yg] = maximal_child_coupling(k, xc, yc, rng);
        blk.x_grand[p][g] = xg;
        blk.y_grand[p][g] = yg;
        if (xg != yg)
          blk.records.push_back({2, std::uint64_t{p} * d + g, DisagreementSource::Naive});
      }
    }
  }
  return blk;
}

bool PartialState::valid() const {
  if (x.size() != d || membership.size() != d)
    return false;
  std::vector<int> seen(d, 0);
  for (std::size_t i = 0; i < d; ++i) {
    if (rescuable[i] && !bad[i])
      return false;
    if (bad[i] && !membership[i])
      return false;
    if (special[i] && !eligible[i])
      return false;
  }
  std::size_t lo = d, hi = 0;
  for (const auto& part : partitions) {
    lo = std::min(lo, part.size());
    hi = std::max(hi, part.size());
    for (std::size_t u : part) {
      if (u >= d || membership[u] || bad[u] || seen[u]++)
        return false;
    }
  }
  return partitions.empty() || hi - lo <= 1;
}

PartialState phase1_from_family(DisagreementPair pair, std::uint32_t k, ListFamily x) {
  check_pair(pair, k);
  PartialState s;
  s.pair = pair;
  s.k = k;
  s.d = static_cast<std::uint32_t>(x.size());
  s.x = std::move(x);
  const std::uint32_t d = s.d;
  s.membership.assign(d, false);
  s.bad.assign(d, false);
  s.rescuable.assign(d, false);
  s.eligible.assign(d, false);
  s.special.assign(d, false);
  s.owner.assign(d, -1);

  // Steps 1-3: membership, badness, rescuability.
  for (std::uint32_t i = 0; i < d; ++i) {
    const ColourList& l = s.x[i];
    s.membership[i] = l.parent_colour == pair.q;
    s.bad[i] = classify::is_bad(l, pair, Side::X);
    s.rescuable[i] = classify::is_rescuable(l, pair, Side::X, k);
    if (s.rescuable[i]) {
      s.rescuable_indices.push_back(i);
      ColourSet u = l.colour_set(k).complement();
      u.erase(pair.c);
      u.erase(pair.q);
      s.unused.push_back(std::move(u));
    } else if (!s.membership[i]) {
      s.eligible[i] = classify::exactly_one_root_colour(l, pair);
    }
  }
  // Step 4: round-robin partition of the non-membership indices.
  s.partitions.assign(s.rescuable_indices.size(), {});
  if (!s.rescuable_indices.empty()) {
    std::size_t r = 0;
    for (std::uint32_t i = 0; i < d; ++i) {
      if (s.membership[i])
        continue;
      s.partitions[r].push_back(i);
      s.owner[i] = static_cast<std::ptrdiff_t>(r);
      r = (r + 1) % s.rescuable_indices.size();
    }
  }
  // Step 5: specialness against the owning rescuable list.
  for (std::uint32_t i = 0; i < d; ++i) {
    if (s.owner[i] < 0 || !s.eligible[i])
      continue;
    const ColourList& ref = s.x[s.rescuable_indices[s.owner[i]]];
    s.special[i] = classify::is_special(s.x[i], ref, pair, Side::X);
  }
  return s;
}

PartialState phase1(DisagreementPair pair, std::uint32_t d, std::uint32_t k, Rng& rng) {
  check_pair(pair, k);
  if (k < 4)
    throw std::invalid_argument("improved coupling needs k >= 4, got " + std::to_string(k));
  ListFamily x(d);
  for (auto& l : x) {
    const Colour slot = broadcast::sample_non_parent(k, pair.c, rng);
    l = broadcast::sample_list(k, slot, d, rng);
  }
  return phase1_from_family(pair, k, std::move(x));
}

bool Association::is_involution() const {
  for (std::size_t i = 0; i < f.size(); ++i)
    if (f[i] >= f.size() || f[f[i]] != i)
      return false;
  return true;
}

Association phase2(const PartialState& s) {
  const std::uint32_t d = s.d;
  const DisagreementPair pair = s.pair;
  Association a;
  a.f.resize(d);
  a.rule.assign(d, Rule::Identity);
  a.delta_source.assign(d, DisagreementSource::ChildSlot);
  for (std::uint32_t i = 0; i < d; ++i) {
    a.f[i] = i;
    if (s.bad[i]) {
      a.rule[i] = Rule::Transposition;
      a.delta_source[i] = DisagreementSource::NonRescuableBad;
    } else if (s.membership[i]) {
      a.rule[i] = Rule::MembershipRelabel;
    }
  }

  for (std::size_t r = 0; r < s.rescuable_indices.size(); ++r) {
    const std::size_t j = s.rescuable_indices[r];
    const ColourSet& unused = s.unused[r];
    std::vector<std::pair<std::uint8_t, std::uint8_t>> cols{{1, 0}};
    std::deque<std::size_t> open_fails;
    // Slots of every eligible candidate met before the stop. A partner is
    // accepted only if its list splits these slots into used/unused exactly as
    // the rescuable list does, so the search replays identically from Y.
    std::vector<Colour> seen;
    std::int64_t sum = 1;
    SearchOutcome outcome = SearchOutcome::Exhausted;
    std::vector<std::size_t> delta;

    for (std::size_t u : s.partitions[r]) {
      if (!s.eligible[u])
        continue;
      const ColourList& cand = s.x[u];
      if (!s.special[u]) {
        seen.push_back(cand.parent_colour);
        continue;
      }
      const bool fail = cand.contains(pair.c);
      if (fail) {
        cols.emplace_back(1, 0);
        ++sum;
        open_fails.push_back(u);
        seen.push_back(cand.parent_colour);
        continue;
      }
      cols.emplace_back(0, 1);
      if (sum > 1) {
        const std::size_t t = open_fails.front();
        open_fails.pop_front();
        --sum;
        a.f[u] = t;
        a.f[t] = u;
        a.rule[u] = a.rule[t] = Rule::WholeSwap;
        a.matched_pairs.emplace_back(u, t);
        seen.push_back(cand.parent_colour);
        continue;
      }
      bool compatible = true;
      for (Colour slot : seen) {
        if (unused.contains(slot) == cand.contains(slot)) {
          compatible = false;
          break;
        }
      }
      if (compatible) {
        outcome = SearchOutcome::Matched;
        a.f[u] = j;
        a.f[j] = u;
        a.rule[u] = a.rule[j] = Rule::RescueExchange;
        a.matched_pairs.emplace_back(u, j);
      } else {
        outcome = SearchOutcome::Rejected;
        a.rule[u] = Rule::Transposition;
        a.delta_source[u] = DisagreementSource::RejectedPartner;
        delta.push_back(u);
      }
      break;
    }

    if (outcome != SearchOutcome::Matched) {
      a.delta_source[j] = DisagreementSource::UnmatchedRescuable;
      delta.push_back(j);
    }
    if (outcome == SearchOutcome::Exhausted) {
      for (std::size_t t : open_fails) {
        a.rule[t] = Rule::Transposition;
        a.delta_source[t] = DisagreementSource::UnmatchedFail;
        delta.push_back(t);
      }
    }
    std::sort(delta.begin(), delta.end());
    a.delta_sets.push_back(std::move(delta));
    a.outcomes.push_back(outcome);
    a.columns.push_back(std::move(cols));
  }
  return a;
}

ListFamily y_family(const PartialState& s, const Association& a) {
  const DisagreementPair pair = s.pair;
  ListFamily y(s.d);
  for (std::uint32_t t = 0; t < s.d; ++t) {
    const ColourList& xt = s.x[t];
    const ColourList& xs = s.x[a.f[t]];
    switch (a.rule[t]) {
    case Rule::Identity: y[t] = xt; break;
    case Rule::MembershipRelabel: y[t] = {pair.c, xt.entries}; break;
    case Rule::Transposition: y[t] = relabel_cq(xt, pair); break;
    case Rule::WholeSwap: y[t] = xs; break;
    case Rule::RescueExchange:
      y[t] = {xt.parent_colour == pair.q ? pair.c : xt.parent_colour, xs.entries};
      break;
    }
  }
  return y;
}

ListFamily family_map(DisagreementPair pair, std::uint32_t k, const ListFamily& x) {
  const PartialState s = phase1_from_family(pair, k, x);
  return y_family(s, phase2(s));
}

CoupledBlock phase3(const PartialState& s, const Association& a, Rng& rng) {
  const std::uint32_t d = s.d;
  const ListFamily y = y_family(s, a);
  CoupledBlock blk;
  sized_block(blk, s.pair, d, s.k);
  const auto sigma = broadcast::random_permutation(d, rng);
  for (std::uint32_t p = 0; p < d; ++p) {
    const std::size_t src = sigma[p];
    const std::size_t dst = a.f[src];
    blk.x_children[p] = s.x[src].parent_colour;
    blk.y_children[p] = y[dst].parent_colour;
    if (blk.x_children[p] != blk.y_children[p])
      blk.records.push_back({1, p, DisagreementSource::ChildSlot});
    const auto tau = broadcast::random_permutation(d, rng);
    for (std::uint32_t g = 0; g < d; ++g) {
      blk.x_grand[p][g] = s.x[src].entries[tau[g]];
      blk.y_grand[p][g] = y[dst].entries[tau[g]];
      if (blk.x_grand[p][g] != blk.y_grand[p][g]) {
        if (a.rule[src] != Rule::Transposition)
          throw std::logic_error("phase3: disagreement outside a transposed pair");
        blk.records.push_back({2, std::uint64_t{p} * d + g, a.delta_source[src]});
      }
    }
  }
  return blk;
}

CoupledBlock improved_block(DisagreementPair pair, std::uint32_t d, std::uint32_t k, Rng& rng) {
  if (k < 4)
    return naive_block(pair, d, k, rng);
  const PartialState s = phase1(pair, d, k, rng);
  const Association a = phase2(s);
  return phase3(s, a, rng);
}

} // namespace coupling
} // namespace treecouple
