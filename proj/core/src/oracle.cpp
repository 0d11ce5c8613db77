#include "treecouple/oracle.hpp"

#include "treecouple/coupling.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <sstream>

namespace treecouple::oracle {

namespace {

void check_budget(std::uint32_t k, std::uint64_t n, std::uint64_t budget, const char* what) {
  std::uint64_t total = 1;
  for (std::uint64_t i = 0; i < n; ++i) {
    if (total > budget / k) {
      std::ostringstream os;
      os << what << ": k^" << n << " with k=" << k << " exceeds the enumeration budget " << budget;
      throw BudgetExceeded(os.str());
    }
    total *= k;
  }
}

ExactMeasure from_map(const std::map<std::vector<Colour>, Rational>& m) {
  ExactMeasure out;
  out.support.reserve(m.size());
  out.mass.reserve(m.size());
  for (const auto& [e, w] : m) {
    out.support.push_back(e);
    out.mass.push_back(w);
  }
  return out;
}

ExactMeasure uniform_over(std::vector<std::vector<Colour>> elems) {
  ExactMeasure out;
  const Rational w(1, static_cast<unsigned long>(elems.size()));
  out.mass.assign(elems.size(), w);
  out.support = std::move(elems);
  return out;
}

// Calls fn on every vector of [k]^len in lexicographic order.
template <class F>
void for_each_word(std::uint32_t len, std::uint32_t k, F&& fn) {
  std::vector<Colour> w(len, 1);
  while (true) {
    fn(const_cast<const std::vector<Colour>&>(w));
    std::uint32_t i = len;
    while (i > 0 && w[i - 1] == k) {
      w[i - 1] = 1;
      --i;
    }
    if (i == 0)
      return;
    ++w[i - 1];
  }
}

std::string set_name(const std::vector<Colour>& v) {
  std::string s = "{";
  for (std::size_t i = 0; i < v.size(); ++i)
    s += (i ? "," : "") + std::to_string(v[i]);
  return s + "}";
}

IdentityCheck compare(std::string name, std::uint32_t d, std::uint32_t k, const ExactMeasure& a,
                      const ExactMeasure& b) {
  IdentityCheck c;
  c.name = std::move(name);
  c.d = d;
  c.k = k;
  c.tv = tv_distance(a, b);
  c.equal = c.tv == 0;
  c.cases = std::max(a.support.size(), b.support.size());
  return c;
}

std::vector<Colour> others(std::uint32_t k, DisagreementPair pair) {
  std::vector<Colour> v;
  for (Colour a = 1; a <= k; ++a)
    if (a != pair.c && a != pair.q)
      v.push_back(a);
  return v;
}

void check_instance(std::uint32_t d, std::uint32_t k, DisagreementPair pair) {
  if (d < 1)
    throw std::invalid_argument("oracle: d must be >= 1");
  if (k < 4)
    throw std::invalid_argument("oracle: these checks need k >= 4");
  if (pair.c == pair.q || pair.c < 1 || pair.c > k || pair.q < 1 || pair.q > k)
    throw std::invalid_argument("oracle: c, q must be distinct colours in 1..k");
}

// Candidate (slot, list) pairs of one side: slot uniform off the side's root
// colour, list uniform off the slot; kept if `keep` holds. Element = slot
// followed by the entries.
ExactMeasure candidate_law(std::uint32_t d, std::uint32_t k, Colour root,
                           const std::function<bool(Colour, const std::vector<Colour>&)>& keep) {
  check_budget(k, d + 1, kEnumerationBudget, "candidate_law");
  std::vector<std::vector<Colour>> elems;
  for (Colour slot = 1; slot <= k; ++slot) {
    if (slot == root)
      continue;
    for_each_word(d, k, [&](const std::vector<Colour>& w) {
      if (std::find(w.begin(), w.end(), slot) != w.end() || !keep(slot, w))
        return;
      std::vector<Colour> e;
      e.reserve(d + 1);
      e.push_back(slot);
      e.insert(e.end(), w.begin(), w.end());
      elems.push_back(std::move(e));
    });
  }
  if (elems.empty())
    throw ContradictoryConstraints("candidate_law: no admissible candidate");
  return uniform_over(std::move(elems));  // slot first, so already lexicographic
}

bool has(const std::vector<Colour>& w, Colour a) { return std::find(w.begin(), w.end(), a) != w.end(); }

} // namespace

Rational ExactMeasure::total() const {
  Rational t = 0;
  for (const auto& m : mass)
    t += m;
  return t;
}

Rational ExactMeasure::at(const std::vector<Colour>& element) const {
  auto it = std::lower_bound(support.begin(), support.end(), element);
  if (it == support.end() || *it != element)
    return 0;
  return mass[static_cast<std::size_t>(it - support.begin())];
}

Rational broadcast_mass(const Colouring& col, std::uint32_t k) {
  Rational m = 1;
  const std::uint64_t n = col.colours.size();
  for (std::uint64_t v = 1; v < n; ++v) {
    const Colour parent = col.colours[tree_model::parent_of(col.shape, v)];
    const auto row = broadcast::transition_row(k, parent);
    const Colour child = col.colours[v];
    if (child == parent)
      return 0;
    m *= row[child - 1];
  }
  return m;
}

ExactMeasure enumerate_measure(const TreeShape& shape, std::uint32_t k, Colour root_colour, std::uint64_t budget) {
  tree_model::validate(shape);
  broadcast::validate_palette(k);
  if (root_colour < 1 || root_colour > k)
    throw std::invalid_argument("enumerate_measure: root colour outside 1..k");
  const std::uint64_t n = tree_model::vertex_count(shape);
  check_budget(k, n, budget, "enumerate_measure");

  std::vector<Colour> col(n, 0);
  col[0] = root_colour;
  std::vector<std::uint64_t> parent(n, 0);
  for (std::uint64_t v = 1; v < n; ++v)
    parent[v] = tree_model::parent_of(shape, v);

  ExactMeasure out;
  std::uint64_t v = 1;
  if (n == 1) {
    out.support.push_back(col);
  } else {
    // Depth-first odometer in BFS order; parents precede children.
    while (true) {
      Colour next = col[v] + 1;
      if (next == col[parent[v]])
        ++next;
      if (next > k) {
        col[v] = 0;
        if (--v == 0)
          break;
        continue;
      }
      col[v] = next;
      if (v + 1 == n)
        out.support.push_back(col);
      else
        ++v;
    }
  }
  BigInt den;
  mpz_ui_pow_ui(den.get_mpz_t(), k - 1, n - 1);
  out.mass.assign(out.support.size(), Rational(BigInt(1), den));
  return out;
}

ExactMeasure leaf_measure(const TreeShape& shape, std::uint32_t k, Colour root_colour, std::uint64_t budget) {
  const ExactMeasure full = enumerate_measure(shape, k, root_colour, budget);
  const auto leaves = tree_model::level_range(shape, shape.height);
  std::map<std::vector<Colour>, Rational> acc;
  for (std::size_t i = 0; i < full.support.size(); ++i) {
    std::vector<Colour> key(full.support[i].begin() + static_cast<std::ptrdiff_t>(leaves.first),
                            full.support[i].begin() + static_cast<std::ptrdiff_t>(leaves.end));
    acc[std::move(key)] += full.mass[i];
  }
  return from_map(acc);
}

Rational tv_distance(const ExactMeasure& a, const ExactMeasure& b) {
  Rational sum = 0;
  std::size_t i = 0, j = 0;
  while (i < a.support.size() || j < b.support.size()) {
    if (j == b.support.size() || (i < a.support.size() && a.support[i] < b.support[j])) {
      sum += abs(a.mass[i++]);
    } else if (i == a.support.size() || b.support[j] < a.support[i]) {
      sum += abs(b.mass[j++]);
    } else {
      sum += abs(a.mass[i++] - b.mass[j++]);
    }
  }
  Rational tv = sum / 2;
  tv.canonicalize();
  return tv;
}

Rational tv_distance_leaves(const TreeShape& shape, std::uint32_t k, Colour c, Colour q, std::uint64_t budget) {
  if (c == q) {
    tree_model::validate(shape);
    broadcast::validate_palette(k);
    return 0;
  }
  return tv_distance(leaf_measure(shape, k, c, budget), leaf_measure(shape, k, q, budget));
}

std::string ListConstraints::describe() const {
  std::ostringstream os;
  bool first = true;
  auto sep = [&] { os << (first ? "" : ", "); first = false; };
  if (excluded_parent) {
    sep();
    os << "parent " << *excluded_parent << " excluded";
  }
  if (!present.empty()) {
    sep();
    os << "present " << set_name(present);
  }
  if (!absent.empty()) {
    sep();
    os << "absent " << set_name(absent);
  }
  if (unused_outside) {
    sep();
    os << "some colour outside " << set_name(*unused_outside) << " unused";
  }
  if (first)
    os << "no constraints";
  return os.str();
}

bool ListConstraints::admits(const std::vector<Colour>& w, std::uint32_t k) const {
  if (excluded_parent && has(w, *excluded_parent))
    return false;
  for (Colour a : present)
    if (!has(w, a))
      return false;
  for (Colour a : absent)
    if (has(w, a))
      return false;
  if (unused_outside) {
    bool found = false;
    for (Colour a = 1; a <= k && !found; ++a)
      if (std::find(unused_outside->begin(), unused_outside->end(), a) == unused_outside->end() && !has(w, a))
        found = true;
    if (!found)
      return false;
  }
  return true;
}

ExactMeasure conditional_list_measure(std::uint32_t d, std::uint32_t k, const ListConstraints& cons,
                                      std::uint64_t budget) {
  if (d < 1)
    throw std::invalid_argument("conditional_list_measure: d must be >= 1");
  broadcast::validate_palette(k);
  check_budget(k, d, budget, "conditional_list_measure");
  std::vector<std::vector<Colour>> elems;
  for_each_word(d, k, [&](const std::vector<Colour>& w) {
    if (cons.admits(w, k))
      elems.push_back(w);
  });
  if (elems.empty())
    throw ContradictoryConstraints("conditional_list_measure: empty support under " + cons.describe());
  return uniform_over(std::move(elems));
}

ExactMeasure push_forward(const ExactMeasure& m, const std::function<Colour(Colour)>& map) {
  std::map<std::vector<Colour>, Rational> acc;
  for (std::size_t i = 0; i < m.support.size(); ++i) {
    std::vector<Colour> e = m.support[i];
    for (auto& a : e)
      a = map(a);
    acc[std::move(e)] += m.mass[i];
  }
  return from_map(acc);
}

std::vector<IdentityCheck> rescuable_vs_good_checks(std::uint32_t d, std::uint32_t k, DisagreementPair pair) {
  check_instance(d, k, pair);
  const Colour c = pair.c, q = pair.q;
  const std::vector<Colour> cq{std::min(c, q), std::max(c, q)};
  auto swap_cq = [&](Colour a) {
    ColourList l{0, {a}};
    return coupling::relabel_cq(l, pair).entries[0];
  };
  std::vector<IdentityCheck> out;
  for (Colour s : others(k, pair)) {
    const std::string tag = " s=" + std::to_string(s);
    // X rescuable (slot q) given s unused; Q > 0 is implied by s absent.
    const ListConstraints rx{q, {c}, {s}, cq};
    const ListConstraints gy{s, {c}, {q}, std::nullopt};
    const auto mrx = conditional_list_measure(d, k, rx);
    out.push_back(compare("rescuable-X vs good-Y" + tag, d, k, mrx, conditional_list_measure(d, k, gy)));
    // Mirror: Y rescuable (slot c) against an X good partner with slot s.
    const ListConstraints ry{c, {q}, {s}, cq};
    const ListConstraints gx{s, {q}, {c}, std::nullopt};
    const auto mry = conditional_list_measure(d, k, ry);
    out.push_back(compare("rescuable-Y vs good-X" + tag, d, k, mry, conditional_list_measure(d, k, gx)));
    out.push_back(compare("rescuable-X relabelled vs rescuable-Y" + tag, d, k, push_forward(mrx, swap_cq), mry));
  }
  return out;
}

std::vector<IdentityCheck> good_vs_fail_checks(std::uint32_t d, std::uint32_t k, DisagreementPair pair) {
  check_instance(d, k, pair);
  const Colour c = pair.c, q = pair.q;
  const std::vector<Colour> rest = others(k, pair);
  const std::size_t m = rest.size();
  std::vector<IdentityCheck> out;
  for (std::uint64_t mask = 1; mask < (std::uint64_t{1} << m); ++mask) {
    std::vector<Colour> unused;
    for (std::size_t b = 0; b < m; ++b)
      if (mask >> b & 1)
        unused.push_back(rest[b]);
    // A rescuable list holds c plus every colour of [k]\{c,q} it does not leave unused.
    if (m - unused.size() + 1 > d)
      continue;
    auto in_u = [&](Colour a) { return std::find(unused.begin(), unused.end(), a) != unused.end(); };
    auto special = [&](Colour slot) { return slot != c && slot != q && in_u(slot); };
    const auto good_x = candidate_law(d, k, c, [&](Colour s, const std::vector<Colour>& w) {
      return special(s) && has(w, q) && !has(w, c);
    });
    const auto fail_x = candidate_law(d, k, c, [&](Colour s, const std::vector<Colour>& w) {
      return special(s) && has(w, c) && !has(w, q);
    });
    const auto good_y = candidate_law(d, k, q, [&](Colour s, const std::vector<Colour>& w) {
      return special(s) && has(w, c) && !has(w, q);
    });
    const auto fail_y = candidate_law(d, k, q, [&](Colour s, const std::vector<Colour>& w) {
      return special(s) && has(w, q) && !has(w, c);
    });
    const std::string tag = " unused=" + set_name(unused);
    out.push_back(compare("good-X vs fail-Y" + tag, d, k, good_x, fail_y));
    out.push_back(compare("fail-X vs good-Y" + tag, d, k, fail_x, good_y));
  }
  return out;
}

std::vector<IdentityCheck> conditioning_gap_report(std::uint32_t d, std::uint32_t k, DisagreementPair pair) {
  check_instance(d, k, pair);
  const Colour c = pair.c, q = pair.q;
  const std::vector<Colour> cq{std::min(c, q), std::max(c, q)};
  const std::vector<Colour> rest = others(k, pair);
  std::vector<IdentityCheck> out;
  const ListConstraints resc{q, {c}, {}, cq};
  const auto mres = conditional_list_measure(d, k, resc);
  for (Colour s : rest) {
    const std::string tag = " s=" + std::to_string(s);
    const auto target = conditional_list_measure(d, k, ListConstraints{s, {c}, {q}, std::nullopt});
    out.push_back(compare("rescuable-X without slot absence vs good-Y" + tag, d, k, mres, target));

    // Posterior of the rescuable list when the partner slot is uniform on its unused set.
    std::map<std::vector<Colour>, Rational> acc;
    Rational norm = 0;
    for (std::size_t i = 0; i < mres.support.size(); ++i) {
      const auto& w = mres.support[i];
      if (has(w, s))
        continue;
      long unused = 0;
      for (Colour a : rest)
        unused += !has(w, a);
      const Rational wt = mres.mass[i] / unused;
      acc[w] = wt;
      norm += wt;
    }
    for (auto& [e, wt] : acc)
      wt /= norm;
    out.push_back(compare("rescuable-X given uniform unused slot vs good-Y" + tag, d, k, from_map(acc), target));
  }
  return out;
}

} // namespace treecouple::oracle
