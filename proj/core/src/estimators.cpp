#include "treecouple/estimators.hpp"

#include "treecouple/broadcast.hpp"
#include "treecouple/oracle.hpp"
#include "treecouple/walks.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <exception>
#include <limits>
#include <map>
#include <stdexcept>
#include <thread>

namespace treecouple::estimators {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

void require_trials(std::uint64_t trials, const char* what) {
  if (trials < 100)
    throw std::invalid_argument(std::string(what) + ": trials must be >= 100");
}

void require_pair(std::uint32_t k, Colour c, Colour q) {
  broadcast::validate_palette(k);
  if (c < 1 || c > k || q < 1 || q > k)
    throw std::invalid_argument("root colours must lie in 1..k");
}

// Runs body(trial, rng, acc) for every trial; trial i always draws from
// stream (seed, i), shards are contiguous and merged in shard order. Accumulators
// hold integers only, so the merged value does not depend on the shard count.
template <class Acc, class Body>
Acc run_sharded(const RunOptions& opt, Body&& body) {
  const std::uint64_t trials = opt.trials;
  unsigned threads = std::max(1u, opt.threads);
  if (trials < threads)
    threads = static_cast<unsigned>(std::max<std::uint64_t>(1, trials));
  std::vector<Acc> acc(threads);
  std::vector<std::exception_ptr> errors(threads);
  auto work = [&](unsigned t) {
    try {
      const std::uint64_t lo = trials * t / threads, hi = trials * (t + 1) / threads;
      for (std::uint64_t i = lo; i < hi; ++i) {
        Rng rng = Rng::for_trial(opt.seed, i);
        body(i, rng, acc[t]);
      }
    } catch (...) {
      errors[t] = std::current_exception();
    }
  };
  if (threads == 1) {
    work(0);
  } else {
    std::vector<std::thread> pool;
    pool.reserve(threads);
    for (unsigned t = 0; t < threads; ++t)
      pool.emplace_back(work, t);
    for (auto& th : pool)
      th.join();
  }
  for (auto& e : errors)
    if (e)
      std::rethrow_exception(e);
  Acc total;
  for (auto& a : acc)
    total.merge(a);
  return total;
}

class Stopwatch {
public:
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  }

private:
  std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

EstimateReport from_moments(std::string name, const stats::IntMoments& m, const RunOptions& opt) {
  EstimateReport r;
  r.name = std::move(name);
  r.trials = m.n;
  r.mean = m.mean();
  r.std_error = m.stderr_of_mean();
  r.seed = opt.seed;
  return r;
}

// Frequency of successes among n Bernoulli observations.
EstimateReport from_counts(std::string name, std::uint64_t hits, std::uint64_t n, const RunOptions& opt) {
  EstimateReport r;
  r.name = std::move(name);
  r.trials = n;
  r.seed = opt.seed;
  if (n > 0) {
    const double p = static_cast<double>(hits) / static_cast<double>(n);
    r.mean = p;
    r.std_error = n > 1 ? std::sqrt(p * (1 - p) / static_cast<double>(n - 1)) : 0.0;
    r.wilson = stats::wilson_interval(hits, n);
  }
  return r;
}

template <std::size_t N>
struct MomentArray {
  std::array<stats::IntMoments, N> m{};
  void merge(const MomentArray& o) {
    for (std::size_t i = 0; i < N; ++i)
      m[i].merge(o.m[i]);
  }
};

struct MomentVector {
  std::vector<stats::IntMoments> m;
  void merge(const MomentVector& o) {
    if (m.size() < o.m.size())
      m.resize(o.m.size());
    for (std::size_t i = 0; i < o.m.size(); ++i)
      m[i].merge(o.m[i]);
  }
};

double phi(double x) { return (1 + x) * std::log1p(x) - x; }

bool eps_ok(const BoundParams& p) { return std::isfinite(p.epsilon) && p.epsilon > 0; }

} // namespace

const char* variant_name(BoundVariant v) { return v == BoundVariant::V1 ? "v1" : "v2"; }

const char* relation_name(Relation r) {
  switch (r) {
  case Relation::None: return "none";
  case Relation::AtMost: return "<=";
  case Relation::AtLeast: return ">=";
  case Relation::Equals: return "==";
  }
  return "?";
}

const char* verdict_name(Verdict v) {
  switch (v) {
  case Verdict::NotApplicable: return "NA";
  case Verdict::Consistent: return "consistent";
  case Verdict::Violated: return "violated";
  }
  return "?";
}

double epsilon_from_k(std::uint32_t d, std::uint32_t k, BoundVariant v) {
  if (d < 2)
    return kNaN;
  const double base = static_cast<double>(k) * std::log(static_cast<double>(d)) / d;
  return base - (v == BoundVariant::V1 ? 1.0 : 2.0);
}

std::uint32_t k_from_epsilon(std::uint32_t d, double epsilon, BoundVariant v) {
  if (d < 2)
    throw std::invalid_argument("k_from_epsilon: d must be >= 2");
  if (!(epsilon > 0))
    throw std::invalid_argument("k_from_epsilon: epsilon must be > 0");
  const double shift = v == BoundVariant::V1 ? 1.0 : 2.0;
  const double k = (shift + epsilon) * d / std::log(static_cast<double>(d));
  return static_cast<std::uint32_t>(std::ceil(k - 1e-9));
}

BoundParams params_for(std::uint32_t d, std::uint32_t k, BoundVariant v, std::optional<double> epsilon) {
  return BoundParams{epsilon ? *epsilon : epsilon_from_k(d, k, v), v};
}

double level_bound(std::uint32_t d, double eps, BoundVariant v, std::uint32_t level) {
  if (!(eps > 0) || d < 2)
    return kNaN;
  const double ld = std::log(static_cast<double>(d));
  if (v == BoundVariant::V1)
    return std::exp(-0.1 * (eps - 1) / (eps + 1) * ld * (level / 2.0));
  return std::exp(-0.1 * eps / (eps + 2) * ld * static_cast<double>(level / 2));
}

Verdict judge(double mean, double se, double ref, Relation rel) {
  if (!std::isfinite(ref) || rel == Relation::None)
    return Verdict::NotApplicable;
  const double tol = 4 * se;
  bool bad = false;
  switch (rel) {
  case Relation::AtMost: bad = mean - tol > ref; break;
  case Relation::AtLeast: bad = mean + tol < ref; break;
  case Relation::Equals: bad = std::abs(mean - ref) > tol; break;
  case Relation::None: break;
  }
  return bad ? Verdict::Violated : Verdict::Consistent;
}

void EstimateReport::attach(double ref, std::string label, Relation rel) {
  reference = ref;
  reference_label = std::move(label);
  relation = rel;
  verdict = judge(mean, std_error, ref, rel);
}

LevelReport estimate_level_disagreements(const TreeShape& shape, std::uint32_t k, Colour c, Colour q,
                                         CouplingKind kind, const RunOptions& opt,
                                         std::optional<BoundParams> params) {
  require_trials(opt.trials, "estimate_level_disagreements");
  require_pair(k, c, q);
  tree_model::validate(shape);
  const Stopwatch sw;
  const std::uint32_t h = shape.height;
  const MomentVector acc = run_sharded<MomentVector>(opt, [&](std::uint64_t, Rng& rng, MomentVector& a) {
    const auto prof = coupling::disagreement_profile(shape, k, c, q, kind, rng);
    if (a.m.size() < h + 1)
      a.m.resize(h + 1);
    for (std::uint32_t l = 0; l <= h; ++l)
      a.m[l].add(static_cast<std::int64_t>(prof.per_level[l]));
  });
  LevelReport rep;
  const std::uint32_t d = shape.degree;
  rep.params = params ? *params : params_for(d, k, BoundVariant::V1);
  rep.naive_ratio = k > 1 ? static_cast<double>(d) / (k - 1) : kNaN;
  const double e1 = rep.params.variant == BoundVariant::V1 ? rep.params.epsilon : epsilon_from_k(d, k, BoundVariant::V1);
  const double e2 = rep.params.variant == BoundVariant::V2 ? rep.params.epsilon : epsilon_from_k(d, k, BoundVariant::V2);
  const double wall = sw.seconds();
  for (std::uint32_t l = 0; l <= h; ++l) {
    EstimateReport r = from_moments("W_" + std::to_string(l), acc.m[l], opt);
    rep.bound_v1.push_back(level_bound(d, e1, BoundVariant::V1, l));
    rep.bound_v2.push_back(level_bound(d, e2, BoundVariant::V2, l));
    const double b = rep.params.variant == BoundVariant::V1 ? rep.bound_v1.back() : rep.bound_v2.back();
    r.attach(b, std::string("level bound ") + variant_name(rep.params.variant), Relation::AtMost);
    r.wall_seconds = wall;
    rep.levels.push_back(std::move(r));
  }
  return rep;
}

BranchingReport estimate_branching(std::uint32_t d, std::uint32_t k, Colour c, Colour q, const RunOptions& opt) {
  require_trials(opt.trials, "estimate_branching");
  require_pair(k, c, q);
  if (d < 1)
    throw std::invalid_argument("estimate_branching: d must be >= 1");
  if (c == q)
    throw std::invalid_argument("estimate_branching: blocks are rooted at a disagreeing pair, c != q");
  const Stopwatch sw;
  const DisagreementPair pair{c, q};
  // Slots: 0 improved total, 1..6 sources, 7 naive children, 8 naive grandchildren, 9 mismatches.
  using Acc = MomentArray<10>;
  const Acc acc = run_sharded<Acc>(opt, [&](std::uint64_t, Rng& rng, Acc& a) {
    const CoupledBlock imp = coupling::improved_block(pair, d, k, rng);
    const auto split = imp.grandchild_by_source();
    const std::uint64_t total = imp.grandchild_disagreements();
    a.m[0].add(static_cast<std::int64_t>(total));
    std::uint64_t sum = 0;
    for (std::size_t s = 0; s < kSourceCount; ++s) {
      a.m[1 + s].add(static_cast<std::int64_t>(split[s]));
      sum += split[s];
    }
    a.m[9].add(sum != total || !imp.records_exact());
    const CoupledBlock nv = coupling::naive_block(pair, d, k, rng);
    std::int64_t children = 0;
    for (const auto& r : nv.records)
      children += r.level == 1;
    a.m[7].add(children);
    a.m[8].add(static_cast<std::int64_t>(nv.grandchild_disagreements()));
  });
  const double wall = sw.seconds();
  BranchingReport rep;
  const double g = static_cast<double>(d) / (k - 1);
  rep.improved = from_moments("D_v improved", acc.m[0], opt);
  rep.improved.attach(g * g, "naive two-level factor (d/(k-1))^2", Relation::AtMost);
  for (std::size_t s = 0; s < kSourceCount; ++s) {
    rep.by_source[s] = from_moments(std::string("D_v source ") + source_name(static_cast<DisagreementSource>(s)),
                                    acc.m[1 + s], opt);
  }
  rep.naive_child = from_moments("naive children", acc.m[7], opt);
  rep.naive_child.attach(g, "d/(k-1)", Relation::Equals);
  rep.naive_child.exact = to_fraction_string(ratio(d, k - 1));
  rep.naive = from_moments("D_v naive", acc.m[8], opt);
  rep.naive.attach(g * g, "(d/(k-1))^2", Relation::Equals);
  rep.naive.exact = to_fraction_string(Rational(ratio(d, k - 1) * ratio(d, k - 1)));
  rep.bookkeeping_mismatches = static_cast<std::uint64_t>(acc.m[9].sum);
  for (EstimateReport* r : {&rep.improved, &rep.naive_child, &rep.naive})
    r->wall_seconds = wall;
  for (auto& r : rep.by_source)
    r.wall_seconds = wall;
  return rep;
}

ListStatsReport estimate_list_statistics(std::uint32_t d, std::uint32_t k, Colour c, Colour q,
                                         const RunOptions& opt, std::optional<BoundParams> params,
                                         const ListStatsOptions& lopt) {
  require_trials(opt.trials, "estimate_list_statistics");
  require_pair(k, c, q);
  if (c == q)
    throw std::invalid_argument("estimate_list_statistics: c and q must differ");
  if (k < 3)
    throw std::invalid_argument("estimate_list_statistics: k must be >= 3");
  const Stopwatch sw;
  const DisagreementPair pair{c, q};
  const BoundParams bp = params ? *params : params_for(d, k, BoundVariant::V1);
  const double ld = std::log(static_cast<double>(d));
  const double kk = static_cast<double>(k);
  const double beta_point = (1 + lopt.beta_tail_x) * d / (kk - 1);
  const double h_cond = lopt.h_constant * ld;
  const double ep = bp.epsilon;
  const double h_point = std::pow(d, (ep - 1) / (1 + ep)) / (2 * lopt.h_constant * ld);
  const double f_point = (1 - lopt.f_tail_y) * 3 * (1 + ep) / (4 * ld) * std::pow(d, ep / (1 + ep));

  // 0 c-absent hits, 1 lists seen for p_free, 2 bad indices, 3 indices,
  // 4 beta moments, 5 beta tail, 6 f moments, 7 f tail, 8 rescuable among bad,
  // 9 bad total, 10 special hits, 11 special trials, 12 h moments, 13 h tail hits, 14 h conditioned blocks
  using Acc = MomentArray<15>;
  const Acc acc = run_sharded<Acc>(opt, [&](std::uint64_t, Rng& rng, Acc& a) {
    ListFamily x(d);
    for (auto& l : x) {
      const Colour slot = broadcast::sample_non_parent(k, c, rng);
      l = broadcast::sample_list(k, slot, d, rng);
    }
    std::int64_t beta = 0;
    std::ptrdiff_t first_resc = -1;
    for (std::uint32_t i = 0; i < d; ++i) {
      const ColourList& l = x[i];
      if (l.parent_colour != c) {
        a.m[0].add(!l.contains(c));
        a.m[1].add(1);
      }
      const bool bad = classify::is_bad(l, pair, Side::X);
      a.m[2].add(bad);
      a.m[3].add(1);
      if (bad) {
        ++beta;
        const bool resc = classify::is_rescuable(l, pair, Side::X, k);
        a.m[8].add(resc);
        a.m[9].add(1);
        if (resc && first_resc < 0)
          first_resc = i;
      }
      const std::uint32_t free = (k - 1) - l.distinct(k);
      a.m[6].add(free);
      a.m[7].add(free <= f_point);
    }
    a.m[4].add(beta);
    a.m[5].add(beta >= beta_point);
    if (first_resc >= 0) {
      const ColourList& ref = x[static_cast<std::size_t>(first_resc)];
      std::int64_t goods = 0;
      for (std::uint32_t i = 0; i < d; ++i) {
        if (static_cast<std::ptrdiff_t>(i) == first_resc)
          continue;
        a.m[10].add(classify::is_special(x[i], ref, pair, Side::X));
        a.m[11].add(1);
        goods += classify::is_good(x[i], ref, pair, Side::X);
      }
      a.m[12].add(goods);
      if (beta <= h_cond) {
        a.m[14].add(1);
        a.m[13].add(goods <= h_point);
      }
    }
  });
  const double wall = sw.seconds();
  auto hits = [&](int i) { return static_cast<std::uint64_t>(acc.m[i].sum); };
  ListStatsReport rep;
  rep.params = bp;

  rep.p_free = from_counts("p_free", hits(0), hits(1), opt);
  const ExactValue pf = classify::p_free_exact(d, k);
  rep.p_free.attach(pf.approx, "p_free_exact", Relation::Equals);
  rep.p_free.exact = to_fraction_string(pf.exact);

  rep.p_bad = from_counts("p_bad", hits(2), hits(3), opt);
  const ExactValue pb = classify::p_bad_exact(d, k);
  rep.p_bad.attach(pb.approx, "p_bad_exact", Relation::Equals);
  rep.p_bad.exact = to_fraction_string(pb.exact);

  rep.beta = from_moments("beta_v", acc.m[4], opt);
  const auto eb = classify::expected_bad(d, k);
  rep.beta.attach(eb.value.approx, "expected_bad", Relation::Equals);
  rep.beta.exact = to_fraction_string(eb.value.exact);

  rep.beta_tail = from_counts("Pr[beta_v >= (1+x)d/(k-1)]", hits(5), acc.m[5].n, opt);
  rep.beta_tail.attach(eps_ok(bp) ? std::pow(d, -3 * phi(lopt.beta_tail_x) / (4 * (1 + ep))) : kNaN,
                       "d^(-3 phi(x)/(4(1+eps)))", Relation::AtMost);

  rep.f = from_moments("f_v", acc.m[6], opt);
  rep.f.attach((kk - 1) * pf.approx, "(k-1) p_free", Relation::Equals);
  rep.f.exact = to_fraction_string(Rational(pf.exact * static_cast<long>(k - 1)));

  rep.f_tail = from_counts("Pr[f_v <= (1-y) 3(1+eps) d^(eps/(1+eps))/(4 ln d)]", hits(7), acc.m[7].n, opt);
  const double y = lopt.f_tail_y;
  rep.f_tail.attach(eps_ok(bp) ? std::exp(-(3 * y * y / 8) * ((1 + ep) / ld) * std::pow(d, ep / (1 + ep))) : kNaN,
                    "exp(-(3y^2/8)((1+eps)/ln d) d^(eps/(1+eps)))", Relation::AtMost);

  rep.delta_k = from_counts("delta_k", hits(8), hits(9), opt);
  rep.delta_k.attach(eps_ok(bp) ? 1 - std::exp(-3 * (1 + ep) / (8 * ld) * std::pow(d, ep / (1 + ep))) : kNaN,
                     "1 - exp(-3(1+eps) d^(eps/(1+eps))/(8 ln d))", Relation::AtLeast);

  rep.rho_k = from_counts("rho_k", hits(10), hits(11), opt);
  rep.rho_k.attach(eps_ok(bp) ? (10.0 / 9.0) * std::pow(d, -2 / (1 + ep)) : kNaN, "(10/9) d^(-2/(1+eps))",
                   Relation::AtLeast);

  rep.h = from_moments("h_v", acc.m[12], opt);
  rep.h_tail = from_counts("Pr[h_v <= d^((eps-1)/(1+eps))/(2c ln d) | beta_v <= c ln d]", hits(13), hits(14), opt);
  rep.h_tail.attach(eps_ok(bp) ? std::exp(-std::pow(d, (ep - 1) / (1 + ep)) / (8 * lopt.h_constant * ld)) : kNaN,
                    "exp(-d^((eps-1)/(1+eps))/(8c ln d))", Relation::AtMost);

  for (EstimateReport* r : {&rep.p_free, &rep.p_bad, &rep.beta, &rep.beta_tail, &rep.f, &rep.f_tail, &rep.delta_k,
                            &rep.rho_k, &rep.h, &rep.h_tail})
    r->wall_seconds = wall;
  return rep;
}

EventAReport estimate_event_A(std::uint32_t d, std::uint32_t k, const RunOptions& opt,
                              std::optional<BoundParams> params) {
  require_trials(opt.trials, "estimate_event_A");
  if (k < 3)
    throw std::invalid_argument("estimate_event_A: k must be >= 3");
  const Stopwatch sw;
  const DisagreementPair pair{1, 2};
  const BoundParams bp = params ? *params : params_for(d, k, BoundVariant::V1);
  const double ld = std::log(static_cast<double>(d));
  const double e1_point = 100 * ld;
  const double ep = bp.epsilon;
  const double e3_point = eps_ok(bp) ? std::pow(d, 0.8 * (ep - 1) / (1 + ep)) : kNaN;
  using Acc = MomentArray<4>;
  const Acc acc = run_sharded<Acc>(opt, [&](std::uint64_t, Rng& rng, Acc& a) {
    ListFamily x(d);
    for (auto& l : x) {
      const Colour slot = broadcast::sample_non_parent(k, pair.c, rng);
      l = broadcast::sample_list(k, slot, d, rng);
    }
    std::uint32_t beta = 0;
    bool e2 = false, e3 = false;
    for (std::uint32_t j = 0; j < d; ++j) {
      if (!classify::is_bad(x[j], pair, Side::X))
        continue;
      ++beta;
      if (!classify::is_rescuable(x[j], pair, Side::X, k)) {
        e2 = true;
        continue;
      }
      if (e3 || !std::isfinite(e3_point))
        continue;
      std::uint32_t specials = 0;
      for (std::uint32_t i = 0; i < d; ++i)
        specials += i != j && classify::is_special(x[i], x[j], pair, Side::X);
      e3 = specials < e3_point;
    }
    const bool e1 = beta >= e1_point;
    a.m[0].add(e1);
    a.m[1].add(e2);
    a.m[2].add(e3);
    a.m[3].add(e1 || e2 || e3);
  });
  const double wall = sw.seconds();
  EventAReport rep;
  rep.params = bp;
  auto mk = [&](const char* name, int i) {
    EstimateReport r = from_counts(name, static_cast<std::uint64_t>(acc.m[i].sum), acc.m[i].n, opt);
    r.wall_seconds = wall;
    return r;
  };
  rep.e1 = mk("E1 beta_v >= 100 ln d", 0);
  rep.e2 = mk("E2 bad non-rescuable list", 1);
  rep.e3 = mk("E3 rescuable with few specials", 2);
  if (!std::isfinite(e3_point))
    rep.e3.reference_label = "threshold undefined for eps <= 0";
  rep.any = mk("A = E1 or E2 or E3", 3);
  rep.any.attach(5 * std::pow(static_cast<double>(d), -250.0), "5 d^(-250)", Relation::AtMost);
  if (!eps_ok(bp))
    rep.any.verdict = Verdict::NotApplicable;
  return rep;
}

GofReport gof_marginal_test(const TreeShape& shape, std::uint32_t k, Colour root_colour, CouplingKind kind,
                            Colour counterpart, const RunOptions& opt) {
  if (opt.trials < 1)
    throw std::invalid_argument("gof_marginal_test: trials must be >= 1");
  const oracle::ExactMeasure mx = oracle::enumerate_measure(shape, k, root_colour);
  const oracle::ExactMeasure my = oracle::enumerate_measure(shape, k, counterpart);
  const std::size_t nx = mx.support.size(), ny = my.support.size();

  struct Acc {
    std::vector<std::uint64_t> x, y;
    void merge(const Acc& o) {
      if (x.size() < o.x.size()) {
        x.resize(o.x.size());
        y.resize(o.y.size());
      }
      for (std::size_t i = 0; i < o.x.size(); ++i)
        x[i] += o.x[i];
      for (std::size_t i = 0; i < o.y.size(); ++i)
        y[i] += o.y[i];
    }
  };
  auto locate = [](const oracle::ExactMeasure& m, const std::vector<Colour>& v) {
    auto it = std::lower_bound(m.support.begin(), m.support.end(), v);
    if (it == m.support.end() || *it != v)
      throw std::logic_error("gof_marginal_test: coupled output outside the exact support");
    return static_cast<std::size_t>(it - m.support.begin());
  };
  const Acc acc = run_sharded<Acc>(opt, [&](std::uint64_t, Rng& rng, Acc& a) {
    if (a.x.empty()) {
      a.x.assign(nx, 0);
      a.y.assign(ny, 0);
    }
    const auto t = coupling::couple_tree(shape, k, root_colour, counterpart, kind, rng);
    ++a.x[locate(mx, t.x.colours)];
    ++a.y[locate(my, t.y.colours)];
  });
  GofReport rep;
  rep.trials = opt.trials;
  rep.seed = opt.seed;
  rep.support = nx;
  auto probs = [](const oracle::ExactMeasure& m) {
    std::vector<double> p;
    for (const auto& w : m.mass)
      p.push_back(to_double(w));
    return p;
  };
  if (nx == 1) {
    rep.x = stats::ChiSquareResult{0.0, 0, 1.0, 1, 1};
    rep.y = rep.x;
    return rep;
  }
  rep.x = stats::chi_square_gof(acc.x, probs(mx));
  rep.y = stats::chi_square_gof(acc.y, probs(my));
  return rep;
}

EstimateReport estimate_tv_upper(const TreeShape& shape, std::uint32_t k, Colour c, Colour q, CouplingKind kind,
                                 const RunOptions& opt) {
  require_trials(opt.trials, "estimate_tv_upper");
  require_pair(k, c, q);
  tree_model::validate(shape);
  const Stopwatch sw;
  using Acc = MomentArray<1>;
  const Acc acc = run_sharded<Acc>(opt, [&](std::uint64_t, Rng& rng, Acc& a) {
    a.m[0].add(coupling::disagreement_profile(shape, k, c, q, kind, rng).any_leaf_disagreement());
  });
  EstimateReport r = from_counts("Pr[X(L_h) != Y(L_h)]", static_cast<std::uint64_t>(acc.m[0].sum), acc.m[0].n, opt);
  try {
    const Rational tv = oracle::tv_distance_leaves(shape, k, c, q);
    r.attach(to_double(tv), "exact leaf TV", Relation::AtLeast);
    r.exact = to_fraction_string(tv);
  } catch (const oracle::BudgetExceeded&) {
    r.reference_label = "exact leaf TV not enumerable";
  }
  r.wall_seconds = sw.seconds();
  return r;
}

EstimateReport estimate_smatrix_delta(std::size_t N, std::uint32_t cap_l, const RunOptions& opt) {
  require_trials(opt.trials, "estimate_smatrix_delta");
  const Stopwatch sw;
  using Acc = MomentArray<1>;
  const Acc acc = run_sharded<Acc>(opt, [&](std::uint64_t, Rng& rng, Acc& a) {
    const auto run = walks::s_matrix_run(N, cap_l, rng);
    a.m[0].add(run.delta);
  });
  EstimateReport r = from_moments("|Delta| N=" + std::to_string(N), acc.m[0], opt);
  r.attach(walks::claimed_delta_decay(N), "(2.3/pi)^(0.43 ln N)", Relation::AtMost);
  r.wall_seconds = sw.seconds();
  return r;
}

} // namespace treecouple::estimators
