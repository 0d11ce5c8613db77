#include "cli.hpp"
#include "output.hpp"

#include "treecouple/broadcast.hpp"
#include "treecouple/coupling.hpp"
#include "treecouple/estimators.hpp"
#include "treecouple/oracle.hpp"
#include "treecouple/walks.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <map>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <thread>

namespace treecouple::cli {

namespace {

using nlohmann::json;
namespace est = estimators;

// Offending-field errors are reported as invalid configuration.
struct ConfigError : std::invalid_argument {
  ConfigError(const std::string& field, const std::string& why)
      : std::invalid_argument("field '" + field + "' " + why) {}
};

struct Config {
  std::string command;
  std::uint32_t d = 2;
  std::optional<std::uint32_t> k;
  std::optional<double> epsilon;
  std::string variant = "v1";
  std::uint32_t height = 2;
  std::uint32_t c = 1;
  std::uint32_t q = 2;
  std::string coupling = "improved";
  std::uint64_t trials = 1000;
  std::uint64_t seed = 1;
  unsigned threads = 1;
  std::optional<std::string> format;
  std::string output;

  std::uint64_t samples = 1;
  std::uint32_t cap = 10;
  std::uint64_t n = 10000;
  std::uint32_t cap_l = 10;
  std::uint32_t max_i = 10;
  std::optional<std::uint32_t> parent;
  std::vector<std::uint32_t> present, absent;
  std::optional<std::vector<std::uint32_t>> unused_outside;
  double beta_x = 1.0;
  double h_const = 3.0;
  double f_y = 0.5;

  // Resolved.
  std::uint32_t k_value = 0;
  std::string k_source;
};

struct Document {
  std::string body;
  std::size_t rows = 0;
  std::optional<double> wall_seconds;
};

est::BoundVariant variant_of(const Config& c) { return c.variant == "v2" ? est::BoundVariant::V2 : est::BoundVariant::V1; }
CouplingKind kind_of(const Config& c) { return c.coupling == "naive" ? CouplingKind::Naive : CouplingKind::Improved; }
TreeShape shape_of(const Config& c) { return TreeShape{c.d, c.height}; }
est::RunOptions run_of(const Config& c) { return est::RunOptions{c.trials, c.seed, c.threads}; }

est::BoundParams params_of(const Config& c) {
  return est::params_for(c.d, c.k_value, variant_of(c), c.epsilon);
}

std::string format_of(const Config& c, const std::string& fallback = "csv") { return c.format.value_or(fallback); }

// Resolves k from --k or from --epsilon and --variant.
void resolve_k(Config& c) {
  if (c.k) {
    c.k_value = *c.k;
    c.k_source = "given";
  } else if (c.epsilon) {
    if (c.d < 2)
      throw ConfigError("d", "must be >= 2 to derive k from epsilon");
    if (!(*c.epsilon > 0))
      throw ConfigError("epsilon", "must be > 0");
    c.k_value = est::k_from_epsilon(c.d, *c.epsilon, variant_of(c));
    c.k_source = "epsilon-" + c.variant;
  } else {
    throw ConfigError("k", "is required (or give --epsilon with --variant)");
  }
  if (c.k_value < 2)
    throw ConfigError("k", "must be >= 2 (got " + std::to_string(c.k_value) + ")");
}

void need_tree(const Config& c) {
  if (c.d < 1)
    throw ConfigError("d", "must be >= 1");
}

void need_colours(const Config& c, bool allow_identity) {
  if (c.c < 1 || c.c > c.k_value)
    throw ConfigError("c", "must lie in 1..k (got " + std::to_string(c.c) + ")");
  if (c.q < 1 || c.q > c.k_value)
    throw ConfigError("q", "must lie in 1..k (got " + std::to_string(c.q) + ")");
  if (!allow_identity && c.c == c.q)
    throw ConfigError("q", "must differ from c for '" + c.command + "'");
}

void need_trials(const Config& c, std::uint64_t lo = 100) {
  if (c.trials < lo)
    throw ConfigError("trials", "must be >= " + std::to_string(lo) + " (got " + std::to_string(c.trials) + ")");
}

json config_json(const Config& c) {
  // threads is left out on purpose: it changes speed, never the numbers.
  json j;
  j["command"] = c.command;
  j["d"] = c.d;
  if (c.k_value)
    j["k"] = c.k_value;
  if (!c.k_source.empty())
    j["k_source"] = c.k_source;
  if (c.epsilon)
    j["epsilon"] = *c.epsilon;
  j["variant"] = c.variant;
  j["height"] = c.height;
  j["c"] = c.c;
  j["q"] = c.q;
  j["coupling"] = c.coupling;
  j["trials"] = c.trials;
  j["seed"] = c.seed;
  j["samples"] = c.samples;
  j["cap"] = c.cap;
  j["n"] = c.n;
  j["cap_l"] = c.cap_l;
  j["max_i"] = c.max_i;
  j["beta_x"] = c.beta_x;
  j["h_const"] = c.h_const;
  j["f_y"] = c.f_y;
  return j;
}

json num(double x) { return std::isfinite(x) ? json(x) : json(nullptr); }

json report_json(const est::EstimateReport& r) {
  json j;
  j["name"] = r.name;
  j["trials"] = r.trials;
  j["mean"] = num(r.mean);
  j["stderr"] = num(r.std_error);
  j["reference"] = r.reference ? num(*r.reference) : json(nullptr);
  j["reference_label"] = r.reference_label;
  j["relation"] = est::relation_name(r.relation);
  j["verdict"] = est::verdict_name(r.verdict);
  j["exact"] = r.exact ? json(*r.exact) : json(nullptr);
  if (r.wilson)
    j["wilson"] = {num(r.wilson->first), num(r.wilson->second)};
  j["seed"] = r.seed;
  return j;
}

const std::vector<std::string> kReportHeader{"name",     "trials",  "mean",  "stderr",    "reference", "reference_label",
                                             "relation", "verdict", "exact", "wilson_lo", "wilson_hi"};

void report_row(Csv& csv, const est::EstimateReport& r) {
  csv.row({r.name, std::to_string(r.trials), fmt_double(r.mean), fmt_double(r.std_error),
           r.reference ? fmt_double(*r.reference) : "NA", r.reference_label, est::relation_name(r.relation),
           est::verdict_name(r.verdict), r.exact.value_or("NA"), r.wilson ? fmt_double(r.wilson->first) : "NA",
           r.wilson ? fmt_double(r.wilson->second) : "NA"});
}

Document report_table(const Config& c, const std::vector<const est::EstimateReport*>& reps, json extra = json::object()) {
  Document doc;
  doc.rows = reps.size();
  double wall = 0;
  for (const auto* r : reps)
    wall = std::max(wall, r->wall_seconds);
  doc.wall_seconds = wall;
  if (format_of(c) == "json") {
    json j;
    j["config"] = config_json(c);
    j["reports"] = json::array();
    for (const auto* r : reps)
      j["reports"].push_back(report_json(*r));
    for (auto& [key, v] : extra.items())
      j[key] = v;
    doc.body = j.dump(2) + "\n";
  } else {
    Csv csv(kReportHeader);
    for (const auto* r : reps)
      report_row(csv, *r);
    doc.body = csv.str();
  }
  return doc;
}

json params_json(const est::BoundParams& p) {
  return json{{"epsilon", num(p.epsilon)}, {"variant", est::variant_name(p.variant)}};
}

Document finish_json(const Config& c, json j, std::size_t rows) {
  j["config"] = config_json(c);
  return Document{j.dump(2) + "\n", rows, std::nullopt};
}

std::string join(const std::vector<Colour>& v, char sep = ' ') {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i)
      s += sep;
    s += std::to_string(v[i]);
  }
  return s;
}

// ---- subcommands ----

Document cmd_broadcast(Config& c) {
  need_tree(c);
  resolve_k(c);
  if (c.c < 1 || c.c > c.k_value)
    throw ConfigError("c", "root colour must lie in 1..k");
  if (c.samples < 1)
    throw ConfigError("samples", "must be >= 1");
  const TreeShape shape = shape_of(c);
  std::vector<Colouring> cols;
  for (std::uint64_t s = 0; s < c.samples; ++s) {
    Rng rng = Rng::for_trial(c.seed, s);
    cols.push_back(broadcast::sample_broadcast(shape, c.k_value, c.c, rng));
  }
  if (format_of(c) == "json") {
    json j;
    j["colourings"] = json::array();
    for (const auto& col : cols)
      j["colourings"].push_back(col.colours);
    return finish_json(c, std::move(j), cols.size());
  }
  Csv csv({"sample", "vertex", "level", "colour"});
  std::size_t rows = 0;
  for (std::size_t s = 0; s < cols.size(); ++s) {
    for (std::uint32_t l = 0; l <= shape.height; ++l) {
      const auto r = tree_model::level_range(shape, l);
      for (std::uint64_t v = r.first; v < r.end; ++v, ++rows)
        csv.row({std::to_string(s), std::to_string(v), std::to_string(l), std::to_string(cols[s].colours[v])});
    }
  }
  return Document{csv.str(), rows, std::nullopt};
}

Document cmd_couple(Config& c) {
  need_tree(c);
  resolve_k(c);
  need_colours(c, true);
  const TreeShape shape = shape_of(c);
  Rng rng = Rng::for_trial(c.seed, 0);
  const auto t = coupling::couple_tree(shape, c.k_value, c.c, c.q, kind_of(c), rng);
  std::map<std::uint64_t, DisagreementSource> src;
  for (const auto& r : t.records)
    src[r.vertex] = r.source;
  if (format_of(c, "json") == "json") {
    json j;
    j["per_level"] = t.per_level;
    j["fell_back_to_naive"] = t.fell_back_to_naive;
    j["records"] = json::array();
    for (const auto& r : t.records)
      j["records"].push_back({{"vertex", r.vertex}, {"level", r.level}, {"source", source_name(r.source)}});
    j["x"] = t.x.colours;
    j["y"] = t.y.colours;
    return finish_json(c, std::move(j), t.records.size());
  }
  Csv csv({"vertex", "level", "x", "y", "disagree", "source"});
  std::size_t rows = 0;
  for (std::uint32_t l = 0; l <= shape.height; ++l) {
    const auto r = tree_model::level_range(shape, l);
    for (std::uint64_t v = r.first; v < r.end; ++v, ++rows) {
      const bool dis = t.x.colours[v] != t.y.colours[v];
      const auto it = src.find(v);
      csv.row({std::to_string(v), std::to_string(l), std::to_string(t.x.colours[v]), std::to_string(t.y.colours[v]),
               dis ? "1" : "0", it == src.end() ? "" : source_name(it->second)});
    }
  }
  return Document{csv.str(), rows, std::nullopt};
}

Document cmd_decay(Config& c) {
  need_tree(c);
  resolve_k(c);
  need_colours(c, true);
  need_trials(c);
  const auto rep =
      est::estimate_level_disagreements(shape_of(c), c.k_value, c.c, c.q, kind_of(c), run_of(c), params_of(c));
  Document doc;
  doc.rows = rep.levels.size();
  doc.wall_seconds = rep.levels.empty() ? 0.0 : rep.levels.front().wall_seconds;
  if (format_of(c) == "json") {
    json j;
    j["params"] = params_json(rep.params);
    j["naive_ratio"] = num(rep.naive_ratio);
    j["levels"] = json::array();
    for (std::size_t l = 0; l < rep.levels.size(); ++l) {
      const auto& r = rep.levels[l];
      j["levels"].push_back({{"level", l},
                             {"mean", num(r.mean)},
                             {"stderr", num(r.std_error)},
                             {"bound_v1", num(rep.bound_v1[l])},
                             {"bound_v2", num(rep.bound_v2[l])},
                             {"verdict", est::verdict_name(r.verdict)}});
    }
    doc.body = finish_json(c, std::move(j), doc.rows).body;
    return doc;
  }
  Csv csv({"level", "mean", "stderr", "bound_v1", "bound_v2"});
  for (std::size_t l = 0; l < rep.levels.size(); ++l)
    csv.row({std::to_string(l), fmt_double(rep.levels[l].mean), fmt_double(rep.levels[l].std_error),
             fmt_double(rep.bound_v1[l]), fmt_double(rep.bound_v2[l])});
  doc.body = csv.str();
  return doc;
}

Document cmd_branching(Config& c) {
  need_tree(c);
  resolve_k(c);
  need_colours(c, false);
  need_trials(c);
  const auto rep = est::estimate_branching(c.d, c.k_value, c.c, c.q, run_of(c));
  std::vector<const est::EstimateReport*> rs{&rep.improved};
  for (const auto& r : rep.by_source)
    rs.push_back(&r);
  rs.push_back(&rep.naive_child);
  rs.push_back(&rep.naive);
  return report_table(c, rs, json{{"bookkeeping_mismatches", rep.bookkeeping_mismatches}});
}

Document cmd_stats(Config& c) {
  need_tree(c);
  resolve_k(c);
  need_colours(c, false);
  need_trials(c);
  if (c.k_value < 3)
    throw ConfigError("k", "must be >= 3 for list statistics");
  const auto rep = est::estimate_list_statistics(c.d, c.k_value, c.c, c.q, run_of(c), params_of(c),
                                                 est::ListStatsOptions{c.beta_x, c.h_const, c.f_y});
  return report_table(c,
                      {&rep.p_free, &rep.p_bad, &rep.beta, &rep.beta_tail, &rep.f, &rep.f_tail, &rep.delta_k,
                       &rep.rho_k, &rep.h, &rep.h_tail},
                      json{{"params", params_json(rep.params)}});
}

Document cmd_eventA(Config& c) {
  need_tree(c);
  resolve_k(c);
  need_trials(c);
  if (c.k_value < 3)
    throw ConfigError("k", "must be >= 3 for event A");
  const auto rep = est::estimate_event_A(c.d, c.k_value, run_of(c), params_of(c));
  return report_table(c, {&rep.e1, &rep.e2, &rep.e3, &rep.any}, json{{"params", params_json(rep.params)}});
}

Document cmd_validate(Config& c) {
  need_tree(c);
  resolve_k(c);
  need_colours(c, true);
  need_trials(c, 1);
  const auto rep = est::gof_marginal_test(shape_of(c), c.k_value, c.c, kind_of(c), c.q, run_of(c));
  auto side = [](const stats::ChiSquareResult& r) {
    return json{{"statistic", num(r.statistic)}, {"dof", r.dof},          {"p_value", num(r.p_value)},
                {"cells_before", r.cells_before}, {"cells_after", r.cells_after}};
  };
  if (format_of(c) == "json") {
    json j;
    j["x"] = side(rep.x);
    j["y"] = side(rep.y);
    j["support"] = rep.support;
    return finish_json(c, std::move(j), 2);
  }
  Csv csv({"side", "statistic", "dof", "p_value", "cells_before", "cells_after"});
  for (const auto& [name, r] : {std::pair{"X", rep.x}, std::pair{"Y", rep.y}})
    csv.row({name, fmt_double(r.statistic), std::to_string(r.dof), fmt_double(r.p_value),
             std::to_string(r.cells_before), std::to_string(r.cells_after)});
  return Document{csv.str(), 2, std::nullopt};
}

Document cmd_tvbound(Config& c) {
  need_tree(c);
  resolve_k(c);
  need_colours(c, true);
  need_trials(c);
  const auto rep = est::estimate_tv_upper(shape_of(c), c.k_value, c.c, c.q, kind_of(c), run_of(c));
  return report_table(c, {&rep});
}

Document cmd_oracle_tv(Config& c) {
  need_tree(c);
  resolve_k(c);
  need_colours(c, true);
  const Rational tv = oracle::tv_distance_leaves(shape_of(c), c.k_value, c.c, c.q);
  if (format_of(c) == "json")
    return finish_json(c, json{{"tv_exact", to_fraction_string(tv)}, {"tv_approx", to_double(tv)}}, 1);
  Csv csv({"tv_exact", "tv_approx"});
  csv.row({to_fraction_string(tv), fmt_double(to_double(tv))});
  return Document{csv.str(), 1, std::nullopt};
}

Document cmd_oracle_measure(Config& c) {
  need_tree(c);
  resolve_k(c);
  if (c.c < 1 || c.c > c.k_value)
    throw ConfigError("c", "root colour must lie in 1..k");
  const auto m = oracle::enumerate_measure(shape_of(c), c.k_value, c.c);
  if (format_of(c) == "json") {
    json j;
    j["support"] = json::array();
    for (std::size_t i = 0; i < m.support.size(); ++i)
      j["support"].push_back({{"configuration", m.support[i]}, {"mass", to_fraction_string(m.mass[i])}});
    j["total"] = to_fraction_string(m.total());
    return finish_json(c, std::move(j), m.support.size());
  }
  Csv csv({"configuration", "mass_exact", "mass"});
  for (std::size_t i = 0; i < m.support.size(); ++i)
    csv.row({join(m.support[i]), to_fraction_string(m.mass[i]), fmt_double(to_double(m.mass[i]))});
  return Document{csv.str(), m.support.size(), std::nullopt};
}

Document cmd_oracle_listlaw(Config& c) {
  need_tree(c);
  resolve_k(c);
  oracle::ListConstraints lc;
  auto check_colour = [&](const char* field, std::uint32_t a) {
    if (a < 1 || a > c.k_value)
      throw ConfigError(field, "colour " + std::to_string(a) + " outside 1..k");
  };
  if (c.parent) {
    check_colour("parent", *c.parent);
    lc.excluded_parent = *c.parent;
  }
  for (auto a : c.present)
    check_colour("present", a);
  for (auto a : c.absent)
    check_colour("absent", a);
  lc.present.assign(c.present.begin(), c.present.end());
  lc.absent.assign(c.absent.begin(), c.absent.end());
  if (c.unused_outside) {
    for (auto a : *c.unused_outside)
      check_colour("unused-outside", a);
    lc.unused_outside = std::vector<Colour>(c.unused_outside->begin(), c.unused_outside->end());
  }
  const auto m = oracle::conditional_list_measure(c.d, c.k_value, lc);
  if (format_of(c) == "json") {
    json j;
    j["constraints"] = lc.describe();
    j["support"] = json::array();
    for (std::size_t i = 0; i < m.support.size(); ++i)
      j["support"].push_back({{"list", m.support[i]}, {"mass", to_fraction_string(m.mass[i])}});
    return finish_json(c, std::move(j), m.support.size());
  }
  Csv csv({"list", "mass_exact", "mass"});
  for (std::size_t i = 0; i < m.support.size(); ++i)
    csv.row({join(m.support[i]), to_fraction_string(m.mass[i]), fmt_double(to_double(m.mass[i]))});
  return Document{csv.str(), m.support.size(), std::nullopt};
}

Document cmd_oracle_identities(Config& c) {
  need_tree(c);
  resolve_k(c);
  need_colours(c, false);
  const DisagreementPair pair{c.c, c.q};
  std::vector<std::pair<std::string, oracle::IdentityCheck>> all;
  for (auto& x : oracle::rescuable_vs_good_checks(c.d, c.k_value, pair))
    all.emplace_back("rescuable-vs-good", std::move(x));
  for (auto& x : oracle::good_vs_fail_checks(c.d, c.k_value, pair))
    all.emplace_back("good-vs-fail", std::move(x));
  for (auto& x : oracle::conditioning_gap_report(c.d, c.k_value, pair))
    all.emplace_back("conditioning-gap", std::move(x));
  if (format_of(c) == "json") {
    json j;
    j["checks"] = json::array();
    for (const auto& [group, x] : all)
      j["checks"].push_back({{"group", group},
                             {"check", x.name},
                             {"equal", x.equal},
                             {"tv_exact", to_fraction_string(x.tv)},
                             {"cases", x.cases}});
    return finish_json(c, std::move(j), all.size());
  }
  Csv csv({"group", "check", "d", "k", "equal", "tv_exact", "cases"});
  for (const auto& [group, x] : all)
    csv.row({group, x.name, std::to_string(x.d), std::to_string(x.k), x.equal ? "1" : "0", to_fraction_string(x.tv),
             std::to_string(x.cases)});
  return Document{csv.str(), all.size(), std::nullopt};
}

Document cmd_walk_fp(Config& c) {
  Rational partial = 0;
  json rows = json::array();
  Csv csv({"i", "prob_exact", "prob", "partial_sum_exact"});
  for (std::uint32_t i = 0; i <= c.max_i; ++i) {
    const Rational p = walks::first_passage_prob(i);
    partial += p;
    csv.row({std::to_string(i), to_fraction_string(p), fmt_double(to_double(p)), to_fraction_string(partial)});
    rows.push_back({{"i", i},
                    {"prob_exact", to_fraction_string(p)},
                    {"prob", to_double(p)},
                    {"partial_sum_exact", to_fraction_string(partial)}});
  }
  if (format_of(c) == "json")
    return finish_json(c, json{{"first_passage", rows}}, c.max_i + 1);
  return Document{csv.str(), c.max_i + 1, std::nullopt};
}

Document cmd_walk_dp(Config& c) {
  if (c.cap < 1)
    throw ConfigError("cap", "must be >= 1");
  const auto dp = walks::absorbed_walk_dp({c.cap});
  const auto pm = walks::conditional_positive_mean(c.cap);
  if (format_of(c, "json") == "json") {
    json j;
    j["cap"] = c.cap;
    j["survival"] = to_fraction_string(dp.survival);
    j["survival_approx"] = to_double(dp.survival);
    j["absorbed"] = to_fraction_string(dp.absorbed);
    j["conditional_mean"] = to_fraction_string(dp.conditional_mean);
    j["conditional_mean_approx"] = to_double(dp.conditional_mean);
    j["expected_stopped_plus_one"] = to_fraction_string(dp.expected_stopped_plus_one);
    j["claimed_stopped_bound"] = walks::claimed_stopped_bound();
    j["conditional_mean_bound"] = pm.bound;
    j["conditional_mean_exceeds_bound"] = pm.exceeds_bound;
    j["distribution"] = json::array();
    for (std::size_t i = 0; i < dp.distribution.size(); ++i)
      j["distribution"].push_back(
          {{"position", static_cast<long>(i) - 1}, {"mass", to_fraction_string(dp.distribution[i])}});
    return finish_json(c, std::move(j), dp.distribution.size());
  }
  Csv csv({"quantity", "exact", "approx"});
  csv.row({"survival", to_fraction_string(dp.survival), fmt_double(to_double(dp.survival))});
  csv.row({"absorbed", to_fraction_string(dp.absorbed), fmt_double(to_double(dp.absorbed))});
  csv.row({"conditional_mean", to_fraction_string(dp.conditional_mean), fmt_double(to_double(dp.conditional_mean))});
  csv.row({"expected_stopped_plus_one", to_fraction_string(dp.expected_stopped_plus_one),
           fmt_double(to_double(dp.expected_stopped_plus_one))});
  csv.row({"claimed_stopped_bound", "NA", fmt_double(walks::claimed_stopped_bound())});
  csv.row({"conditional_mean_bound", "NA", fmt_double(pm.bound)});
  return Document{csv.str(), 6, std::nullopt};
}

Document cmd_walk_smatrix(Config& c) {
  if (c.n < 1)
    throw ConfigError("n", "must be >= 1");
  if (c.cap_l < 1)
    throw ConfigError("cap-l", "must be >= 1");
  need_trials(c);
  const auto rep = est::estimate_smatrix_delta(c.n, c.cap_l, run_of(c));
  return report_table(c, {&rep});
}

const char* kSeedHelp =
    "Seeds: trial i of a run draws from mt19937_64 seeded with\n"
    "  splitmix64(splitmix64(seed) ^ splitmix64(i + 0x9e3779b97f4a7c15)),\n"
    "where splitmix64(x): z = x + 0x9e3779b97f4a7c15; z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9;\n"
    "z = (z ^ (z >> 27)) * 0x94d049bb133111eb; return z ^ (z >> 31).\n"
    "Bounded draws use Lemire's multiply-shift with rejection. 'couple' uses trial 0;\n"
    "'broadcast' uses trials 0..samples-1. Output does not depend on --threads.\n"
    "Exit codes: 0 ok, 1 failure, 2 invalid configuration, 3 budget refusal.";

} // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  Config cfg;
  cfg.threads = std::max(1u, std::thread::hardware_concurrency());

  CLI::App app{"Broadcast colouring couplings on d-ary trees: samplers, exact oracles, estimators"};
  app.footer(kSeedHelp);
  app.set_config("--config", "", "key=value file mirroring the flags (flags win)");
  app.require_subcommand(1, 1);
  app.fallthrough();

  app.add_option("--d", cfg.d, "tree degree");
  app.add_option("--k", cfg.k, "number of colours");
  app.add_option("--epsilon", cfg.epsilon, "epsilon; derives k when --k is absent");
  app.add_option("--variant", cfg.variant, "bound parameterisation")->check(CLI::IsMember({"v1", "v2"}));
  app.add_option("--height", cfg.height, "tree height");
  app.add_option("--c", cfg.c, "X root colour");
  app.add_option("--q", cfg.q, "Y root colour");
  app.add_option("--coupling", cfg.coupling, "coupling kind")->check(CLI::IsMember({"naive", "improved"}));
  app.add_option("--trials", cfg.trials, "Monte Carlo trials");
  app.add_option("--seed", cfg.seed, "64-bit master seed");
  app.add_option("--threads", cfg.threads, "worker threads")->check(CLI::PositiveNumber);
  app.add_option("--format", cfg.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
  app.add_option("--output", cfg.output, "output path (atomic write); stdout when absent");
  app.add_option("--samples", cfg.samples, "colourings to sample (broadcast)");
  app.add_option("--cap", cfg.cap, "walk truncation (walk dp)");
  app.add_option("--n", cfg.n, "column budget N (walk smatrix)");
  app.add_option("--cap-l", cfg.cap_l, "sub-walk cap (walk smatrix)");
  app.add_option("--max-i", cfg.max_i, "largest i (walk fp)");
  app.add_option("--parent", cfg.parent, "excluded parent colour (oracle listlaw)");
  app.add_option("--present", cfg.present, "colours required present (oracle listlaw)")->delimiter(',');
  app.add_option("--absent", cfg.absent, "colours required absent (oracle listlaw)")->delimiter(',');
  app.add_option("--unused-outside", cfg.unused_outside, "some colour outside this set is unused (oracle listlaw)")
      ->delimiter(',');
  app.add_option("--beta-x", cfg.beta_x, "beta tail point x (stats)");
  app.add_option("--h-const", cfg.h_const, "constant c in beta <= c ln d (stats)");
  app.add_option("--f-y", cfg.f_y, "f tail parameter y (stats)");

  std::map<CLI::App*, std::pair<std::string, Document (*)(Config&)>> leaf;
  auto add = [&](CLI::App* parent, const char* name, const char* help, Document (*fn)(Config&),
                 const std::string& full) {
    CLI::App* s = parent->add_subcommand(name, help);
    s->fallthrough();
    leaf[s] = {full, fn};
    return s;
  };
  add(&app, "broadcast", "sample and dump colourings", cmd_broadcast, "broadcast");
  add(&app, "couple", "one coupled run with disagreement records", cmd_couple, "couple");
  add(&app, "decay", "per-level disagreement means", cmd_decay, "decay");
  add(&app, "branching", "grandchild disagreements per block", cmd_branching, "branching");
  add(&app, "stats", "list statistics", cmd_stats, "stats");
  add(&app, "eventA", "frequencies of E1, E2, E3 and their union", cmd_eventA, "eventA");
  add(&app, "validate", "chi-square of coupled marginals against the exact law", cmd_validate, "validate");
  add(&app, "tvbound", "leaf disagreement frequency against the exact TV", cmd_tvbound, "tvbound");
  CLI::App* orc = app.add_subcommand("oracle", "exact enumeration");
  orc->fallthrough();
  orc->require_subcommand(1, 1);
  add(orc, "tv", "leaf TV distance", cmd_oracle_tv, "oracle tv");
  add(orc, "measure", "full conditional measure", cmd_oracle_measure, "oracle measure");
  add(orc, "listlaw", "conditional list law", cmd_oracle_listlaw, "oracle listlaw");
  add(orc, "identities", "identical-distribution checks of the list couplings", cmd_oracle_identities,
      "oracle identities");
  CLI::App* wk = app.add_subcommand("walk", "absorbed random walk");
  wk->fallthrough();
  wk->require_subcommand(1, 1);
  add(wk, "fp", "first-passage law", cmd_walk_fp, "walk fp");
  add(wk, "dp", "exact stopped-walk dynamic program", cmd_walk_dp, "walk dp");
  add(wk, "smatrix", "round construction |Delta|", cmd_walk_smatrix, "walk smatrix");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kInvalidConfig;
  }

  const std::pair<std::string, Document (*)(Config&)>* chosen = nullptr;
  for (auto& [sub, entry] : leaf)
    if (sub->parsed())
      chosen = &entry;
  if (!chosen) {
    err << "error: no subcommand selected\n";
    return kInvalidConfig;
  }
  cfg.command = chosen->first;

  try {
    const Document doc = chosen->second(cfg);
    if (cfg.output.empty()) {
      out << doc.body;
    } else {
      write_atomic(cfg.output, doc.body);
      out << cfg.command << ": wrote " << doc.rows << " rows to " << cfg.output << "\n";
    }
    if (doc.wall_seconds)
      err << "wall_seconds=" << fmt_double(*doc.wall_seconds) << "\n";
    return kOk;
  } catch (const oracle::BudgetExceeded& e) {
    err << "refused: " << e.what() << "\n";
    return kBudgetRefused;
  } catch (const std::length_error& e) {
    err << "refused: " << e.what() << "\n";
    return kBudgetRefused;
  } catch (const stats::InsufficientCells& e) {
    err << "refused: " << e.what() << "\n";
    return kBudgetRefused;
  } catch (const std::invalid_argument& e) {
    err << "invalid config: " << e.what() << "\n";
    return kInvalidConfig;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kFailure;
  }
}

} // namespace treecouple::cli
