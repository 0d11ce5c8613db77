// Acceptance runner: one [PASS]/[FAIL] line per primary criterion.
//   treecouple_acceptance [--criterion N]
#include "cli.hpp"

#include "treecouple/classify.hpp"
#include "treecouple/estimators.hpp"
#include "treecouple/oracle.hpp"
#include "treecouple/walks.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

using namespace treecouple;
namespace est = treecouple::estimators;

namespace {

struct Outcome {
  bool pass = true;
  std::vector<std::string> notes;

  void require(bool ok, const std::string& what) {
    if (!ok)
      pass = false;
    notes.push_back(std::string(ok ? "ok   " : "FAIL ") + what);
  }
  void note(const std::string& what) { notes.push_back("info " + what); }
};

std::string f64(double x) {
  char b[40];
  std::snprintf(b, sizeof b, "%.6g", x);
  return b;
}

unsigned workers() { return std::max(1u, std::thread::hardware_concurrency()); }

std::string within(const est::EstimateReport& r) {
  return r.name + " mean=" + f64(r.mean) + " se=" + f64(r.std_error) +
         (r.reference ? " ref=" + f64(*r.reference) : std::string());
}

bool within4(const est::EstimateReport& r) { return std::abs(r.mean - *r.reference) <= 4 * r.std_error; }

// Independent enumerator: paths of length 2i+1 first reaching -1 at the end.
Rational paths_first_passage(std::uint32_t i) {
  const std::uint32_t n = 2 * i + 1;
  std::uint64_t good = 0;
  for (std::uint64_t bits = 0; bits < (std::uint64_t{1} << n); ++bits) {
    int pos = 0, first = -1;
    for (std::uint32_t s = 0; s < n && first < 0; ++s) {
      pos += (bits >> s & 1) ? 1 : -1;
      if (pos == -1)
        first = static_cast<int>(s);
    }
    good += first == static_cast<int>(n - 1);
  }
  BigInt den;
  mpz_ui_pow_ui(den.get_mpz_t(), 2, n);
  Rational r(BigInt(static_cast<unsigned long>(good)), den);
  r.canonicalize();
  return r;
}

Outcome c1() {
  Outcome o;
  bool all = true;
  for (std::uint32_t i = 0; i <= 10; ++i)
    all &= walks::first_passage_prob(i) == paths_first_passage(i);
  o.require(all, "first_passage_prob(i) == path enumeration for i = 0..10");
  return o;
}

Outcome c2() {
  Outcome o;
  bool all = true;
  for (std::uint32_t cap = 1; cap <= 30; ++cap)
    all &= walks::absorbed_walk_dp({cap}).expected_stopped_plus_one == 1;
  o.require(all, "E[stopped + 1] == 1/1 for cap = 1..30");
  o.note("stated bound 2.3/pi = " + f64(walks::claimed_stopped_bound()) +
         " is below the exact value 1: the bound cannot hold for a bounded martingale");
  const auto pm = walks::conditional_positive_mean(10);
  o.note("cap 10: E[W | survive] = " + to_fraction_string(pm.exact) + " = " + f64(to_double(pm.exact)) +
         " vs folklore bound " + f64(pm.bound) + (pm.exceeds_bound ? " (exceeded)" : ""));
  return o;
}

Outcome c3() {
  Outcome o;
  for (auto [d, k] : {std::pair{20u, 10u}, std::pair{30u, 12u}}) {
    const auto r = est::estimate_list_statistics(d, k, 1, 2, est::RunOptions{100000, 31 + d, workers()});
    const std::string at = " at (d=" + std::to_string(d) + ", k=" + std::to_string(k) + ")";
    o.require(within4(r.p_free), within(r.p_free) + at);
    o.require(within4(r.p_bad), within(r.p_bad) + at);
  }
  return o;
}

Outcome c4() {
  Outcome o;
  std::size_t checks = 0, unequal = 0;
  for (std::uint32_t d : {2u, 3u})
    for (std::uint32_t k : {4u, 5u, 6u}) {
      auto a = oracle::rescuable_vs_good_checks(d, k);
      auto b = oracle::good_vs_fail_checks(d, k);
      a.insert(a.end(), b.begin(), b.end());
      for (const auto& c : a) {
        ++checks;
        if (!c.equal) {
          ++unequal;
          o.note("unequal: " + c.name + " d=" + std::to_string(d) + " k=" + std::to_string(k));
        }
      }
    }
  o.require(unequal == 0 && checks > 0,
            std::to_string(checks) + " element-wise comparisons, " + std::to_string(unequal) + " unequal");
  const auto gap = oracle::conditioning_gap_report(3, 5);
  for (const auto& g : gap)
    if (!g.equal) {
      o.note("conditioning gap (not asserted): " + g.name + " tv=" + to_fraction_string(g.tv));
      break;
    }
  return o;
}

Outcome c5() {
  Outcome o;
  const auto g = est::gof_marginal_test({2, 2}, 4, 1, CouplingKind::Improved, 2, est::RunOptions{1000000, 55, workers()});
  o.require(g.x.p_value > 0.001, "X marginal chi2=" + f64(g.x.statistic) + " dof=" + std::to_string(g.x.dof) +
                                     " p=" + f64(g.x.p_value));
  o.require(g.y.p_value > 0.001, "Y marginal chi2=" + f64(g.y.statistic) + " dof=" + std::to_string(g.y.dof) +
                                     " p=" + f64(g.y.p_value));
  return o;
}

Outcome c6() {
  Outcome o;
  o.require(oracle::tv_distance_leaves({2, 1}, 3, 1, 2) == Rational(3, 4), "tv(d=2,h=1,k=3,c=1,q=2) == 3/4");
  for (std::uint32_t k : {3u, 4u})
    for (CouplingKind kind : {CouplingKind::Naive, CouplingKind::Improved}) {
      const auto r = est::estimate_tv_upper({2, 2}, k, 1, 2, kind, est::RunOptions{100000, 60 + k, workers()});
      const bool ok = r.reference && r.mean >= *r.reference - 4 * r.std_error;
      o.require(ok, std::string(kind == CouplingKind::Naive ? "naive" : "improved") + " k=" + std::to_string(k) +
                        " freq=" + f64(r.mean) + " se=" + f64(r.std_error) + " exact tv=" + r.exact.value_or("?"));
    }
  return o;
}

Outcome c7() {
  Outcome o;
  const auto r = est::estimate_branching(100, 60, 1, 2, est::RunOptions{10000, 70, workers()});
  o.require(within4(r.naive_child), within(r.naive_child) + " (d/(k-1) = 100/59)");
  o.require(r.naive_child.mean - 4 * r.naive_child.std_error > 1.0, "naive per-level factor above 1 (supercritical)");
  o.note(within(r.naive) + " two-level");
  return o;
}

Outcome c8() {
  Outcome o;
  const auto r = est::estimate_branching(100, 60, 1, 2, est::RunOptions{100000, 80, workers()});
  const double naive2 = std::pow(100.0 / 59.0, 2);
  o.require(r.improved.mean + 4 * r.improved.std_error < naive2,
            "improved E[D_v]=" + f64(r.improved.mean) + " se=" + f64(r.improved.std_error) +
                " strictly below naive (d/(k-1))^2=" + f64(naive2));
  o.note(std::string("improved E[D_v] ") + (r.improved.mean < 1 ? "below" : "not below") + " 1");
  for (const auto& s : r.by_source)
    if (s.mean > 0)
      o.note("  " + within(s));
  o.note(within(r.naive) + " (measured naive)");
  const auto lv = est::estimate_level_disagreements({100, 4}, 60, 1, 2, CouplingKind::Improved,
                                                    est::RunOptions{10000, 81, workers()});
  o.note("W_2=" + f64(lv.levels[2].mean) + " W_4=" + f64(lv.levels[4].mean) + " (10^4 trials, h=4)");
  return o;
}

Outcome c9() {
  Outcome o;
  const std::vector<std::vector<std::string>> cmds{
      {"broadcast", "--d", "2", "--height", "3", "--k", "4", "--samples", "3"},
      {"couple", "--d", "3", "--height", "3", "--k", "5"},
      {"decay", "--d", "5", "--height", "4", "--k", "6", "--trials", "400"},
      {"decay", "--d", "5", "--height", "4", "--k", "6", "--trials", "400", "--format", "json"},
      {"branching", "--d", "10", "--k", "8", "--trials", "300"},
      {"stats", "--d", "10", "--k", "8", "--trials", "300"},
      {"eventA", "--d", "10", "--k", "6", "--trials", "300"},
      {"validate", "--d", "2", "--height", "2", "--k", "4", "--trials", "5000"},
      {"tvbound", "--d", "2", "--height", "2", "--k", "3", "--trials", "500"},
      {"oracle", "tv", "--d", "2", "--height", "1", "--k", "3"},
      {"oracle", "measure", "--d", "2", "--height", "1", "--k", "3"},
      {"oracle", "listlaw", "--d", "2", "--k", "3", "--parent", "1", "--present", "2"},
      {"oracle", "identities", "--d", "2", "--k", "4"},
      {"walk", "fp"},
      {"walk", "dp", "--cap", "10"},
      {"walk", "smatrix", "--n", "1000", "--trials", "300"},
  };
  for (const auto& cmd : cmds) {
    std::string first;
    bool same = true;
    int rc_seen = 0;
    for (const char* t : {"1", "2", "8"}) {
      std::vector<std::string> args{"treecouple"};
      args.insert(args.end(), cmd.begin(), cmd.end());
      args.insert(args.end(), {"--seed", "12345", "--threads", t});
      std::vector<const char*> argv;
      for (auto& a : args)
        argv.push_back(a.c_str());
      std::ostringstream out, err;
      const int rc = cli::run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
      rc_seen |= rc;
      if (first.empty())
        first = out.str();
      else
        same &= out.str() == first;
    }
    std::string name;
    for (const auto& a : cmd) {
      if (a.rfind("--", 0) == 0)
        break;
      name += (name.empty() ? "" : " ") + a;
    }
    o.require(same && rc_seen == 0 && !first.empty(), name + ": identical output for threads 1, 2, 8");
  }
  return o;
}

struct Criterion {
  int id;
  const char* title;
  double budget_seconds;
  Outcome (*run)();
};

const Criterion kCriteria[] = {
    {1, "exact first-passage law", 1.0, c1},
    {2, "optional-stopping identity", 1.0, c2},
    {3, "closed-form list probabilities vs Monte Carlo", 10.0, c3},
    {4, "identical-distribution claims for list pairs", 30.0, c4},
    {5, "marginal validity of the improved coupling", 120.0, c5},
    {6, "coupling-inequality domination", 60.0, c6},
    {7, "naive branching factor d/(k-1)", 60.0, c7},
    {8, "improved vs naive two-level factor", 600.0, c8},
    {9, "determinism across worker counts", 600.0, c9},
};

} // namespace

int main(int argc, char** argv) {
  int only = 0;
  for (int i = 1; i < argc; ++i) {
    if (std::strcmp(argv[i], "--criterion") == 0 && i + 1 < argc)
      only = std::atoi(argv[++i]);
  }
  int failures = 0, ran = 0;
  for (const auto& c : kCriteria) {
    if (only && c.id != only)
      continue;
    ++ran;
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o.require(false, std::string("exception: ") + e.what());
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    o.require(secs < c.budget_seconds, "runtime " + f64(secs) + " s < " + f64(c.budget_seconds) + " s");
    std::cout << (o.pass ? "[PASS] " : "[FAIL] ") << c.id << " " << c.title << "\n";
    for (const auto& n : o.notes)
      std::cout << "       " << n << "\n";
    failures += !o.pass;
  }
  if (!ran) {
    std::cerr << "no such criterion\n";
    return 2;
  }
  return failures ? 1 : 0;
}
