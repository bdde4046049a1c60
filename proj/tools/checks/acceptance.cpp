#include "acceptance.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <random>
#include <set>
#include <sstream>

#include <fmt/format.h>

#include "oracles.hpp"
#include "searchspace/coverage.hpp"
#include "searchspace/geometry.hpp"
#include "searchspace/grid.hpp"
#include "searchspace/ingest.hpp"

namespace searchspace::acceptance {

namespace {

using Clock = std::chrono::steady_clock;

NodeId id(std::size_t i) { return NodeId{static_cast<std::uint32_t>(i)}; }

/// Collects failures; keeps the first few messages for the report.
class Tally {
 public:
  void fail(std::string message) {
    ++failures_;
    if (messages_.size() < 3) messages_.push_back(std::move(message));
  }
  void expect(bool ok, const std::function<std::string()>& message) {
    ++checks_;
    if (!ok) fail(message());
  }
  bool ok() const { return failures_ == 0; }
  std::size_t checks() const { return checks_; }

  std::string summary(std::string_view passed_note) const {
    if (ok()) return fmt::format("{} ({} checks)", passed_note, checks_);
    std::string s = fmt::format("{} of {} checks failed", failures_, checks_);
    for (const auto& m : messages_) s += "; " + m;
    return s;
  }

 private:
  std::size_t checks_ = 0;
  std::size_t failures_ = 0;
  std::vector<std::string> messages_;
};

CheckResult named(int id, std::string name) {
  CheckResult r;
  r.id = id;
  r.name = std::move(name);
  return r;
}

double elapsed(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

struct LatticeFixture {
  GridSpec spec;
  NodeTable nodes;
  CrispEnvelope envelope;

  NodeId at(Cell c) const { return nodes.at(cell_label(c)); }
};

LatticeFixture lattice(const GridSpec& spec, const Options& options) {
  if (spec.n == 5 && spec.target == Cell{3, 4} && options.lattice_override) {
    return {spec, options.lattice_override->nodes, options.lattice_override->envelope};
  }
  return {spec, grid_nodes(spec), monotone_lattice_envelope(spec)};
}

// 1 -------------------------------------------------------------------------
CheckResult path_count_oracle(const Options& o) {
  auto r = named(1, "path-count oracle equivalence");
  const auto start = Clock::now();
  std::mt19937_64 rng(o.seed + 1);
  std::uniform_int_distribution<std::size_t> size(1, 8);
  const int graphs = o.quick ? 40 : 200;
  constexpr std::size_t kMaxLength = 6;
  Tally t;
  for (int gi = 0; gi < graphs; ++gi) {
    const auto env = oracle::random_digraph(size(rng), 0.3, rng);
    for (std::size_t f = 0; f < env.node_count(); ++f) {
      const auto dp = walk_counts_from(env, id(f), kMaxLength);
      const auto brute = oracle::enumerate_walks(env, id(f), kMaxLength);
      for (std::size_t n = 0; n <= kMaxLength; ++n) {
        for (std::size_t g = 0; g < env.node_count(); ++g) {
          t.expect(dp[n][g] == brute[n][g], [&] {
            return fmt::format("graph {} N_{}({},{}) dp={} brute={}", gi, n, f, g, dp[n][g].str(),
                               brute[n][g]);
          });
        }
      }
      // The per-pair table must agree with the all-targets table.
      const auto g = env.node_count() - 1 - f;
      const auto table = path_counts(env, id(f), id(g), kMaxLength);
      for (std::size_t n = 0; n <= kMaxLength; ++n) {
        t.expect(table.at(n) == brute[n][g], [&] {
          return fmt::format("graph {} path_counts N_{}({},{}) mismatch", gi, n, f, g);
        });
      }
    }
  }
  r.seconds = elapsed(start);
  t.expect(r.seconds < 5.0, [&] { return fmt::format("runtime {:.3f} s >= 5 s", r.seconds); });
  r.passed = t.ok();
  r.detail = t.summary(fmt::format("{} graphs, n <= 6, exact", graphs));
  return r;
}

// 2 -------------------------------------------------------------------------
CheckResult grid_geometry(const Options& o) {
  auto r = named(2, "grid geometry (d0 = Manhattan, N_d0 by enumeration)");
  const auto start = Clock::now();
  Tally t;
  std::string counts;
  for (const auto& spec : kStandardGrids) {
    const auto fx = lattice(spec, o);
    const auto target = fx.at(spec.target);
    for (int x = 0; x < spec.n; ++x) {
      for (int y = 0; y < spec.n; ++y) {
        const Cell c{x, y};
        const auto d = shortest_distance(fx.envelope, fx.at(c), target);
        const auto expected = static_cast<std::size_t>(manhattan(c, spec.target));
        t.expect(d && *d == expected, [&] {
          return fmt::format("N={} d0({},{}) = {} expected {}", spec.n, cell_label(c),
                             cell_label(spec.target), d ? std::to_string(*d) : "unreachable", expected);
        });
      }
    }
    const auto origin = fx.at({0, 0});
    const auto d0 = static_cast<std::size_t>(manhattan({0, 0}, spec.target));
    const auto brute = oracle::count_walks(fx.envelope, origin, target, d0);
    const auto bfs = count_shortest_paths(fx.envelope, origin, target);
    const auto table = path_counts(fx.envelope, origin, target, d0);
    t.expect(bfs == brute && table.at(d0) == brute, [&] {
      return fmt::format("N={} n_shortest bfs={} dp={} enumeration={}", spec.n, bfs.str(),
                         table.at(d0).str(), brute);
    });
    const auto binom = oracle::binomial(static_cast<unsigned>(d0), static_cast<unsigned>(spec.target.x));
    t.expect(brute == binom, [&] {
      return fmt::format("N={} enumeration {} != C({},{}) = {}", spec.n, brute, d0, spec.target.x, binom);
    });
    if (spec.n == 5) {
      t.expect(bfs == 35, [&] { return fmt::format("N=5 n_shortest = {} expected 35", bfs.str()); });
    }
    counts += fmt::format("{}N={}:{}", counts.empty() ? "" : " ", spec.n, bfs.str());
  }
  r.seconds = elapsed(start);
  t.expect(r.seconds < 1.0, [&] { return fmt::format("runtime {:.3f} s >= 1 s", r.seconds); });
  r.passed = t.ok();
  r.detail = t.summary("n_shortest " + counts);
  return r;
}

// 3 -------------------------------------------------------------------------
CheckResult closed_form_critical(const Options&) {
  auto r = named(3, "closed-form critical parameters");
  const auto start = Clock::now();
  Tally t;
  std::string values;
  constexpr std::pair<std::size_t, std::size_t> kCases[] = {{2, 1}, {3, 2}, {35, 7}};
  for (const auto& [k, n] : kCases) {
    // A simple envelope holds at most one edge per ordered pair, so k > 1
    // paths of length 1 collapse into a single edge here.
    const auto env = oracle::disjoint_paths(k, n);
    const auto cp = critical_parameter(env, id(0), id(1));
    const double expected = oracle::disjoint_paths_critical(k, n);
    const auto paths = count_shortest_paths(env, id(0), id(1));
    t.expect(std::abs(cp.p_c - expected) <= 1e-6, [&] {
      return fmt::format("(k,n)=({},{}) p_c={:.9f} expected {:.9f} (fixture holds {} distinct path(s))",
                         k, n, cp.p_c, expected, paths.str());
    });
    values += fmt::format("({},{})->{:.6f} ", k, n, cp.p_c);
  }
  const auto cycle = critical_parameter(oracle::two_cycle(), id(0), id(1));
  t.expect(std::abs(cycle.p_c - 0.6180339887) <= 1e-6, [&] {
    return fmt::format("two-cycle p_c={:.10f} expected 0.6180339887", cycle.p_c);
  });
  values += fmt::format("cycle->{:.9f}", cycle.p_c);
  r.seconds = elapsed(start);
  t.expect(r.seconds < 1.0, [&] { return fmt::format("runtime {:.3f} s >= 1 s", r.seconds); });
  r.passed = t.ok();
  r.detail = t.summary(values);
  return r;
}

// 4 -------------------------------------------------------------------------
CheckResult method_agreement(const Options& o) {
  auto r = named(4, "method cross-agreement");
  const auto start = Clock::now();
  std::mt19937_64 rng(o.seed + 4);
  std::uniform_int_distribution<std::size_t> size(2, 50);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const int kernels = o.quick ? 25 : 100;
  Tally t;
  std::size_t cyclic = 0, acyclic = 0;
  double worst = 0.0;

  auto run = [&](const FuzzyKernel& k, bool dag, int ki) {
    const double norm = k.max_row_sum();
    const double p = norm > 0.0 ? std::min(1.0, 0.9 * unit(rng) / norm) : unit(rng);
    std::uniform_int_distribution<std::size_t> pick(0, k.node_count() - 1);
    for (int pair = 0; pair < 10; ++pair) {
      const auto f = id(pick(rng));
      const auto g = id(pick(rng));
      const auto series = eval_truncated_series(k, f, g, p, 1e-10);
      const auto resolvent = eval_resolvent(k, f, g, p);
      const auto dispatch = eval_coverage(k, f, g, p);
      t.expect(series.tail_bound && *series.tail_bound <= 1e-10,
               [&] { return fmt::format("kernel {} tail bound too large", ki); });
      const double d1 = std::abs(series.value - resolvent.value);
      const double d2 = std::abs(dispatch.value - resolvent.value);
      worst = std::max({worst, d1, d2});
      t.expect(d1 <= 1e-8 && d2 <= 1e-8, [&] {
        return fmt::format("kernel {} P_{{{},{}}}({}) series={} resolvent={} dispatch={}", ki, f.value,
                           g.value, p, series.value, resolvent.value, dispatch.value);
      });
      if (dag) {
        const auto exact = eval_dag_exact(k, f, g, p);
        t.expect(std::abs(exact.value - series.value) <= 1e-10 &&
                     std::abs(exact.value - resolvent.value) <= 1e-10,
                 [&] {
                   return fmt::format("acyclic kernel {} dag_exact={} series={} resolvent={}", ki,
                                      exact.value, series.value, resolvent.value);
                 });
      }
    }
  };

  for (int ki = 0; ki < kernels; ++ki) {
    const auto n = size(rng);
    const auto k = oracle::random_fuzzy_kernel(n, std::min(1.0, 3.0 / static_cast<double>(n)), false, rng);
    (is_acyclic(support_envelope(k)) ? acyclic : cyclic)++;
    run(k, false, ki);
  }
  for (int ki = 0; ki < kernels / 2; ++ki) {
    const auto n = size(rng);
    const auto k = oracle::random_fuzzy_kernel(n, std::min(1.0, 4.0 / static_cast<double>(n)), true, rng);
    ++acyclic;
    run(k, true, kernels + ki);
  }
  r.seconds = elapsed(start);
  r.passed = t.ok();
  r.detail = t.summary(fmt::format("{} cyclic + {} acyclic kernels, max |diff| {:.2e}", cyclic, acyclic, worst));
  return r;
}

// 5 -------------------------------------------------------------------------
CheckResult low_order_limit(const Options& o) {
  auto r = named(5, "low-order limit P(p)/p^d0 -> N_d0");
  const auto start = Clock::now();
  std::mt19937_64 rng(o.seed + 5);
  const int graphs = o.quick ? 10 : 50;
  constexpr std::size_t kNodes = 10;
  Tally t;
  double worst = 0.0;
  for (int gi = 0; gi < graphs; ++gi) {
    CrispEnvelope env;
    std::vector<NodePair> reachable;
    do {
      env = oracle::random_dag(kNodes, 0.35, rng);
      reachable.clear();
      for (std::size_t f = 0; f < kNodes; ++f) {
        const auto fwd = forward_reachable(env, id(f));
        for (std::size_t g = 0; g < kNodes; ++g) {
          if (g != f && fwd[g]) reachable.emplace_back(id(f), id(g));
        }
      }
    } while (reachable.size() < 20);
    std::shuffle(reachable.begin(), reachable.end(), rng);
    for (std::size_t i = 0; i < 20; ++i) {
      const auto [f, g] = reachable[i];
      const auto lim = verify_low_order_limit(env, f, g, 1e-3);
      const double expected = lim.expected.convert_to<double>();
      const double rel = std::abs(lim.ratio - expected) / expected;
      worst = std::max(worst, rel);
      t.expect(rel <= 0.01, [&] {
        return fmt::format("graph {} pair ({},{}) ratio={} N_d0={}", gi, f.value, g.value, lim.ratio,
                           lim.expected.str());
      });
    }
  }
  r.seconds = elapsed(start);
  r.passed = t.ok();
  r.detail = t.summary(fmt::format("{} DAGs x 20 pairs, worst relative error {:.2e}", graphs, worst));
  return r;
}

// 6 -------------------------------------------------------------------------
CheckResult transitivity(const Options& o) {
  auto r = named(6, "transitivity sweep");
  const auto start = Clock::now();
  std::mt19937_64 rng(o.seed + 6);
  std::uniform_int_distribution<std::size_t> size(3, 12);
  const std::vector<double> grid{0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9};
  const int graphs = o.quick ? 20 : 100;
  Tally t;
  std::size_t triples = 0;
  for (int gi = 0; gi < graphs; ++gi) {
    const auto env = oracle::random_dag(size(rng), 0.35, rng);
    const auto kernel = env.as_kernel();
    const auto n = env.node_count();
    // P[p][f][g]
    std::vector<std::vector<std::vector<double>>> P(grid.size(),
                                                   std::vector<std::vector<double>>(n, std::vector<double>(n)));
    for (std::size_t f = 0; f < n; ++f) {
      for (std::size_t g = 0; g < n; ++g) {
        const CoverageSolver solver(kernel, id(f), id(g));
        for (std::size_t k = 0; k < grid.size(); ++k) P[k][f][g] = solver.evaluate(grid[k]).value;
      }
    }
    for (std::size_t f = 0; f < n; ++f) {
      for (std::size_t h = 0; h < n; ++h) {
        for (std::size_t g = 0; g < n; ++g) {
          ++triples;
          for (std::size_t k = 0; k < grid.size(); ++k) {
            const double lhs = P[k][f][g];
            const double rhs = P[k][f][h] * P[k][h][g];
            t.expect(lhs >= rhs - kTransitivitySlack, [&] {
              return fmt::format("graph {} ({},{},{}) p={} lhs={} rhs={}", gi, f, h, g, grid[k], lhs, rhs);
            });
          }
        }
      }
    }
    // The public sweep must agree with the table on one triple per graph.
    const auto pts = transitivity_check(env, id(0), id(n / 2), id(n - 1), grid);
    for (std::size_t k = 0; k < grid.size(); ++k) {
      t.expect(pts[k].holds && std::abs(pts[k].lhs - P[k][0][n - 1]) <= 1e-12,
               [&] { return fmt::format("graph {} transitivity_check disagrees at p={}", gi, grid[k]); });
    }
  }
  // A self-loop at f makes walks through h = f double-counted: P = 1/(1-p) < 1/(1-p)^2.
  const std::vector<NodePair> loop{{id(0), id(0)}};
  const CrispEnvelope self_loop(1, loop);
  std::size_t violations = 0;
  try {
    for (const auto& pt : transitivity_check(self_loop, id(0), id(0), id(0), grid)) {
      violations += pt.holds ? 0 : 1;
      const double expected_lhs = 1.0 / (1.0 - pt.p);
      t.expect(std::abs(pt.lhs - expected_lhs) <= 1e-9 * expected_lhs,
               [&] { return fmt::format("self-loop lhs {} expected {}", pt.lhs, expected_lhs); });
    }
  } catch (const std::exception& e) {
    t.fail(fmt::format("self-loop counterexample threw: {}", e.what()));
  }
  t.expect(violations == grid.size(), [&] {
    return fmt::format("self-loop counterexample reported {} violations, expected {}", violations, grid.size());
  });
  r.seconds = elapsed(start);
  r.passed = t.ok();
  r.detail = t.summary(fmt::format("{} graphs, {} triples x 9 p; self-loop violations detected: {}", graphs,
                                   triples, violations));
  return r;
}

// 7 -------------------------------------------------------------------------
CheckResult epoch_lower_bound(const Options& o) {
  auto r = named(7, "epoch lower bound");
  const auto start = Clock::now();
  const auto fx = lattice(kStandardGrids[1], o);
  const auto target = fx.at(fx.spec.target);
  std::mt19937_64 rng(o.seed + 7);
  std::uniform_int_distribution<int> coord(0, fx.spec.n - 1);
  Tally t;
  int tested = 0;
  while (tested < 10) {
    const Cell c{coord(rng), coord(rng)};
    if (c == fx.spec.target) continue;
    ++tested;
    const auto start_id = fx.at(c);
    const auto d0 = static_cast<std::size_t>(manhattan(c, fx.spec.target));
    const auto before = epoch_expansion(fx.envelope, start_id, d0 - 1);
    const auto at = epoch_expansion(fx.envelope, start_id, d0);
    const bool absent = !std::binary_search(before.begin(), before.end(), target);
    const bool present = std::binary_search(at.begin(), at.end(), target);
    t.expect(absent && present, [&] {
      return fmt::format("start {} d0={} absent_before={} present_at={}", cell_label(c), d0, absent, present);
    });
  }
  r.seconds = elapsed(start);
  r.passed = t.ok();
  r.detail = t.summary("10 random start cells on N=5");
  return r;
}

// 8 -------------------------------------------------------------------------
struct PlantedLog {
  AggregatedLog log;
  std::size_t planted_nodes = 0;
  double max_weak_ratio = 0.0;
};

/// Strong-edge random DAG plus planted cycles closed by one weak edge each.
PlantedLog planted_cycle_log(std::size_t dag_nodes, std::size_t cycles, std::mt19937_64& rng) {
  LogAggregator agg;
  constexpr std::uint64_t kStrong = 20;
  auto dag_label = [](std::size_t i) { return fmt::format("d{}", i); };
  std::uniform_int_distribution<std::size_t> fanout(1, 2);
  for (std::size_t i = 0; i + 1 < dag_nodes; ++i) {
    std::uniform_int_distribution<std::size_t> ahead(i + 1, std::min(dag_nodes - 1, i + 20));
    const auto k = fanout(rng);
    std::set<std::size_t> targets;
    while (targets.size() < k && targets.size() < dag_nodes - 1 - i) targets.insert(ahead(rng));
    for (const auto j : targets) agg.add(dag_label(i), dag_label(j), kStrong);
  }
  PlantedLog out;
  std::uniform_int_distribution<std::size_t> length(2, 6);
  std::uniform_int_distribution<std::uint64_t> weak(1, 4);
  std::uniform_int_distribution<std::size_t> anchor(0, dag_nodes - 1);
  for (std::size_t c = 0; c < cycles; ++c) {
    const auto len = length(rng);
    auto label = [&](std::size_t i) { return fmt::format("c{}_{}", c, i); };
    agg.add(dag_label(anchor(rng)), label(0), kStrong);
    for (std::size_t i = 0; i + 1 < len; ++i) agg.add(label(i), label(i + 1), kStrong);
    // The closing node also exits strongly so that n_in >= 2 and the weak
    // back edge has r = w / (w + 20). The exit goes to a sink: an edge back
    // into the DAG could close a strong cycle through it.
    const auto w = weak(rng);
    agg.add(label(len - 1), label(0), w);
    agg.add(label(len - 1), "sink", kStrong);
    out.planted_nodes += len;
    out.max_weak_ratio = std::max(out.max_weak_ratio, static_cast<double>(w) / static_cast<double>(w + kStrong));
  }
  out.log = std::move(agg).take();
  return out;
}

CheckResult eta_behavior(const Options& o) {
  auto r = named(8, "eta(p0) behavior on planted-cycle logs");
  const auto start = Clock::now();
  std::mt19937_64 rng(o.seed + 8);
  std::vector<double> thresholds;
  for (int i = 0; i < 20; ++i) thresholds.push_back(0.05 * i);
  Tally t;
  std::string trace;
  const int logs = o.quick ? 2 : 5;
  for (int li = 0; li < logs; ++li) {
    const auto planted = planted_cycle_log(o.quick ? 500 : 2000, 25, rng);
    for (const auto denom : {EtaDenominator::active, EtaDenominator::all}) {
      const auto sweep = eta_sweep(planted.log, thresholds, denom);
      const double expected0 = static_cast<double>(planted.planted_nodes) /
                               static_cast<double>(planted.log.nodes.size());
      t.expect(std::abs(sweep[0].eta - expected0) <= 1e-15, [&] {
        return fmt::format("log {} eta(0) = {} expected planted fraction {}", li, sweep[0].eta, expected0);
      });
      for (std::size_t i = 1; i < sweep.size(); ++i) {
        t.expect(sweep[i].eta <= sweep[i - 1].eta, [&] {
          return fmt::format("log {} eta increased from {} to {} at p0={}", li, sweep[i - 1].eta, sweep[i].eta,
                             sweep[i].p0);
        });
        if (sweep[i].p0 >= planted.max_weak_ratio) {
          t.expect(sweep[i].eta == 0.0, [&] {
            return fmt::format("log {} eta({}) = {} after all weak edges are pruned", li, sweep[i].p0, sweep[i].eta);
          });
        }
      }
      if (li == 0 && denom == EtaDenominator::active) {
        for (std::size_t i = 0; i < 5; ++i) trace += fmt::format("{}{:.4f}", i ? "," : "", sweep[i].eta);
      }
    }
  }
  r.seconds = elapsed(start);
  t.expect(r.seconds < 5.0, [&] { return fmt::format("runtime {:.3f} s >= 5 s", r.seconds); });
  r.passed = t.ok();
  r.detail = t.summary(fmt::format("{} logs, eta[0..4] = {}", logs, trace));
  return r;
}

// 9 -------------------------------------------------------------------------
CheckResult binarization_cases(const Options&) {
  auto r = named(9, "binarization branches");
  const auto start = Clock::now();
  Tally t;
  auto edges_of = [](const AggregatedLog& log, const CrispEnvelope& env) {
    std::set<std::pair<std::string, std::string>> out;
    for (const auto& [f, g] : env.edges()) out.emplace(log.nodes.label(f), log.nodes.label(g));
    return out;
  };
  using EdgeSet = std::set<std::pair<std::string, std::string>>;

  // n_in(f) <= 1: the single observed output is not kept even with r = 1.
  {
    const auto log = aggregate_pairs({{"f", "g"}, {"a", "b"}, {"a", "b"}});
    const auto got = edges_of(log, binarize_threshold(log, 0.1));
    const EdgeSet expected{{"a", "b"}};
    t.expect(got == expected, [] { return std::string("branch n_in <= 1: unexpected edge set"); });
  }
  // r <= p0: 1 of 10 at p0 = 0.1 sits on the boundary and is excluded.
  {
    std::vector<std::pair<std::string, std::string>> pairs{{"f", "g"}};
    for (int i = 0; i < 9; ++i) pairs.emplace_back("f", "h");
    const auto log = aggregate_pairs(pairs);
    const auto got = edges_of(log, binarize_threshold(log, 0.1));
    const EdgeSet expected{{"f", "h"}};
    t.expect(got == expected, [] { return std::string("branch r <= p0: unexpected edge set"); });
  }
  // Otherwise: 5 of 10 passes both guards.
  {
    std::vector<std::pair<std::string, std::string>> pairs;
    for (int i = 0; i < 5; ++i) pairs.emplace_back("f", "g");
    for (int i = 0; i < 5; ++i) pairs.emplace_back("f", "h" + std::to_string(i));
    const auto log = aggregate_pairs(pairs);
    const auto got = edges_of(log, binarize_threshold(log, 0.1));
    const EdgeSet expected{{"f", "g"}};
    t.expect(got == expected, [] { return std::string("branch otherwise: unexpected edge set"); });
  }
  r.seconds = elapsed(start);
  r.passed = t.ok();
  r.detail = t.summary("three branch fixtures, exact edge sets");
  return r;
}

// 10 ------------------------------------------------------------------------
CheckResult deletion_monotonicity(const Options& o) {
  auto r = named(10, "safety-reachability monotonicity under edge deletion");
  const auto start = Clock::now();
  std::mt19937_64 rng(o.seed + 10);
  const int graphs = o.quick ? 5 : 20;
  constexpr std::size_t kNodes = 10;
  Tally t;
  std::size_t cyclic = 0;
  for (int gi = 0; gi < graphs; ++gi) {
    CrispEnvelope env;
    do {
      env = oracle::random_digraph(kNodes, 0.25, rng);
    } while (env.edge_count() < 15);
    cyclic += is_acyclic(env) ? 0 : 1;
    auto edges = env.edges();
    std::shuffle(edges.begin(), edges.end(), rng);
    edges.resize(10);
    const auto tightened = env.without_edges(edges);
    const auto k0 = env.as_kernel();
    const auto k1 = tightened.as_kernel();
    for (std::size_t f = 0; f < kNodes; ++f) {
      for (std::size_t g = 0; g < kNodes; ++g) {
        const auto before = critical_parameter(k0, id(f), id(g));
        const auto after = critical_parameter(k1, id(f), id(g));
        t.expect(after.p_c >= before.p_c - 1e-9 && after.r_c <= before.r_c + 1e-9, [&] {
          return fmt::format("graph {} pair ({},{}) p_c {} -> {}", gi, f, g, before.p_c, after.p_c);
        });
      }
    }
  }
  r.seconds = elapsed(start);
  r.passed = t.ok();
  r.detail = t.summary(fmt::format("{} graphs ({} cyclic), all pairs", graphs, cyclic));
  return r;
}

// 11 ------------------------------------------------------------------------
std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

CheckResult determinism(const Options& o) {
  auto r = named(11, "CLI determinism");
  const auto start = Clock::now();
  Tally t;
  if (!o.cli) {
    r.detail = "no CLI runner supplied";
    return r;
  }
  namespace fs = std::filesystem;
  const auto dir = fs::temp_directory_path() /
                   fmt::format("searchspace-determinism-{}", std::chrono::steady_clock::now().time_since_epoch().count());
  fs::create_directories(dir);

  auto twice = [&](const std::string& name, std::vector<std::string> args) {
    std::string outputs[2];
    for (int run = 0; run < 2; ++run) {
      const auto path = dir / fmt::format("{}-{}.out", name, run);
      auto full = args;
      full.push_back("--output");
      full.push_back(path.string());
      const int status = o.cli(full);
      t.expect(status == 0, [&] { return fmt::format("{} run {} exited with {}", name, run, status); });
      outputs[run] = read_file(path);
    }
    t.expect(!outputs[0].empty() && outputs[0] == outputs[1],
             [&] { return fmt::format("{} outputs differ between runs", name); });
  };

  twice("simulate-grid", {"simulate-grid", "--n", "5", "--target", "3,4", "--seed", "7"});
  twice("simulate-grid-noisy",
        {"simulate-grid", "--n", "8", "--target", "6,7", "--seed", "11", "--noise", "0.2"});
  const auto kernel_path = dir / "kernel.json";
  o.cli({"simulate-grid", "--n", "5", "--target", "3,4", "--seed", "7", "--output", kernel_path.string()});
  twice("measure", {"measure", "--input", kernel_path.string(), "--pairs", "(0,0)->(3,4);(4,0)->(3,4);(3,4)->(0,0)"});
  twice("measure-fuzzy",
        {"measure", "--input", kernel_path.string(), "--pairs", "(0,0)->(3,4);(1,1)->(3,4)", "--fuzzy"});

  std::error_code ec;
  fs::remove_all(dir, ec);
  r.seconds = elapsed(start);
  r.passed = t.ok();
  r.detail = t.summary("simulate-grid and measure byte-identical across two runs");
  return r;
}

}  // namespace

CheckResult run_criterion(int criterion, const Options& options) {
  CheckResult result;
  try {
    switch (criterion) {
      case 1: return path_count_oracle(options);
      case 2: return grid_geometry(options);
      case 3: return closed_form_critical(options);
      case 4: return method_agreement(options);
      case 5: return low_order_limit(options);
      case 6: return transitivity(options);
      case 7: return epoch_lower_bound(options);
      case 8: return eta_behavior(options);
      case 9: return binarization_cases(options);
      case 10: return deletion_monotonicity(options);
      case 11: return determinism(options);
      default: result.detail = fmt::format("unknown criterion {}", criterion);
    }
  } catch (const std::exception& e) {
    result.detail = fmt::format("threw: {}", e.what());
  }
  result.id = criterion;
  return result;
}

std::vector<CheckResult> run_all(const Options& options) {
  std::vector<CheckResult> out;
  for (int i = 1; i <= kCriterionCount; ++i) out.push_back(run_criterion(i, options));
  return out;
}

std::string format_result(const CheckResult& result) {
  return fmt::format("[{}] {:>2}  {:<55} {:8.3f} s  {}", result.passed ? "PASS" : "FAIL", result.id,
                     result.name, result.seconds, result.detail);
}

}  // namespace searchspace::acceptance
