#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <sstream>

#include "def/equilibrium.hpp"
#include "def/errors.hpp"
#include "def/rng.hpp"

using namespace def;

namespace {

DiscourseState tiny_state(std::vector<Vec5> props, std::vector<Vec5> beliefs) {
  DiscourseState s;
  s.propositions = std::move(props);
  s.beliefs = std::move(beliefs);
  s.evidence.assign(s.propositions.size(), kZeroVec);
  return s;
}

}  // namespace

TEST_CASE("measure_friction matches the scalar op entrywise") {
  Vec5 v{1, 2, 0, 0, 0};
  DiscourseState aligned = tiny_state({v, v}, {v, v, v});
  FrictionMatrix f = measure_friction(aligned);
  for (double x : f.values) CHECK(x == doctest::Approx(0.0));

  DiscourseState orth = tiny_state({{1, 0, 0, 0, 0}}, {{0, 1, 0, 0, 0}});
  CHECK(measure_friction(orth).at(0, 0) == doctest::Approx(1.0));

  DiscourseState conflict =
      tiny_state({{0, -10, 0, 0, 0}}, {{10, 10, 0, 0, 0}});
  CHECK(measure_friction(conflict).at(0, 0) ==
        doctest::Approx(1.7071).epsilon(1e-3));
}

TEST_CASE("high_friction extracts propositions above threshold") {
  FrictionMatrix f;
  f.n_props = 2;
  f.n_agents = 2;
  f.values = {0.0, 0.0, 0.0, 0.0};
  CHECK(high_friction(f, 0.5).empty());
  f.values = {0.1, 0.9, 0.2, 0.1};
  CHECK(high_friction(f, 0.5) == std::vector<std::size_t>{0});
  CHECK(high_friction(f, 2.0).empty());
}

TEST_CASE("rank orders by mean friction with index tie-break") {
  FrictionMatrix f;
  f.n_props = 3;
  f.n_agents = 1;
  f.values = {0.4, 0.9, 0.4};
  CHECK(rank(f, {0, 1, 2}) == std::vector<std::size_t>{1, 0, 2});
  CHECK(rank(f, {2, 0}) == std::vector<std::size_t>{0, 2});
  CHECK(rank(f, {1}) == std::vector<std::size_t>{1});
}

TEST_CASE("rank is a permutation of the high set, non-increasing in mean") {
  Rng rng(888);
  for (int trial = 0; trial < 50; ++trial) {
    FrictionMatrix f;
    f.n_props = 1 + rng.index(6);
    f.n_agents = 1 + rng.index(4);
    f.values.resize(f.n_props * f.n_agents);
    for (double& v : f.values) v = rng.uniform(0.0, 2.0);
    std::vector<std::size_t> high = high_friction(f, 0.8);
    std::vector<std::size_t> ranked = rank(f, high);

    std::vector<std::size_t> a = high, b = ranked;
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    CHECK(a == b);
    for (std::size_t i = 1; i < ranked.size(); ++i)
      CHECK(f.mean_for_prop(ranked[i - 1]) >= f.mean_for_prop(ranked[i]));
  }
}

TEST_CASE("refine injects evidence or softens the proposition") {
  DiscourseState s = tiny_state({{0, 0, 20, 0, 0}}, {{1, 1, 1, 1, 1}});
  EquilibriumConfig cfg;

  cfg.strategy = RefineStrategy::EvidenceInjection;
  cfg.delta = 0.5;
  DiscourseState injected = refine(s, 0, cfg, {0});
  CHECK(injected.evidence[0] == Vec5{0, 0, 10, 0, 0});
  CHECK(injected.propositions[0] == s.propositions[0]);

  cfg.strategy = RefineStrategy::PropositionSoftening;
  cfg.sigma = 0.0;
  DiscourseState same = refine(s, 0, cfg, {0});
  CHECK(same.propositions[0] == s.propositions[0]);

  cfg.sigma = 1.0;
  DiscourseState softened = refine(s, 0, cfg, {0});
  CHECK(softened.propositions[0] == Vec5{1, 1, 1, 1, 1});

  CHECK_THROWS_AS(refine(s, 0, cfg, {}), UnknownIndex);
}

TEST_CASE("gradient_step matches the closed forms at simple points") {
  Vec5 b{1, 0, 0, 0, 0};
  Vec5 u{0, 1, 0, 0, 0};
  Vec5 stepped = gradient_step(b, u, 0.1);
  CHECK(stepped[0] == doctest::Approx(1.0));
  CHECK(stepped[1] == doctest::Approx(0.1));

  Vec5 parallel = gradient_step({2, 2, 0, 0, 0}, {4, 4, 0, 0, 0}, 0.5);
  CHECK(parallel[0] == doctest::Approx(2.0));
  CHECK(parallel[1] == doctest::Approx(2.0));

  CHECK_THROWS_AS(gradient_step(kZeroVec, u, 0.1), ZeroVector);
  CHECK_THROWS_AS(gradient_step(b, kZeroVec, 0.1), ZeroVector);
}

TEST_CASE("analytic gradient agrees with central finite differences") {
  Rng rng(1234);
  int checked = 0;
  const double h = 1e-6;
  while (checked < 100) {
    Vec5 b, u;
    for (int i = 0; i < 5; ++i) {
      b[i] = rng.uniform(-2, 2);
      u[i] = rng.uniform(-2, 2);
    }
    if (norm(b) < 0.1 || norm(u) < 0.1) continue;
    ++checked;

    Vec5 analytic = friction_gradient(b, u);
    Vec5 fd;
    for (int i = 0; i < 5; ++i) {
      Vec5 hi = b, lo = b;
      hi[i] += h;
      lo[i] -= h;
      fd[i] = ((1.0 - cosine(hi, u)) - (1.0 - cosine(lo, u))) / (2 * h);
    }
    double err = norm(sub(analytic, fd));
    double scale_ref = std::max(norm(analytic), 1e-12);
    CHECK(err / scale_ref < 1e-5);
  }
}

TEST_CASE("small-eta gradient steps never increase friction") {
  Rng rng(4321);
  for (int trial = 0; trial < 100; ++trial) {
    Vec5 b, u;
    for (int i = 0; i < 5; ++i) {
      b[i] = rng.uniform(-2, 2);
      u[i] = rng.uniform(-2, 2);
    }
    if (norm(b) < 0.1 || norm(u) < 0.1) continue;
    Vec5 grad = friction_gradient(b, u);
    double gn = norm(grad);
    if (gn < 1e-12) continue;
    double eta = 0.1 * norm(b) / gn;
    Vec5 after = gradient_step(b, u, eta);
    CHECK(1.0 - cosine(after, u) <= 1.0 - cosine(b, u) + 1e-12);
  }
}

TEST_CASE("net_friction is the exact mean") {
  FrictionMatrix f;
  f.n_props = 2;
  f.n_agents = 2;
  f.values = {0, 0, 0, 0};
  CHECK(net_friction(f) == 0.0);
  f.values = {1, 1, 1, 1};
  CHECK(net_friction(f) == 1.0);
  f.values = {0, 1, 1, 0};
  CHECK(net_friction(f) == 0.5);
}

TEST_CASE("solve returns equilibrium immediately for aligned states") {
  Vec5 v{5, 5, 10, 0, 0};
  DiscourseState s = tiny_state({v}, {v, v});
  EquilibriumConfig cfg;
  cfg.threshold = 0.3;
  SolveResult r = solve(s, cfg);
  CHECK(r.outcome == EquilibriumOutcome::Equilibrium);
  CHECK(r.trace.size() == 1);
  CHECK(r.trace[0].net_friction <= 0.3);
  CHECK_FALSE(r.trace[0].refined.has_value());
}

TEST_CASE("solve reports no equilibrium under a hard iteration bound") {
  DiscourseState s = tiny_state({{0, -10, 0, 0, 0}}, {{10, 10, 0, 0, 0}});
  EquilibriumConfig cfg;
  cfg.threshold = 0.3;
  cfg.max_iters = 1;
  cfg.eta = 1e-9;
  SolveResult r = solve(s, cfg);
  CHECK(r.outcome == EquilibriumOutcome::NoEquilibrium);
  CHECK(r.trace.size() == 1);
  CHECK(r.trace[0].net_friction > 0.3);
}

TEST_CASE("the seeded demo scenario descends to equilibrium") {
  DiscourseState s = demo_scenario(42, 3, 2);
  EquilibriumConfig cfg;
  cfg.threshold = 0.3;
  cfg.max_iters = 50;
  cfg.eta = 0.5;
  SolveResult r = solve(s, cfg);
  CHECK(r.outcome == EquilibriumOutcome::Equilibrium);
  CHECK(r.trace.size() <= 50);

  // Wherever a proposition was refined, its mean friction drops next round.
  for (std::size_t i = 0; i + 1 < r.trace.size(); ++i) {
    if (!r.trace[i].refined) continue;
    std::size_t j = *r.trace[i].refined;
    CHECK(r.trace[i + 1].prop_mean_friction[j] <
          r.trace[i].prop_mean_friction[j]);
  }

  // Trace is a valid run record: net friction only ends under threshold.
  for (std::size_t i = 0; i + 1 < r.trace.size(); ++i)
    CHECK(r.trace[i].net_friction > 0.3);
  CHECK(r.trace.back().net_friction <= 0.3);
}

TEST_CASE("scenario and trace serialization round-trip") {
  DiscourseState s = demo_scenario(7, 2, 2);
  EquilibriumConfig cfg;
  cfg.eta = 0.25;
  cfg.strategy = RefineStrategy::PropositionSoftening;
  nlohmann::json j = scenario_to_json(s, cfg);

  EquilibriumConfig parsed_cfg;
  DiscourseState parsed = scenario_from_json(j, &parsed_cfg);
  CHECK(parsed.propositions == s.propositions);
  CHECK(parsed.beliefs == s.beliefs);
  CHECK(parsed_cfg.eta == 0.25);
  CHECK(parsed_cfg.strategy == RefineStrategy::PropositionSoftening);

  SolveResult r = solve(s, cfg);
  std::ostringstream csv;
  write_trace_csv(r.trace, csv);
  CHECK(csv.str().rfind("iteration,net_friction,refined_index\n", 0) == 0);
}
