#include "def/equilibrium.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "def/errors.hpp"
#include "def/rng.hpp"

namespace def {

double FrictionMatrix::mean_for_prop(std::size_t prop) const {
  double sum = 0.0;
  for (std::size_t a = 0; a < n_agents; ++a) sum += at(prop, a);
  return sum / static_cast<double>(n_agents);
}

FrictionMatrix measure_friction(const DiscourseState& s,
                                const AlignmentWeights& w) {
  FrictionMatrix f;
  f.n_props = s.propositions.size();
  f.n_agents = s.beliefs.size();
  f.values.resize(f.n_props * f.n_agents, 0.0);
  for (std::size_t i = 0; i < f.n_props; ++i)
    for (std::size_t a = 0; a < f.n_agents; ++a)
      f.at(i, a) = friction(s.beliefs[a], s.propositions[i], s.evidence[i], w);
  return f;
}

std::vector<std::size_t> high_friction(const FrictionMatrix& f, double threshold) {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < f.n_props; ++i)
    for (std::size_t a = 0; a < f.n_agents; ++a)
      if (f.at(i, a) > threshold) {
        out.push_back(i);
        break;
      }
  return out;
}

std::vector<std::size_t> rank(const FrictionMatrix& f,
                              const std::vector<std::size_t>& high) {
  std::vector<std::size_t> out = high;
  std::stable_sort(out.begin(), out.end(), [&](std::size_t a, std::size_t b) {
    double fa = f.mean_for_prop(a);
    double fb = f.mean_for_prop(b);
    if (fa != fb) return fa > fb;
    return a < b;
  });
  return out;
}

DiscourseState refine(const DiscourseState& s, std::size_t j,
                      const EquilibriumConfig& cfg,
                      const std::vector<std::size_t>& high) {
  if (std::find(high.begin(), high.end(), j) == high.end())
    throw UnknownIndex("proposition " + std::to_string(j) +
                       " is not in the high-friction set");

  DiscourseState out = s;
  if (cfg.strategy == RefineStrategy::EvidenceInjection) {
    out.evidence[j] = add(out.evidence[j], scale(out.propositions[j], cfg.delta));
  } else {
    Vec5 mean_belief = kZeroVec;
    for (const Vec5& b : s.beliefs) mean_belief = add(mean_belief, b);
    mean_belief = scale(mean_belief, 1.0 / static_cast<double>(s.beliefs.size()));
    out.propositions[j] = add(scale(out.propositions[j], 1.0 - cfg.sigma),
                              scale(mean_belief, cfg.sigma));
  }
  return out;
}

Vec5 friction_gradient(const Vec5& belief, const Vec5& target) {
  double nb = norm(belief);
  double nu = norm(target);
  if (nb == 0.0 || nu == 0.0)
    throw ZeroVector("gradient of 1 - cos is undefined at a zero vector");
  double d = dot(belief, target);
  // grad_B (1 - B.u / (|B||u|)) = -(u/(|B||u|) - (B.u) B / (|B|^3 |u|))
  Vec5 grad;
  for (int i = 0; i < 5; ++i)
    grad[i] = -(target[i] / (nb * nu) - d * belief[i] / (nb * nb * nb * nu));
  return grad;
}

Vec5 gradient_step(const Vec5& belief, const Vec5& target, double eta) {
  return sub(belief, scale(friction_gradient(belief, target), eta));
}

double net_friction(const FrictionMatrix& f) {
  double sum = 0.0;
  for (double v : f.values) sum += v;
  return f.values.empty() ? 0.0 : sum / static_cast<double>(f.values.size());
}

SolveResult solve(const DiscourseState& s, const EquilibriumConfig& cfg) {
  if (cfg.max_iters < 1) throw InvalidConfig("max_iters must be at least 1");
  if (cfg.eta <= 0.0) throw InvalidConfig("eta must be positive");
  if (cfg.threshold <= 0.0 || cfg.threshold >= 2.0)
    throw InvalidConfig("threshold must lie in (0, 2)");
  if (s.propositions.size() != s.evidence.size() || s.beliefs.empty())
    throw InvalidConfig("discourse state dimensions are inconsistent");

  SolveResult result;
  result.state = s;
  double cutoff = cfg.equilibrium_cutoff();

  for (int k = 0; k < cfg.max_iters; ++k) {
    FrictionMatrix f = measure_friction(result.state, cfg.weights);
    TraceEntry entry;
    entry.iteration = k;
    entry.net_friction = net_friction(f);
    for (std::size_t i = 0; i < f.n_props; ++i)
      entry.prop_mean_friction.push_back(f.mean_for_prop(i));

    if (entry.net_friction <= cutoff) {
      result.trace.push_back(std::move(entry));
      result.outcome = EquilibriumOutcome::Equilibrium;
      result.state.iteration = k;
      return result;
    }

    std::vector<std::size_t> high = high_friction(f, cfg.threshold);
    if (!high.empty()) {
      std::size_t top = rank(f, high).front();
      entry.refined = top;
      result.state = refine(result.state, top, cfg, high);
      Vec5 target = add(scale(result.state.propositions[top], cfg.weights.lambda1),
                        scale(result.state.evidence[top], cfg.weights.lambda2));
      for (Vec5& belief : result.state.beliefs)
        belief = gradient_step(belief, target, cfg.eta);
    }
    result.trace.push_back(std::move(entry));
    result.state.iteration = k + 1;
  }

  result.outcome = EquilibriumOutcome::NoEquilibrium;
  return result;
}

DiscourseState demo_scenario(std::uint64_t seed, std::size_t n_agents,
                             std::size_t n_props) {
  Rng rng(seed);
  DiscourseState s;
  // Grams-scale claims sharing direction with the full weight profile, so a
  // common aligned belief direction exists.
  const Vec5 bases[2] = {{10, 10, 20, 0, 0}, {10, 10, 20, 30, 50}};
  for (std::size_t i = 0; i < n_props; ++i) {
    Vec5 p = bases[i % 2];
    for (int c = 0; c < 5; ++c)
      if (p[c] != 0.0) p[c] += rng.uniform(-1.0, 1.0);
    s.propositions.push_back(p);
    s.evidence.push_back(kZeroVec);
  }
  // Mixed-sign beliefs start the discourse well away from alignment.
  for (std::size_t a = 0; a < n_agents; ++a) {
    Vec5 b;
    for (int c = 0; c < 5; ++c) b[c] = rng.uniform(-0.5, 1.0);
    s.beliefs.push_back(b);
  }
  return s;
}

DiscourseState scenario_from_json(const nlohmann::json& j,
                                  EquilibriumConfig* cfg) {
  DiscourseState s;
  for (const auto& p : j.at("propositions")) s.propositions.push_back(vec5_from_json(p));
  for (const auto& b : j.at("beliefs")) s.beliefs.push_back(vec5_from_json(b));
  if (j.contains("evidence"))
    for (const auto& e : j.at("evidence")) s.evidence.push_back(vec5_from_json(e));
  s.evidence.resize(s.propositions.size(), kZeroVec);

  if (cfg != nullptr && j.contains("config")) {
    const auto& c = j.at("config");
    if (c.contains("threshold")) cfg->threshold = c.at("threshold").get<double>();
    if (c.contains("equilibrium_threshold"))
      cfg->equilibrium_threshold = c.at("equilibrium_threshold").get<double>();
    if (c.contains("max_iters")) cfg->max_iters = c.at("max_iters").get<int>();
    if (c.contains("eta")) cfg->eta = c.at("eta").get<double>();
    if (c.contains("delta")) cfg->delta = c.at("delta").get<double>();
    if (c.contains("sigma")) cfg->sigma = c.at("sigma").get<double>();
    if (c.contains("lambda1")) cfg->weights.lambda1 = c.at("lambda1").get<double>();
    if (c.contains("lambda2")) cfg->weights.lambda2 = c.at("lambda2").get<double>();
    if (c.contains("strategy")) {
      std::string strat = c.at("strategy").get<std::string>();
      if (strat == "evidence-injection")
        cfg->strategy = RefineStrategy::EvidenceInjection;
      else if (strat == "proposition-softening")
        cfg->strategy = RefineStrategy::PropositionSoftening;
      else
        throw InvalidConfig("unknown refine strategy '" + strat + "'");
    }
  }

  if (s.propositions.empty() || s.beliefs.empty())
    throw InvalidConfig("scenario needs at least one proposition and one belief");
  return s;
}

nlohmann::json scenario_to_json(const DiscourseState& s,
                                const EquilibriumConfig& cfg) {
  nlohmann::json j;
  j["propositions"] = s.propositions;
  j["beliefs"] = s.beliefs;
  j["evidence"] = s.evidence;
  j["config"] = {
      {"threshold", cfg.threshold},
      {"max_iters", cfg.max_iters},
      {"eta", cfg.eta},
      {"delta", cfg.delta},
      {"sigma", cfg.sigma},
      {"lambda1", cfg.weights.lambda1},
      {"lambda2", cfg.weights.lambda2},
      {"strategy", cfg.strategy == RefineStrategy::EvidenceInjection
                       ? "evidence-injection"
                       : "proposition-softening"},
  };
  if (cfg.equilibrium_threshold)
    j["config"]["equilibrium_threshold"] = *cfg.equilibrium_threshold;
  return j;
}

void write_trace_csv(const std::vector<TraceEntry>& trace, std::ostream& out) {
  out << "iteration,net_friction,refined_index\n";
  char buf[64];
  for (const TraceEntry& t : trace) {
    std::snprintf(buf, sizeof(buf), "%d,%.6f,", t.iteration, t.net_friction);
    out << buf;
    if (t.refined) out << *t.refined;
    out << "\n";
  }
}

}  // namespace def
