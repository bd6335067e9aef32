#pragma once

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include <json.hpp>

#include "def/belief.hpp"
#include "def/vec5.hpp"

namespace def {

// Snapshot of an ongoing discourse: n proposition vectors, m participant
// belief vectors, and per-proposition evidence vectors.
struct DiscourseState {
  std::vector<Vec5> propositions;
  std::vector<Vec5> beliefs;
  std::vector<Vec5> evidence;  // one per proposition
  int iteration = 0;
};

enum class RefineStrategy { EvidenceInjection, PropositionSoftening };

struct EquilibriumConfig {
  double threshold = 0.3;  // high-friction cutoff T
  // Equilibrium check threshold; defaults to `threshold` when unset.
  std::optional<double> equilibrium_threshold;
  int max_iters = 50;  // mu
  double eta = 1.0;    // gradient step size (literal delta-B reading)
  RefineStrategy strategy = RefineStrategy::EvidenceInjection;
  double delta = 0.5;  // evidence-injection scale
  double sigma = 0.5;  // proposition-softening blend
  AlignmentWeights weights;

  double equilibrium_cutoff() const {
    return equilibrium_threshold.value_or(threshold);
  }
};

// n x m friction entries F_i(a), each in [0, 2].
struct FrictionMatrix {
  std::size_t n_props = 0;
  std::size_t n_agents = 0;
  std::vector<double> values;  // row-major by proposition

  double at(std::size_t prop, std::size_t agent) const {
    return values[prop * n_agents + agent];
  }
  double& at(std::size_t prop, std::size_t agent) {
    return values[prop * n_agents + agent];
  }
  double mean_for_prop(std::size_t prop) const;
};

// F_i(a) = 1 - alignment(prop_i, belief_a, evidence_i).
FrictionMatrix measure_friction(const DiscourseState& s,
                                const AlignmentWeights& w = {});

// Propositions some participant finds hard to integrate: any F_i(a) > T.
std::vector<std::size_t> high_friction(const FrictionMatrix& f, double threshold);

// H sorted by descending mean friction, ties by ascending index.
std::vector<std::size_t> rank(const FrictionMatrix& f,
                              const std::vector<std::size_t>& high);

// Refine proposition j: inject supporting evidence (E_j += delta * prop_j) or
// soften the proposition toward the mean belief. j must be in `high`.
DiscourseState refine(const DiscourseState& s, std::size_t j,
                      const EquilibriumConfig& cfg,
                      const std::vector<std::size_t>& high);

// One descent step on F(B) = 1 - cos(B, target): B - eta * grad_B F.
// Both vectors must be nonzero.
Vec5 gradient_step(const Vec5& belief, const Vec5& target, double eta);

// Analytic gradient of 1 - cos(B, u) with respect to B; exposed for the
// finite-difference check.
Vec5 friction_gradient(const Vec5& belief, const Vec5& target);

// Net friction: mean over all propositions and participants.
double net_friction(const FrictionMatrix& f);

enum class EquilibriumOutcome { Equilibrium, NoEquilibrium };

struct TraceEntry {
  int iteration = 0;
  double net_friction = 0.0;
  std::optional<std::size_t> refined;  // none on the terminal check
  std::vector<double> prop_mean_friction;
};

struct SolveResult {
  DiscourseState state;
  std::vector<TraceEntry> trace;
  EquilibriumOutcome outcome = EquilibriumOutcome::NoEquilibrium;
};

// Iterate measure -> identify -> rank -> refine(top) -> gradient-update all
// beliefs -> check, up to max_iters times.
SolveResult solve(const DiscourseState& s, const EquilibriumConfig& cfg);

// Seeded 3-agent/2-proposition demo scenario: grams-scale propositions with a
// shared green component, unit-scale random positive beliefs, no evidence.
DiscourseState demo_scenario(std::uint64_t seed, std::size_t n_agents = 3,
                             std::size_t n_props = 2);

// Scenario config file (JSON) and trace CSV (iteration,net_friction,refined).
DiscourseState scenario_from_json(const nlohmann::json& j, EquilibriumConfig* cfg);
nlohmann::json scenario_to_json(const DiscourseState& s,
                                const EquilibriumConfig& cfg);
void write_trace_csv(const std::vector<TraceEntry>& trace, std::ostream& out);

}  // namespace def
