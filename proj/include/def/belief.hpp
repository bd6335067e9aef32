#pragma once

#include "def/blocks.hpp"
#include "def/vec5.hpp"

namespace def {

// Friction coefficients for the belief update. alpha scales how much force a
// conflicting assertion suppresses with; beta caps how much an aligned
// assertion can reinforce.
struct FrictionConfig {
  double alpha = 1.0;
  double beta = 1.0;
  // The published worked examples require clamping aligned components at the
  // asserted value; the raw uncapped rule stays available for ablation.
  bool reinforcement_cap = true;
};

struct AlignmentWeights {
  double lambda1 = 1.0;  // weight on the proposition vector
  double lambda2 = 1.0;  // weight on the evidence vector
};

// Standard cosine similarity with the zero-vector convention: either argument
// having zero magnitude yields 0 (orthogonality = irrelevance).
double cosine(const Vec5& u, const Vec5& v);

// cosine(belief, lambda1*prop + lambda2*evidence).
double alignment(const Vec5& belief, const Vec5& prop, const Vec5& evidence,
                 const AlignmentWeights& w = {});

// Friction = 1 - alignment, in [0, 2].
double friction(const Vec5& belief, const Vec5& prop, const Vec5& evidence,
                const AlignmentWeights& w = {});

// The DEF update operator:
//   s = sgn(belief . assertion)
//   c = min(beta, alpha * s) * cosine(belief, assertion)
//   belief' = belief + c * assertion, with aligned positive components
//             clamped at max(belief[i], assertion[i]).
// s == 0 (orthogonal or zero assertion) is a no-op. Suppression has no floor;
// conflicting components may go negative.
Vec5 def_update(const Vec5& belief, const Vec5& assertion,
                const FrictionConfig& cfg);

// Saying-is-Believing: pin one component to an accepted weight.
Vec5 direct_assign(const Vec5& belief, Block block, double grams);

}  // namespace def
