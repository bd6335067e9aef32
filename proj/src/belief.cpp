#include "def/belief.hpp"

#include <algorithm>
#include <cmath>

#include "def/errors.hpp"

namespace def {

double cosine(const Vec5& u, const Vec5& v) {
  double nu = norm(u);
  double nv = norm(v);
  if (nu == 0.0 || nv == 0.0) return 0.0;
  return dot(u, v) / (nu * nv);
}

double alignment(const Vec5& belief, const Vec5& prop, const Vec5& evidence,
                 const AlignmentWeights& w) {
  Vec5 combined = add(scale(prop, w.lambda1), scale(evidence, w.lambda2));
  return cosine(belief, combined);
}

double friction(const Vec5& belief, const Vec5& prop, const Vec5& evidence,
                const AlignmentWeights& w) {
  return 1.0 - alignment(belief, prop, evidence, w);
}

Vec5 def_update(const Vec5& belief, const Vec5& assertion,
                const FrictionConfig& cfg) {
  double d = dot(belief, assertion);
  double s = d > 0.0 ? 1.0 : (d < 0.0 ? -1.0 : 0.0);
  if (s == 0.0 || is_zero(assertion)) return belief;

  double c = std::min(cfg.beta, cfg.alpha * s) * cosine(belief, assertion);
  Vec5 out;
  for (int i = 0; i < 5; ++i) {
    double step = c * assertion[i];
    double candidate = belief[i] + step;
    if (cfg.reinforcement_cap && assertion[i] > 0.0 && step > 0.0)
      candidate = std::min(candidate, std::max(belief[i], assertion[i]));
    out[i] = candidate;
  }
  return out;
}

Vec5 direct_assign(const Vec5& belief, Block block, double grams) {
  if (!(grams > 0.0))
    throw NonPositiveWeight("assigned weight must be positive");
  Vec5 out = belief;
  out[block_index(block)] = grams;
  return out;
}

}  // namespace def
