#include "def/encoding.hpp"

#include <cmath>

namespace def {

namespace {

double resolve_object_value(const Proposition& p, const EncodingContext& ctx) {
  if (!p.object_is_block()) return p.grams();
  if (ctx.belief == nullptr)
    throw MissingBeliefContext("block-block atom '" + format(p) +
                               "' needs a belief vector to resolve against");
  double magnitude = std::fabs((*ctx.belief)[block_index(p.object_block())]);
  if (magnitude == 0.0)
    throw MissingBeliefContext("no current belief about '" +
                               std::string(block_name(p.object_block())) +
                               "' to anchor '" + format(p) + "'");
  return magnitude;
}

}  // namespace

Vec5 encode(const AssertionSet& a, EncodingContext ctx) {
  Vec5 out = kZeroVec;
  for (const Proposition& p : a.atoms) {
    double w = resolve_object_value(p, ctx);
    double value = 0.0;
    switch (p.rel) {
      case Relation::Eq:
        value = w;
        break;
      case Relation::Neq:
        value = -w;
        break;
      case Relation::Lt:
      case Relation::Le:
        value = w - (ctx.rng ? ctx.rng->open_unit() : 0.5);
        break;
      case Relation::Gt:
      case Relation::Ge:
        value = w + (ctx.rng ? ctx.rng->open_unit() : 0.5);
        break;
    }
    out[block_index(p.subject)] = value;
  }
  return out;
}

}  // namespace def
