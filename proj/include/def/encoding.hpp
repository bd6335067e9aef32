#pragma once

#include "def/proposition.hpp"
#include "def/rng.hpp"
#include "def/vec5.hpp"

namespace def {

// Inputs the value rules need beyond the atoms themselves: the jitter source
// for strict bounds and, for block-block atoms, the listener's current belief
// vector to resolve the reference block against.
struct EncodingContext {
  Rng* rng = nullptr;
  const Vec5* belief = nullptr;
};

// Vectorizes a conjunction per the R^5 conventions:
//   Eq(b,w)  -> component b = +w        Neq(b,w) -> component b = -w
//   Lt(b,w)  -> w - u, u ~ U(0,1)       Gt(b,w)  -> w + u
//   Le/Ge    -> same as Lt/Gt
// Block-block atoms first resolve the object block to |belief[object]| and
// then apply the value rule; a zero or absent belief context raises
// MissingBeliefContext. Unmentioned components stay 0. With no rng the bound
// jitter is pinned to 0.5, keeping strict bounds strict.
Vec5 encode(const AssertionSet& a, EncodingContext ctx);

}  // namespace def
