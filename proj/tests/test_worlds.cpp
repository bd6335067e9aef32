#include <doctest.h>

#include <algorithm>
#include <vector>

#include "def/rng.hpp"
#include "def/worlds.hpp"

using namespace def;

namespace {

WorldsModel two_block_model() {
  return WorldsModel::full_model({Block::Red, Block::Blue}, {10, 20},
                                 {"a", "b"});
}

// Independent satisfaction evaluator for the oracle tests; deliberately not
// routed through WorldsModel::satisfies.
bool oracle_sat(const std::vector<Block>& layout, const World& w,
                const Proposition& p) {
  auto value_of = [&](Block b) {
    for (std::size_t i = 0; i < layout.size(); ++i)
      if (layout[i] == b) return w[i];
    return -1.0;
  };
  double lhs = value_of(p.subject);
  double rhs = p.object_is_block() ? value_of(p.object_block()) : p.grams();
  switch (p.rel) {
    case Relation::Eq: return lhs == rhs;
    case Relation::Neq: return lhs != rhs;
    case Relation::Lt: return lhs < rhs;
    case Relation::Gt: return lhs > rhs;
    case Relation::Le: return lhs <= rhs;
    case Relation::Ge: return lhs >= rhs;
  }
  return false;
}

double oracle_alignment(const BeliefSet& b, const Formula& f,
                        const std::vector<World>& evidence) {
  std::size_t hits = 0;
  for (const World& w : b.worlds) {
    bool sat = true;
    for (const Proposition& p : f.atoms) sat = sat && oracle_sat(b.blocks, w, p);
    bool in_evidence = false;
    for (const World& e : evidence)
      if (e == w) in_evidence = true;
    if (sat && in_evidence) ++hits;
  }
  return static_cast<double>(hits) / static_cast<double>(b.worlds.size());
}

Formula random_formula(Rng& rng, const WorldsModel& m) {
  Formula f;
  std::size_t n_atoms = 1 + rng.index(2);
  for (std::size_t i = 0; i < n_atoms; ++i) {
    Proposition p;
    p.subject = m.blocks[rng.index(m.blocks.size())];
    p.rel = static_cast<Relation>(rng.index(6));
    p.object = m.candidates[rng.index(m.candidates.size())];
    f.atoms.push_back(p);
  }
  return f;
}

}  // namespace

TEST_CASE("full model enumerates the candidate assignments") {
  WorldsModel m = two_block_model();
  CHECK(m.worlds.size() == 4);
  WorldsModel full = WorldsModel::default_universe({"a", "b", "c"});
  CHECK(full.worlds.size() == 3125);
}

TEST_CASE("announcing a tautology leaves the model isomorphic") {
  WorldsModel m = two_block_model();
  WorldsModel after = announce(m, Formula::top());
  CHECK(after.worlds.size() == m.worlds.size());
  std::vector<World> a = m.worlds, b = after.worlds;
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  CHECK(a == b);
  for (std::size_t agent = 0; agent < m.agents.size(); ++agent)
    CHECK(after.access[agent].pair_count() == m.access[agent].pair_count());
}

TEST_CASE("public announcement filters worlds") {
  WorldsModel m = two_block_model();
  WorldsModel after = announce(m, Formula::from_dsl("red=10"));
  CHECK(after.worlds.size() == 2);
  CHECK(believes(after, "a", Formula::from_dsl("red=10")));
  CHECK_THROWS_AS(announce(WorldsModel::default_universe({"a"}),
                           Formula::from_dsl("red=60")),
                  EmptyProduct);
}

TEST_CASE("believes uses the global reading") {
  WorldsModel m = two_block_model();
  CHECK(believes(m, "a", Formula::top()));
  CHECK_FALSE(believes(m, "a", Formula::from_dsl("blue=10")));
  CHECK_THROWS_AS(believes(m, "zz", Formula::top()), UnknownAgent);

  WorldsModel after = announce(m, Formula::from_dsl("blue=10"));
  CHECK(believes(after, "a", Formula::from_dsl("blue=10")));
  CHECK(believes_at(after, 0, "a", Formula::from_dsl("blue=10")));
}

TEST_CASE("set_alignment matches hand enumeration on the 4-world universe") {
  WorldsModel m = two_block_model();
  BeliefSet b = belief_set(announce(m, Formula::from_dsl("red=10")), "a");
  CHECK(b.worlds.size() == 2);
  CHECK(set_alignment(b, Formula::from_dsl("blue=10"), m.worlds) == 0.5);
  CHECK(set_alignment(b, Formula::from_dsl("red=10"), m.worlds) == 1.0);
  CHECK(set_alignment(b, Formula::from_dsl("red=20"), m.worlds) == 0.0);
  CHECK(set_friction(b, Formula::from_dsl("red=10"), m.worlds) == 0.0);

  BeliefSet empty{"a", b.blocks, {}};
  CHECK_THROWS_AS(set_alignment(empty, Formula::top(), m.worlds),
                  EmptyBeliefSet);
}

TEST_CASE("set_alignment equals brute force on random triples") {
  WorldsModel m = WorldsModel::default_universe({"a"});
  Rng rng(42);
  for (int trial = 0; trial < 25; ++trial) {
    WorldsModel current = m;
    Formula restrict = random_formula(rng, m);
    if (current.satisfiable(restrict)) current = announce(current, restrict);
    BeliefSet b = belief_set(current, "a");
    Formula f = random_formula(rng, m);
    std::vector<World> evidence;
    for (const World& w : m.worlds)
      if (rng.bernoulli(0.5)) evidence.push_back(w);
    CHECK(set_alignment(b, f, evidence) == oracle_alignment(b, f, evidence));
  }
}

TEST_CASE("set friction stays in [0,1] and vanishes exactly at full alignment") {
  WorldsModel m = WorldsModel::full_model({Block::Red, Block::Blue}, {10, 20, 30},
                                          {"a"});
  Rng rng(31);
  for (int trial = 0; trial < 100; ++trial) {
    BeliefSet b{"a", m.blocks, {}};
    std::vector<World> evidence;
    for (const World& w : m.worlds) {
      if (rng.bernoulli(0.6)) b.worlds.push_back(w);
      if (rng.bernoulli(0.6)) evidence.push_back(w);
    }
    if (b.worlds.empty()) b.worlds.push_back(m.worlds[0]);
    Formula f = random_formula(rng, m);
    double friction = set_friction(b, f, evidence);
    double alignment = set_alignment(b, f, evidence);
    CHECK(friction >= 0.0);
    CHECK(friction <= 1.0);
    CHECK((alignment == 1.0) == (friction == 0.0));
  }
}

TEST_CASE("frictive revision detects re-admitted worlds") {
  BeliefSet old_set{"a", {Block::Red}, {{10.0}, {20.0}}};
  BeliefSet same0 = old_set;
  CHECK_FALSE(is_frictive_revision(old_set, same0));

  BeliefSet filtered{"a", {Block::Red}, {{10.0}}};
  CHECK_FALSE(is_frictive_revision(old_set, filtered));

  BeliefSet readmitted{"a", {Block::Red}, {{10.0}, {30.0}}};
  CHECK(is_frictive_revision(old_set, readmitted));

  BeliefSet other{"b", {Block::Red}, {{10.0}}};
  CHECK_THROWS_AS(is_frictive_revision(old_set, other), AgentMismatch);
}

TEST_CASE("public announcements only filter belief sets") {
  WorldsModel m = WorldsModel::full_model({Block::Red, Block::Blue, Block::Green},
                                          {10, 20, 30}, {"a", "b"});
  Rng rng(7);
  for (int trial = 0; trial < 20; ++trial) {
    Formula f = random_formula(rng, m);
    if (!m.satisfiable(f)) continue;
    BeliefSet before = belief_set(m, "a");
    WorldsModel after = announce(m, f);
    BeliefSet after_set = belief_set(after, "a");
    CHECK(std::includes(before.worlds.begin(), before.worlds.end(),
                        after_set.worlds.begin(), after_set.worlds.end()));
    CHECK_FALSE(is_frictive_revision(before, after_set));
  }
}

TEST_CASE("evidence events establish belief for the actor") {
  WorldsModel m = two_block_model();
  for (EvidenceKind kind :
       {EvidenceKind::Do, EvidenceKind::Say, EvidenceKind::See}) {
    WorldsModel after =
        product_update(m, evidence_event(kind, "a", Formula::from_dsl("red=10")));
    CHECK(believes(after, "a", Formula::from_dsl("red=10")));
    CHECK(believes(after, "b", Formula::from_dsl("red=10")));  // public
  }
}

TEST_CASE("private seeing leaves the other agent unchanged") {
  WorldsModel m = two_block_model();
  Formula f = Formula::from_dsl("blue=10");
  CHECK_FALSE(believes(m, "b", f));

  WorldsModel after = product_update(
      m, evidence_event(EvidenceKind::See, "a", f, Visibility::Private));
  CHECK(believes(after, "a", f));
  CHECK_FALSE(believes(after, "b", f));
  // b's belief set is intact, a's shrank to the filtered worlds.
  CHECK(belief_set(after, "b").worlds.size() == 4);
  CHECK(belief_set(after, "a").worlds.size() == 2);
}

TEST_CASE("models reconstruct from their JSON form") {
  WorldsModel m = WorldsModel::default_universe({"p1", "p2", "p3"});
  m = announce(m, Formula::from_dsl("red=10"));
  m = announce(m, Formula::top());
  m = announce(m, Formula::from_dsl("blue!=30"));
  WorldsModel copy = worlds_model_from_json(worlds_model_to_json(m));
  CHECK(copy.worlds.size() == m.worlds.size());
  CHECK(copy.announcements == m.announcements);
  CHECK(believes(copy, "p1", Formula::from_dsl("red=10")));
  CHECK(believes(copy, "p2", Formula::from_dsl("blue!=30")));
}
