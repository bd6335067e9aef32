#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "def/errors.hpp"
#include "def/proposition.hpp"

namespace def {

using AgentId = std::string;

// A possible world: one grams value per model block, index-aligned with
// WorldsModel::blocks.
using World = std::vector<double>;

// Conjunction of atoms; the empty conjunction is the tautology.
struct Formula {
  std::vector<Proposition> atoms;

  static Formula top() { return {}; }
  static Formula atom(const Proposition& p) { return {{p}}; }
  static Formula from_dsl(const std::string& text);
};

std::string format(const Formula& f);

// Square boolean relation stored as bitset rows.
class RelationMatrix {
 public:
  RelationMatrix() = default;
  explicit RelationMatrix(std::size_t n)
      : n_(n), row_words_((n + 63) / 64), bits_(n * row_words_, 0) {}

  static RelationMatrix total(std::size_t n);
  static RelationMatrix identity(std::size_t n);

  std::size_t size() const { return n_; }

  bool related(std::size_t i, std::size_t j) const {
    return (bits_[i * row_words_ + j / 64] >> (j % 64)) & 1u;
  }

  void set(std::size_t i, std::size_t j) {
    bits_[i * row_words_ + j / 64] |= std::uint64_t{1} << (j % 64);
  }

  std::size_t pair_count() const;

  // Indices reachable from at least one source: the union of all rows.
  std::vector<std::size_t> image() const;

 private:
  std::size_t n_ = 0;
  std::size_t row_words_ = 0;
  std::vector<std::uint64_t> bits_;
};

// Finite Kripke structure over candidate weight assignments. Immutable after
// construction; updates return new models.
struct WorldsModel {
  std::vector<Block> blocks;       // which blocks the worlds assign
  std::vector<double> candidates;  // admissible grams values per block
  std::vector<AgentId> agents;
  std::vector<World> worlds;
  std::vector<RelationMatrix> access;  // aligned with `agents`
  std::vector<std::string> announcements;  // applied public announcements (DSL)

  // Full ignorance: every assignment in candidates^blocks, total access.
  static WorldsModel full_model(std::vector<Block> blocks,
                                std::vector<double> candidates,
                                std::vector<AgentId> agents);

  // The 5-block x {10,20,30,40,50} universe (3125 worlds).
  static WorldsModel default_universe(std::vector<AgentId> agents);

  int block_pos(Block b) const;  // -1 when the block is not modeled
  std::size_t agent_pos(const AgentId& a) const;  // throws UnknownAgent

  bool satisfies(const World& w, const Proposition& p) const;
  bool satisfies(const World& w, const Formula& f) const;
  bool satisfiable(const Formula& f) const;
};

// Event model: events with preconditions plus per-agent event accessibility.
// Agents without an override use default_access.
struct EventModel {
  struct Event {
    Formula pre;
    std::string label;
  };

  std::vector<Event> events;
  RelationMatrix default_access;
  std::vector<std::pair<AgentId, RelationMatrix>> overrides;

  const RelationMatrix& access_for(const AgentId& a) const;
};

// BMS product update. Surviving worlds are pairs (w, e) with w |= pre(e);
// (w,e) R_a (w',e') iff w R_a w' and e R_a^E e'. Throws EmptyProduct when
// nothing survives.
WorldsModel product_update(const WorldsModel& m, const EventModel& e);

// Single-event public announcement of f.
EventModel announcement_event(const Formula& f);

// product_update with announcement_event(f), recording f in the model's
// announcement history (this is what serializes).
WorldsModel announce(const WorldsModel& m, const Formula& f);

// Global belief reading: f holds at every world any agent-a arrow reaches,
// from every source world. No pointed actual world is designated.
bool believes(const WorldsModel& m, const AgentId& a, const Formula& f);

// Pointed variant: f holds at all worlds a considers possible from `world`.
bool believes_at(const WorldsModel& m, std::size_t world, const AgentId& a,
                 const Formula& f);

// The worlds agent a considers viable: the image of R_a, deduplicated by
// assignment so sets stay comparable across product updates.
struct BeliefSet {
  AgentId agent;
  std::vector<Block> blocks;  // layout of the world vectors
  std::vector<World> worlds;  // sorted, unique
};

BeliefSet belief_set(const WorldsModel& m, const AgentId& a);

// alignment(phi, B_a, E) = |{w in B_a : w |= phi} ∩ E| / |B_a|.
double set_alignment(const BeliefSet& b, const Formula& f,
                     const std::vector<World>& evidence);

double set_friction(const BeliefSet& b, const Formula& f,
                    const std::vector<World>& evidence);

// A revision is frictive when it re-admits worlds the old set had excluded,
// i.e. it is not a monotone filtering of the old set.
bool is_frictive_revision(const BeliefSet& old_set, const BeliefSet& new_set);

enum class EvidenceKind { Do, Say, See };
enum class Visibility { Public, Private };

// Event constructors for the Acting/Saying/Seeing-is-Believing axioms. Public
// events filter every agent to phi-worlds. Private events filter only the
// actor; other agents keep their original uncertainty via a skip event they
// cannot tell apart from nothing happening.
EventModel evidence_event(EvidenceKind kind, const AgentId& actor,
                          const Formula& f,
                          Visibility vis = Visibility::Public);

// Models serialize intensionally: candidates, agents, announcement history.
nlohmann::json worlds_model_to_json(const WorldsModel& m);
WorldsModel worlds_model_from_json(const nlohmann::json& j);

}  // namespace def
