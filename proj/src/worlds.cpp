#include "def/worlds.hpp"

#include <algorithm>
#include <bit>
#include <cctype>

namespace def {

Formula Formula::from_dsl(const std::string& text) {
  std::string trimmed;
  for (char c : text)
    if (!std::isspace(static_cast<unsigned char>(c))) trimmed += c;
  if (trimmed == "true") return top();
  return {parse(text).atoms};
}

std::string format(const Formula& f) {
  if (f.atoms.empty()) return "true";
  return format(AssertionSet{f.atoms});
}

RelationMatrix RelationMatrix::total(std::size_t n) {
  RelationMatrix r(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) r.set(i, j);
  return r;
}

RelationMatrix RelationMatrix::identity(std::size_t n) {
  RelationMatrix r(n);
  for (std::size_t i = 0; i < n; ++i) r.set(i, i);
  return r;
}

std::size_t RelationMatrix::pair_count() const {
  std::size_t count = 0;
  for (std::uint64_t word : bits_) count += std::popcount(word);
  return count;
}

std::vector<std::size_t> RelationMatrix::image() const {
  std::vector<std::uint64_t> merged(row_words_, 0);
  for (std::size_t i = 0; i < n_; ++i)
    for (std::size_t w = 0; w < row_words_; ++w)
      merged[w] |= bits_[i * row_words_ + w];
  std::vector<std::size_t> out;
  for (std::size_t j = 0; j < n_; ++j)
    if ((merged[j / 64] >> (j % 64)) & 1u) out.push_back(j);
  return out;
}

WorldsModel WorldsModel::full_model(std::vector<Block> blocks,
                                    std::vector<double> candidates,
                                    std::vector<AgentId> agents) {
  WorldsModel m;
  m.blocks = std::move(blocks);
  m.candidates = std::move(candidates);
  m.agents = std::move(agents);

  World current(m.blocks.size(), 0.0);
  std::size_t count = 1;
  for (std::size_t i = 0; i < m.blocks.size(); ++i) count *= m.candidates.size();
  m.worlds.reserve(count);

  // Odometer enumeration: last block varies fastest.
  std::vector<std::size_t> idx(m.blocks.size(), 0);
  while (true) {
    for (std::size_t i = 0; i < m.blocks.size(); ++i)
      current[i] = m.candidates[idx[i]];
    m.worlds.push_back(current);
    std::size_t pos = m.blocks.size();
    while (pos > 0) {
      --pos;
      if (++idx[pos] < m.candidates.size()) break;
      idx[pos] = 0;
      if (pos == 0) {
        pos = SIZE_MAX;
        break;
      }
    }
    if (pos == SIZE_MAX || m.blocks.empty()) break;
  }

  m.access.assign(m.agents.size(), RelationMatrix::total(m.worlds.size()));
  return m;
}

WorldsModel WorldsModel::default_universe(std::vector<AgentId> agents) {
  return full_model({Block::Red, Block::Blue, Block::Green, Block::Purple,
                     Block::Yellow},
                    {10, 20, 30, 40, 50}, std::move(agents));
}

int WorldsModel::block_pos(Block b) const {
  for (std::size_t i = 0; i < blocks.size(); ++i)
    if (blocks[i] == b) return static_cast<int>(i);
  return -1;
}

std::size_t WorldsModel::agent_pos(const AgentId& a) const {
  for (std::size_t i = 0; i < agents.size(); ++i)
    if (agents[i] == a) return i;
  throw UnknownAgent("unknown agent '" + a + "'");
}

namespace {

bool compare(Relation rel, double lhs, double rhs) {
  switch (rel) {
    case Relation::Eq: return lhs == rhs;
    case Relation::Neq: return lhs != rhs;
    case Relation::Lt: return lhs < rhs;
    case Relation::Gt: return lhs > rhs;
    case Relation::Le: return lhs <= rhs;
    case Relation::Ge: return lhs >= rhs;
  }
  return false;
}

bool world_satisfies(const std::vector<Block>& layout, const World& w,
                     const Proposition& p) {
  auto pos_of = [&](Block b) {
    for (std::size_t i = 0; i < layout.size(); ++i)
      if (layout[i] == b) return static_cast<int>(i);
    return -1;
  };
  int subject = pos_of(p.subject);
  if (subject < 0)
    throw DefError("proposition about unmodeled block '" +
                   std::string(block_name(p.subject)) + "'");
  double rhs;
  if (p.object_is_block()) {
    int object = pos_of(p.object_block());
    if (object < 0)
      throw DefError("proposition about unmodeled block '" +
                     std::string(block_name(p.object_block())) + "'");
    rhs = w[static_cast<std::size_t>(object)];
  } else {
    rhs = p.grams();
  }
  return compare(p.rel, w[static_cast<std::size_t>(subject)], rhs);
}

}  // namespace

bool WorldsModel::satisfies(const World& w, const Proposition& p) const {
  return world_satisfies(blocks, w, p);
}

bool WorldsModel::satisfies(const World& w, const Formula& f) const {
  for (const Proposition& p : f.atoms)
    if (!satisfies(w, p)) return false;
  return true;
}

bool WorldsModel::satisfiable(const Formula& f) const {
  for (const World& w : worlds)
    if (satisfies(w, f)) return true;
  return false;
}

const RelationMatrix& EventModel::access_for(const AgentId& a) const {
  for (const auto& [agent, rel] : overrides)
    if (agent == a) return rel;
  return default_access;
}

WorldsModel product_update(const WorldsModel& m, const EventModel& e) {
  std::vector<std::pair<std::size_t, std::size_t>> survivors;
  for (std::size_t ev = 0; ev < e.events.size(); ++ev)
    for (std::size_t w = 0; w < m.worlds.size(); ++w)
      if (m.satisfies(m.worlds[w], e.events[ev].pre)) survivors.emplace_back(w, ev);
  if (survivors.empty())
    throw EmptyProduct("no world satisfies any event precondition");

  WorldsModel out;
  out.blocks = m.blocks;
  out.candidates = m.candidates;
  out.agents = m.agents;
  out.announcements = m.announcements;
  out.worlds.reserve(survivors.size());
  for (const auto& [w, ev] : survivors) out.worlds.push_back(m.worlds[w]);

  out.access.reserve(m.agents.size());
  for (std::size_t a = 0; a < m.agents.size(); ++a) {
    const RelationMatrix& world_rel = m.access[a];
    const RelationMatrix& event_rel = e.access_for(m.agents[a]);
    RelationMatrix rel(survivors.size());
    for (std::size_t p = 0; p < survivors.size(); ++p)
      for (std::size_t q = 0; q < survivors.size(); ++q)
        if (world_rel.related(survivors[p].first, survivors[q].first) &&
            event_rel.related(survivors[p].second, survivors[q].second))
          rel.set(p, q);
    out.access.push_back(std::move(rel));
  }
  return out;
}

EventModel announcement_event(const Formula& f) {
  EventModel e;
  e.events.push_back({f, "announce"});
  e.default_access = RelationMatrix::identity(1);
  return e;
}

WorldsModel announce(const WorldsModel& m, const Formula& f) {
  WorldsModel out = product_update(m, announcement_event(f));
  out.announcements.push_back(format(f));
  return out;
}

bool believes(const WorldsModel& m, const AgentId& a, const Formula& f) {
  const RelationMatrix& rel = m.access[m.agent_pos(a)];
  for (std::size_t j : rel.image())
    if (!m.satisfies(m.worlds[j], f)) return false;
  return true;
}

bool believes_at(const WorldsModel& m, std::size_t world, const AgentId& a,
                 const Formula& f) {
  const RelationMatrix& rel = m.access[m.agent_pos(a)];
  for (std::size_t j = 0; j < m.worlds.size(); ++j)
    if (rel.related(world, j) && !m.satisfies(m.worlds[j], f)) return false;
  return true;
}

BeliefSet belief_set(const WorldsModel& m, const AgentId& a) {
  const RelationMatrix& rel = m.access[m.agent_pos(a)];
  BeliefSet b;
  b.agent = a;
  b.blocks = m.blocks;
  for (std::size_t j : rel.image()) b.worlds.push_back(m.worlds[j]);
  std::sort(b.worlds.begin(), b.worlds.end());
  b.worlds.erase(std::unique(b.worlds.begin(), b.worlds.end()), b.worlds.end());
  return b;
}

double set_alignment(const BeliefSet& b, const Formula& f,
                     const std::vector<World>& evidence) {
  if (b.worlds.empty())
    throw EmptyBeliefSet("agent '" + b.agent + "' has an empty belief set");
  std::vector<World> sorted_evidence = evidence;
  std::sort(sorted_evidence.begin(), sorted_evidence.end());
  std::size_t hits = 0;
  for (const World& w : b.worlds) {
    bool sat = true;
    for (const Proposition& p : f.atoms)
      if (!world_satisfies(b.blocks, w, p)) {
        sat = false;
        break;
      }
    if (sat && std::binary_search(sorted_evidence.begin(), sorted_evidence.end(), w))
      ++hits;
  }
  return static_cast<double>(hits) / static_cast<double>(b.worlds.size());
}

double set_friction(const BeliefSet& b, const Formula& f,
                    const std::vector<World>& evidence) {
  return 1.0 - set_alignment(b, f, evidence);
}

bool is_frictive_revision(const BeliefSet& old_set, const BeliefSet& new_set) {
  if (old_set.agent != new_set.agent)
    throw AgentMismatch("comparing belief sets of '" + old_set.agent +
                        "' and '" + new_set.agent + "'");
  // Frictive iff new is not contained in old (both sorted by construction).
  return !std::includes(old_set.worlds.begin(), old_set.worlds.end(),
                        new_set.worlds.begin(), new_set.worlds.end());
}

EventModel evidence_event(EvidenceKind kind, const AgentId& actor,
                          const Formula& f, Visibility vis) {
  const char* label = kind == EvidenceKind::Do    ? "do"
                      : kind == EvidenceKind::Say ? "say"
                                                  : "see";
  EventModel e;
  if (vis == Visibility::Public) {
    e.events.push_back({f, label});
    e.default_access = RelationMatrix::identity(1);
    return e;
  }
  // Private: the actor observes the real event; everyone else only considers
  // the skip event, so their arrows survive untouched on the skip copies.
  e.events.push_back({f, label});
  e.events.push_back({Formula::top(), "skip"});
  RelationMatrix skip_only(2);
  skip_only.set(1, 1);
  e.default_access = skip_only;
  RelationMatrix real_only(2);
  real_only.set(0, 0);
  e.overrides.emplace_back(actor, real_only);
  return e;
}

nlohmann::json worlds_model_to_json(const WorldsModel& m) {
  nlohmann::json j;
  j["blocks"] = nlohmann::json::array();
  for (Block b : m.blocks) j["blocks"].push_back(std::string(block_name(b)));
  j["candidate_weights"] = m.candidates;
  j["agents"] = m.agents;
  j["announcements"] = m.announcements;
  return j;
}

WorldsModel worlds_model_from_json(const nlohmann::json& j) {
  std::vector<Block> blocks;
  for (const auto& name : j.at("blocks")) {
    auto b = block_from_name(name.get<std::string>());
    if (!b) throw DefError("unknown block '" + name.get<std::string>() + "'");
    blocks.push_back(*b);
  }
  WorldsModel m = WorldsModel::full_model(
      blocks, j.at("candidate_weights").get<std::vector<double>>(),
      j.at("agents").get<std::vector<AgentId>>());
  for (const auto& text : j.at("announcements"))
    m = announce(m, Formula::from_dsl(text.get<std::string>()));
  return m;
}

}  // namespace def
