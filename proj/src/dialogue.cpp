#include "def/dialogue.hpp"

#include <algorithm>
#include <array>
#include <fstream>
#include <ostream>

#include "def/encoding.hpp"
#include "def/errors.hpp"
#include "def/rng.hpp"

namespace def {

namespace {

std::string kind_name(UtteranceKind k) {
  switch (k) {
    case UtteranceKind::Assert: return "assert";
    case UtteranceKind::Accept: return "accept";
    case UtteranceKind::Deny: return "deny";
  }
  return "?";
}

std::string utterance_ptr(std::size_t idx, const char* field = nullptr) {
  std::string p = "/utterances/" + std::to_string(idx);
  if (field) {
    p += '/';
    p += field;
  }
  return p;
}

}  // namespace

Transcript transcript_from_json(const nlohmann::json& j) {
  Transcript t;
  if (!j.is_object()) throw SchemaViolation("", "transcript must be an object");
  if (!j.contains("group_id") || !j.at("group_id").is_string())
    throw SchemaViolation("/group_id", "missing or non-string group_id");
  t.group_id = j.at("group_id").get<std::string>();

  if (!j.contains("participants") || !j.at("participants").is_array())
    throw SchemaViolation("/participants", "missing participants array");
  for (const auto& p : j.at("participants")) {
    if (!p.is_string())
      throw SchemaViolation("/participants", "participant ids must be strings");
    t.participants.push_back(p.get<std::string>());
  }
  if (t.participants.size() < 2)
    throw SchemaViolation("/participants", "need at least 2 participants");
  {
    auto sorted = t.participants;
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
      throw SchemaViolation("/participants", "duplicate participant id");
  }

  if (!j.contains("utterances") || !j.at("utterances").is_array())
    throw SchemaViolation("/utterances", "missing utterances array");

  std::size_t idx = 0;
  for (const auto& uj : j.at("utterances")) {
    Utterance u;
    u.index = idx;
    if (!uj.contains("speaker") || !uj.at("speaker").is_string())
      throw SchemaViolation(utterance_ptr(idx, "speaker"), "missing speaker");
    u.speaker = uj.at("speaker").get<std::string>();
    if (std::find(t.participants.begin(), t.participants.end(), u.speaker) ==
        t.participants.end())
      throw SchemaViolation(utterance_ptr(idx, "speaker"),
                            "speaker '" + u.speaker + "' not a participant");

    if (!uj.contains("kind") || !uj.at("kind").is_string())
      throw SchemaViolation(utterance_ptr(idx, "kind"), "missing kind");
    std::string kind = uj.at("kind").get<std::string>();
    bool deny = false;
    if (kind == "assert") {
      u.kind = UtteranceKind::Assert;
    } else if (kind == "accept") {
      u.kind = UtteranceKind::Accept;
    } else if (kind == "deny") {
      deny = true;
      u.kind = UtteranceKind::Assert;  // normalized below
    } else {
      throw SchemaViolation(utterance_ptr(idx, "kind"),
                            "kind must be assert|accept|deny, got '" + kind + "'");
    }

    if (!uj.contains("assertions") || !uj.at("assertions").is_array())
      throw SchemaViolation(utterance_ptr(idx, "assertions"),
                            "missing assertions array");
    for (const auto& a : uj.at("assertions")) {
      if (!a.is_string())
        throw SchemaViolation(utterance_ptr(idx, "assertions"),
                              "assertions must be strings");
      std::string text = a.get<std::string>();
      AssertionSet parsed;
      try {
        parsed = parse(text);
      } catch (const ParseError& e) {
        throw UtteranceParseError(idx, std::string(e.what()) + " in '" + text + "'");
      }
      if (deny) {
        // Deny is ingested as an assert of the negated atoms, keeping the
        // update path uniform downstream.
        AssertionSet negated;
        for (const auto& atom : parsed.atoms) negated.atoms.push_back(atom.negated());
        parsed = negated;
      }
      if (u.kind == UtteranceKind::Accept && !deny) {
        for (const auto& atom : parsed.atoms)
          if (!atom.is_positive_specific())
            throw SchemaViolation(
                utterance_ptr(idx, "assertions"),
                "accept requires positive specific block-weight atoms, got '" +
                    format(atom) + "'");
      }
      u.assertions.push_back(format(parsed));
    }

    if (uj.contains("text")) {
      if (!uj.at("text").is_string())
        throw SchemaViolation(utterance_ptr(idx, "text"), "text must be a string");
      u.text = uj.at("text").get<std::string>();
    }
    t.utterances.push_back(std::move(u));
    ++idx;
  }
  return t;
}

Transcript load_transcript(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DefError("cannot open transcript file '" + path + "'");
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw SchemaViolation("", "invalid JSON in '" + path + "': " + e.what());
  }
  return transcript_from_json(j);
}

nlohmann::json transcript_to_json(const Transcript& t) {
  nlohmann::json j;
  j["group_id"] = t.group_id;
  j["participants"] = t.participants;
  j["utterances"] = nlohmann::json::array();
  for (const Utterance& u : t.utterances) {
    nlohmann::json uj;
    uj["speaker"] = u.speaker;
    uj["kind"] = kind_name(u.kind);
    uj["assertions"] = u.assertions;
    if (!u.text.empty()) uj["text"] = u.text;
    j["utterances"].push_back(std::move(uj));
  }
  return j;
}

void save_transcript(const Transcript& t, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw DefError("cannot write transcript file '" + path + "'");
  out << transcript_to_json(t).dump(2) << "\n";
}

std::string select_focus(const Transcript& t) {
  if (t.participants.empty() || t.utterances.empty())
    throw EmptyTranscript("transcript '" + t.group_id + "' has no utterances");
  std::vector<std::string> ids = t.participants;
  std::sort(ids.begin(), ids.end());
  std::string best;
  std::size_t best_count = SIZE_MAX;
  for (const std::string& id : ids) {
    std::size_t count = 0;
    for (const Utterance& u : t.utterances)
      if (u.speaker == id) ++count;
    if (count < best_count) {
      best = id;
      best_count = count;
    }
  }
  return best;
}

namespace {

struct PlannedUtterance {
  std::string speaker;
  UtteranceKind kind;
  std::string assertion;
};

std::string gt_atom(const Vec5& truth, int block) {
  Proposition p{static_cast<Block>(block), Relation::Eq, truth[block]};
  return format(p);
}

// "red=10 & <b>=<truth>": restating a block together with the known red
// weight, the way the task groups phrase re-weighings against the reference
// block. The anchored form also keeps the conjunction aligned with the
// listener's belief even when the restated component has been argued down.
std::string anchored_gt_atom(const Vec5& truth, int block) {
  if (block == 0) return gt_atom(truth, 0);
  return gt_atom(truth, 0) + " & " + gt_atom(truth, block);
}

}  // namespace

Transcript generate(const GeneratorConfig& cfg) {
  if (cfg.participants < 2)
    throw InvalidConfig("generator needs at least 2 participants");
  if (cfg.frictive_rate < 0.0 || cfg.frictive_rate > 1.0)
    throw InvalidConfig("frictive_rate must lie in [0,1]");
  for (double w : cfg.ground_truth)
    if (!(w > 0.0)) throw InvalidConfig("ground truth weights must be positive");

  const std::size_t m = cfg.participants;
  std::vector<std::string> ids;
  for (std::size_t p = 1; p <= m; ++p) ids.push_back("P" + std::to_string(p));
  const std::string focus = ids.back();
  std::vector<std::string> others(ids.begin(), ids.end() - 1);

  Rng rng(cfg.seed);

  // Scripted skeleton: every atom gets asserted by two distinct speakers, then
  // every non-focus participant accepts every atom; the focus only accepts the
  // red atom (its weight is given by the task setup).
  std::vector<int> atom_order{0, 1, 2, 3, 4};
  for (std::size_t i = atom_order.size(); i > 1; --i)
    std::swap(atom_order[i - 1], atom_order[rng.index(i)]);

  std::vector<PlannedUtterance> script;
  std::vector<std::string> seed_asserter(kNumBlocks);
  for (std::size_t i = 0; i < atom_order.size(); ++i) {
    int b = atom_order[i];
    seed_asserter[b] = others[i % others.size()];
    script.push_back({seed_asserter[b], UtteranceKind::Assert,
                      gt_atom(cfg.ground_truth, b)});
  }
  for (std::size_t i = 0; i < atom_order.size(); ++i) {
    int b = atom_order[i];
    // Echo by a speaker other than the seed asserter; with two participants
    // only the focus is left to do it.
    std::string echo = focus;
    for (const std::string& cand : others)
      if (cand != seed_asserter[b]) {
        echo = cand;
        break;
      }
    script.push_back({echo, UtteranceKind::Assert, gt_atom(cfg.ground_truth, b)});
  }
  for (const std::string& p : others)
    for (int b : atom_order)
      script.push_back({p, UtteranceKind::Accept, gt_atom(cfg.ground_truth, b)});
  script.push_back({focus, UtteranceKind::Accept, gt_atom(cfg.ground_truth, 0)});
  script.push_back({focus, UtteranceKind::Accept, gt_atom(cfg.ground_truth, 0)});

  // The dialogue closes with a consensus recap (a truthful restatement of
  // every block plus room for outstanding repairs), mirroring how the task
  // groups reconfirm weights before finishing.
  const std::size_t recap_len = kNumBlocks + 3;
  const std::size_t n = cfg.n_utterances;
  if (n < script.size() + recap_len)
    throw InvalidConfig("n_utterances must be at least " +
                        std::to_string(script.size() + recap_len) + " for " +
                        std::to_string(m) + " participants");
  const std::size_t discussion = n - recap_len;

  // Frictive flags drawn iid over the discussion so the frictive count is
  // Binomial-distributed; script items land on evenly spaced non-frictive
  // slots.
  std::vector<bool> frictive(n, false);
  std::size_t non_frictive = 0;
  for (std::size_t s = 0; s < discussion; ++s) {
    frictive[s] = rng.bernoulli(cfg.frictive_rate);
    if (!frictive[s]) ++non_frictive;
  }
  if (non_frictive < script.size()) {
    // Torture rates: hand the last discussion slots to the script.
    for (std::size_t s = discussion; s > 0 && non_frictive < script.size(); --s)
      if (frictive[s - 1]) {
        frictive[s - 1] = false;
        ++non_frictive;
      }
  }

  std::vector<std::size_t> nf_slots;
  for (std::size_t s = 0; s < discussion; ++s)
    if (!frictive[s]) nf_slots.push_back(s);
  std::vector<std::size_t> script_slots;
  for (std::size_t i = 0; i < script.size(); ++i)
    script_slots.push_back(nf_slots[i * nf_slots.size() / script.size()]);

  Transcript t;
  t.group_id = cfg.group_id;
  t.participants = ids;

  // Ground-truth-assert bookkeeping so accepts only reference an atom someone
  // other than the accepter already asserted.
  std::vector<std::vector<std::string>> asserters(kNumBlocks);
  auto note_gt_atoms = [&](const std::string& assertion, const std::string& who) {
    for (const Proposition& atom : parse(assertion).atoms)
      if (atom.rel == Relation::Eq && !atom.object_is_block() &&
          atom.grams() == cfg.ground_truth[block_index(atom.subject)])
        asserters[block_index(atom.subject)].push_back(who);
  };
  auto has_foreign_assert = [&](int b, const std::string& who) {
    for (const auto& a : asserters[b])
      if (a != who) return true;
    return false;
  };

  // Frictive pushback leaves the block "contested"; the group responds with a
  // few re-weighings against the reference block until the claim settles.
  // Heal debts are bounded per block, so pushback bursts cannot starve the
  // rest of the dialogue.
  std::array<int, kNumBlocks> heal_due{};
  auto next_heal_block = [&]() {
    int best = -1;
    for (int b = 0; b < kNumBlocks; ++b)
      if (heal_due[b] > (best < 0 ? 0 : heal_due[best])) best = b;
    return best;
  };

  std::size_t script_next = 0;
  std::size_t recap_next = 0;
  for (std::size_t s = 0; s < n; ++s) {
    Utterance u;
    u.index = s;
    if (script_next < script_slots.size() && script_slots[script_next] == s) {
      const PlannedUtterance& pl = script[script_next++];
      u.speaker = pl.speaker;
      u.kind = pl.kind;
      u.assertions = {pl.assertion};
      if (pl.kind == UtteranceKind::Assert) note_gt_atoms(pl.assertion, pl.speaker);
    } else if (frictive[s]) {
      // Pushback denies a weight or lowballs it; the red reference weight is
      // given by the task and never contested.
      int b = 1 + static_cast<int>(rng.index(kNumBlocks - 1));
      double truth = cfg.ground_truth[b];
      u.speaker = others[rng.index(others.size())];
      u.kind = UtteranceKind::Assert;
      if (truth >= 20.0 && rng.bernoulli(0.5)) {
        Proposition p{static_cast<Block>(b), Relation::Eq, truth - 10.0};
        u.assertions = {format(p)};
      } else {
        Proposition p{static_cast<Block>(b), Relation::Neq, truth};
        u.assertions = {format(p)};
      }
      heal_due[b] = 3;
    } else if (s >= discussion) {
      // Consensus recap: anchored restatements of every weight.
      std::size_t pos = recap_next++;
      int b = atom_order[pos % kNumBlocks];
      u.speaker = others[pos % others.size()];
      u.kind = UtteranceKind::Assert;
      u.assertions = {anchored_gt_atom(cfg.ground_truth, b)};
      note_gt_atoms(u.assertions[0], u.speaker);
    } else if (int dirty = next_heal_block(); dirty >= 0) {
      --heal_due[dirty];
      u.speaker = others[rng.index(others.size())];
      u.kind = UtteranceKind::Assert;
      u.assertions = {anchored_gt_atom(cfg.ground_truth, dirty)};
      note_gt_atoms(u.assertions[0], u.speaker);
    } else {
      u.speaker = others[rng.index(others.size())];
      double roll = rng.unit();
      int b = static_cast<int>(rng.index(kNumBlocks));
      double truth = cfg.ground_truth[b];
      if (roll < 0.25 && has_foreign_assert(b, u.speaker)) {
        u.kind = UtteranceKind::Accept;
        u.assertions = {gt_atom(cfg.ground_truth, b)};
      } else if (roll < 0.40) {
        // Truth-consistent bracketing hint ("heavier than 10", "under 30").
        Proposition p = truth > 10.0
                            ? Proposition{static_cast<Block>(b), Relation::Gt,
                                          truth - 10.0}
                            : Proposition{static_cast<Block>(b), Relation::Lt,
                                          truth + 10.0};
        u.kind = UtteranceKind::Assert;
        u.assertions = {format(p)};
      } else if (roll < 0.70) {
        u.kind = UtteranceKind::Assert;
        u.assertions = {anchored_gt_atom(cfg.ground_truth, b)};
        note_gt_atoms(u.assertions[0], u.speaker);
      } else {
        u.kind = UtteranceKind::Assert;
        u.assertions = {gt_atom(cfg.ground_truth, b)};
        note_gt_atoms(u.assertions[0], u.speaker);
      }
    }
    t.utterances.push_back(std::move(u));
  }

  return t;
}

std::vector<Transcript> generate_corpus(const GeneratorConfig& cfg,
                                        std::size_t n_groups) {
  std::vector<Transcript> out;
  for (std::size_t g = 0; g < n_groups; ++g) {
    GeneratorConfig gc = cfg;
    gc.seed = cfg.seed + g;
    gc.group_id = "group-" + std::to_string(g + 1);
    out.push_back(generate(gc));
  }
  return out;
}

void write_encodings_csv(const Transcript& t, std::uint64_t seed,
                         std::ostream& out) {
  Rng rng(seed);
  out << "index,speaker,kind,assertion,red,blue,green,purple,yellow\n";
  char buf[160];
  for (const Utterance& u : t.utterances) {
    for (const std::string& assertion : u.assertions) {
      Vec5 v = kZeroVec;
      bool resolved = true;
      try {
        EncodingContext ctx{&rng, nullptr};
        v = encode(parse(assertion), ctx);
      } catch (const MissingBeliefContext&) {
        resolved = false;
      }
      out << u.index << ',' << u.speaker << ',' << kind_name(u.kind) << ",\""
          << assertion << "\",";
      if (resolved) {
        std::snprintf(buf, sizeof(buf), "%.6f,%.6f,%.6f,%.6f,%.6f", v[0], v[1],
                      v[2], v[3], v[4]);
        out << buf;
      } else {
        out << ",,,,";
      }
      out << "\n";
    }
  }
}

}  // namespace def
