#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "def/proposition.hpp"
#include "def/vec5.hpp"

namespace def {

enum class UtteranceKind { Assert, Accept, Deny };

struct Utterance {
  std::string speaker;
  UtteranceKind kind = UtteranceKind::Assert;
  std::vector<std::string> assertions;  // proposition-dsl strings
  std::string text;                     // optional raw form
  std::size_t index = 0;                // position in the dialogue
};

struct Transcript {
  std::string group_id;
  std::vector<std::string> participants;
  std::vector<Utterance> utterances;
};

// Parse and validate a transcript JSON document:
//   {"group_id": str, "participants": [str],
//    "utterances": [{"speaker": str, "kind": "assert"|"accept"|"deny",
//                    "assertions": [str], "text": str?}]}
// Deny utterances are ingested as asserts of the negated atoms so the update
// path downstream only sees asserts and accepts. Throws SchemaViolation with
// a JSON-pointer path, or UtteranceParseError for bad assertion strings.
Transcript transcript_from_json(const nlohmann::json& j);
Transcript load_transcript(const std::string& path);

nlohmann::json transcript_to_json(const Transcript& t);
void save_transcript(const Transcript& t, const std::string& path);

// The participant who speaks the least (ties broken by lexicographic id).
std::string select_focus(const Transcript& t);

struct GeneratorConfig {
  std::uint64_t seed = 0;
  std::size_t n_utterances = 60;
  double frictive_rate = 0.3;  // fraction of contradicting assertions
  Vec5 ground_truth{10, 10, 20, 30, 50};
  std::size_t participants = 3;
  std::string group_id = "group-1";
};

// Seeded synthetic Weights-Task-style dialogue. Non-frictive assertions state
// ground-truth atoms (with occasional truth-consistent inequality hints);
// frictive ones deny or mis-state them. Every non-focus participant accepts
// every ground-truth atom after it has been asserted by two distinct
// speakers; the focus designate only ever accepts the red atom, whose weight
// the task gives away, so its belief trajectory stays driven by interlocutor
// updates. The focus speaks strictly least by construction.
Transcript generate(const GeneratorConfig& cfg);

// Multi-group corpus: group g uses seed cfg.seed + g and id "group-<g+1>".
std::vector<Transcript> generate_corpus(const GeneratorConfig& cfg,
                                        std::size_t n_groups);

// Per-utterance encodings for inspection (utterance index, speaker, kind,
// encoded vector), seeded like a dialogue run.
void write_encodings_csv(const Transcript& t, std::uint64_t seed,
                         std::ostream& out);

}  // namespace def
