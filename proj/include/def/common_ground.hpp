#pragma once

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "def/proposition.hpp"
#include "def/vec5.hpp"
#include "def/worlds.hpp"

namespace def {

// One piece of support for a tracked proposition: where it came from and how
// much it weighs, carrying either a vector or a world-set payload.
struct EvidenceSupport {
  std::string source;  // utterance id
  double weight = 1.0;
  std::optional<Vec5> vector;
  std::optional<std::vector<World>> worlds;
};

struct EvidenceRecord {
  Proposition prop;
  std::vector<EvidenceSupport> support;

  double accumulated_strength() const {
    double s = 0.0;
    for (const auto& e : support) s += e.weight;
    return s;
  }
};

struct BankThresholds {
  double evidence_min = 1.0;    // strength needed to leave QBank
  double friction_low = 0.3;    // max friction for QBank -> EBank
  double friction_zero = 0.05;  // max friction for EBank -> FBank
};

// QBank/EBank/FBank triple plus the evidence ledger backing them. Values are
// immutable; operations return updated copies. The three banks stay pairwise
// disjoint and FBank stays consistent (one weight per block).
struct CommonGround {
  std::vector<Proposition> qbank;
  std::vector<Proposition> ebank;
  std::vector<Proposition> fbank;
  std::vector<EvidenceRecord> ledger;  // support for every tracked proposition
  BankThresholds thresholds;

  bool tracks(const Proposition& p) const;
  const EvidenceRecord* record_for(const Proposition& p) const;
};

// Start tracking a proposition as a question under discussion.
CommonGround pose(const CommonGround& cg, const Proposition& prop);

// Record support; promotes QBank -> EBank once accumulated strength reaches
// evidence_min and friction is at most friction_low.
CommonGround add_evidence(const CommonGround& cg, const Proposition& prop,
                          const EvidenceSupport& support, double friction_score);

// EBank -> FBank when friction is near zero; rejects facts that contradict an
// accepted weight.
CommonGround promote_to_fact(const CommonGround& cg, const Proposition& prop,
                             double friction_score);

// Accepted weights as a vector, zero where no fact is banked.
Vec5 fbank_vector(const CommonGround& cg);

nlohmann::json common_ground_to_json(const CommonGround& cg);
std::string format_bank_table(const CommonGround& cg);

}  // namespace def
