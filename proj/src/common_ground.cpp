#include "def/common_ground.hpp"

#include <algorithm>
#include <cstdio>

namespace def {

namespace {

bool contains(const std::vector<Proposition>& props, const Proposition& p) {
  return std::find(props.begin(), props.end(), p) != props.end();
}

void erase_prop(std::vector<Proposition>& props, const Proposition& p) {
  props.erase(std::remove(props.begin(), props.end(), p), props.end());
}

// Facts conflict when they pin the same block to different weights, or one
// denies exactly what the other asserts.
bool conflicts(const Proposition& a, const Proposition& b) {
  if (a.subject != b.subject) return false;
  if (a.object_is_block() || b.object_is_block()) return false;
  if (a.rel == Relation::Eq && b.rel == Relation::Eq)
    return a.grams() != b.grams();
  if (a.rel == Relation::Eq && b.rel == Relation::Neq)
    return a.grams() == b.grams();
  if (a.rel == Relation::Neq && b.rel == Relation::Eq)
    return a.grams() == b.grams();
  return false;
}

}  // namespace

bool CommonGround::tracks(const Proposition& p) const {
  return contains(qbank, p) || contains(ebank, p) || contains(fbank, p);
}

const EvidenceRecord* CommonGround::record_for(const Proposition& p) const {
  for (const auto& rec : ledger)
    if (rec.prop == p) return &rec;
  return nullptr;
}

CommonGround pose(const CommonGround& cg, const Proposition& prop) {
  if (cg.tracks(prop))
    throw AlreadyTracked("proposition '" + format(prop) + "' already tracked");
  CommonGround out = cg;
  out.qbank.push_back(prop);
  out.ledger.push_back({prop, {}});
  return out;
}

CommonGround add_evidence(const CommonGround& cg, const Proposition& prop,
                          const EvidenceSupport& support, double friction_score) {
  if (!contains(cg.qbank, prop) && !contains(cg.ebank, prop))
    throw UnknownProposition("proposition '" + format(prop) +
                             "' is not in QBank or EBank");

  CommonGround out = cg;
  auto rec = std::find_if(out.ledger.begin(), out.ledger.end(),
                          [&](const EvidenceRecord& r) { return r.prop == prop; });
  rec->support.push_back(support);

  if (contains(out.qbank, prop) &&
      rec->accumulated_strength() >= out.thresholds.evidence_min &&
      friction_score <= out.thresholds.friction_low) {
    erase_prop(out.qbank, prop);
    out.ebank.push_back(prop);
  }
  return out;
}

CommonGround promote_to_fact(const CommonGround& cg, const Proposition& prop,
                             double friction_score) {
  if (!contains(cg.ebank, prop))
    throw NotInEvidenceBank("proposition '" + format(prop) +
                            "' is not in EBank");
  if (friction_score > cg.thresholds.friction_zero) return cg;

  for (const Proposition& fact : cg.fbank)
    if (conflicts(fact, prop))
      throw InconsistentFact("'" + format(prop) + "' contradicts accepted '" +
                             format(fact) + "'");

  CommonGround out = cg;
  erase_prop(out.ebank, prop);
  out.fbank.push_back(prop);
  return out;
}

Vec5 fbank_vector(const CommonGround& cg) {
  Vec5 v = kZeroVec;
  for (const Proposition& p : cg.fbank)
    if (p.rel == Relation::Eq && !p.object_is_block())
      v[block_index(p.subject)] = p.grams();
  return v;
}

nlohmann::json common_ground_to_json(const CommonGround& cg) {
  nlohmann::json j;
  auto props_json = [](const std::vector<Proposition>& props) {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& p : props) arr.push_back(format(p));
    return arr;
  };
  j["qbank"] = props_json(cg.qbank);
  j["ebank"] = props_json(cg.ebank);
  j["fbank"] = props_json(cg.fbank);
  j["ledger"] = nlohmann::json::array();
  for (const auto& rec : cg.ledger) {
    nlohmann::json r;
    r["prop"] = format(rec.prop);
    r["strength"] = rec.accumulated_strength();
    r["support"] = nlohmann::json::array();
    for (const auto& s : rec.support) {
      nlohmann::json sj;
      sj["source"] = s.source;
      sj["weight"] = s.weight;
      if (s.vector) sj["vector"] = *s.vector;
      if (s.worlds) sj["worlds"] = *s.worlds;
      r["support"].push_back(sj);
    }
    j["ledger"].push_back(r);
  }
  j["thresholds"] = {{"evidence_min", cg.thresholds.evidence_min},
                     {"friction_low", cg.thresholds.friction_low},
                     {"friction_zero", cg.thresholds.friction_zero}};
  return j;
}

std::string format_bank_table(const CommonGround& cg) {
  std::string out;
  auto section = [&](const char* name, const std::vector<Proposition>& props) {
    out += name;
    out += ":";
    if (props.empty()) out += " (empty)";
    out += "\n";
    for (const auto& p : props) {
      out += "  ";
      out += format(p);
      if (const auto* rec = cg.record_for(p)) {
        char buf[48];
        std::snprintf(buf, sizeof(buf), "  [strength %.2f]",
                      rec->accumulated_strength());
        out += buf;
      }
      out += "\n";
    }
  };
  section("QBank", cg.qbank);
  section("EBank", cg.ebank);
  section("FBank", cg.fbank);
  return out;
}

}  // namespace def
