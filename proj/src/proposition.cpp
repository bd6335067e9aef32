#include "def/proposition.hpp"

#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstdlib>

namespace def {

std::string_view relation_symbol(Relation r) {
  switch (r) {
    case Relation::Eq: return "=";
    case Relation::Neq: return "!=";
    case Relation::Lt: return "<";
    case Relation::Gt: return ">";
    case Relation::Le: return "<=";
    case Relation::Ge: return ">=";
  }
  return "?";
}

Relation negate_relation(Relation r) {
  switch (r) {
    case Relation::Eq: return Relation::Neq;
    case Relation::Neq: return Relation::Eq;
    case Relation::Lt: return Relation::Ge;
    case Relation::Ge: return Relation::Lt;
    case Relation::Gt: return Relation::Le;
    case Relation::Le: return Relation::Gt;
  }
  return r;
}

bool Proposition::operator==(const Proposition& other) const {
  if (subject != other.subject || rel != other.rel) return false;
  if (object_is_block() != other.object_is_block()) return false;
  if (object_is_block()) return object_block() == other.object_block();
  return grams() == other.grams();
}

namespace {

struct Cursor {
  const std::string& text;
  std::size_t pos = 0;

  void skip_ws() {
    while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos])))
      ++pos;
  }

  bool done() const { return pos >= text.size(); }
  char peek() const { return text[pos]; }
};

bool is_word_char(char c) {
  return std::isalpha(static_cast<unsigned char>(c)) != 0;
}

bool is_number_char(char c) {
  return std::isdigit(static_cast<unsigned char>(c)) || c == '.' || c == '-' ||
         c == '+';
}

Proposition parse_atom(Cursor& cur) {
  cur.skip_ws();
  std::size_t subj_begin = cur.pos;
  while (!cur.done() && is_word_char(cur.peek())) ++cur.pos;
  std::string subj_tok = cur.text.substr(subj_begin, cur.pos - subj_begin);
  auto subject = block_from_name(subj_tok);
  if (!subject)
    throw ParseError(ParseError::Kind::UnknownBlock,
                     "unknown block '" + subj_tok + "'", subj_begin, cur.pos);

  cur.skip_ws();
  std::size_t op_begin = cur.pos;
  Relation rel;
  auto starts_with = [&](std::string_view op) {
    return cur.text.compare(cur.pos, op.size(), op) == 0;
  };
  if (starts_with("!=")) {
    rel = Relation::Neq;
    cur.pos += 2;
  } else if (starts_with("<=")) {
    rel = Relation::Le;
    cur.pos += 2;
  } else if (starts_with(">=")) {
    rel = Relation::Ge;
    cur.pos += 2;
  } else if (starts_with("=")) {
    rel = Relation::Eq;
    cur.pos += 1;
  } else if (starts_with("<")) {
    rel = Relation::Lt;
    cur.pos += 1;
  } else if (starts_with(">")) {
    rel = Relation::Gt;
    cur.pos += 1;
  } else {
    std::size_t end = cur.pos;
    while (end < cur.text.size() && !std::isspace(static_cast<unsigned char>(cur.text[end])) &&
           cur.text[end] != '&')
      ++end;
    throw ParseError(ParseError::Kind::UnknownRelation,
                     "unknown relation '" + cur.text.substr(op_begin, end - op_begin) + "'",
                     op_begin, end);
  }

  cur.skip_ws();
  std::size_t obj_begin = cur.pos;
  if (!cur.done() && is_word_char(cur.peek())) {
    while (!cur.done() && is_word_char(cur.peek())) ++cur.pos;
    std::string obj_tok = cur.text.substr(obj_begin, cur.pos - obj_begin);
    auto object = block_from_name(obj_tok);
    if (!object)
      throw ParseError(ParseError::Kind::UnknownBlock,
                       "unknown block '" + obj_tok + "'", obj_begin, cur.pos);
    if (*object == *subject)
      throw ParseError(ParseError::Kind::UnknownBlock,
                       "block compared with itself", obj_begin, cur.pos);
    return {*subject, rel, *object};
  }

  while (!cur.done() && is_number_char(cur.peek())) ++cur.pos;
  std::string num_tok = cur.text.substr(obj_begin, cur.pos - obj_begin);
  char* parse_end = nullptr;
  double grams = num_tok.empty() ? NAN : std::strtod(num_tok.c_str(), &parse_end);
  if (num_tok.empty() || parse_end != num_tok.c_str() + num_tok.size() ||
      !std::isfinite(grams))
    throw ParseError(ParseError::Kind::UnknownRelation,
                     "expected grams value or block after relation", obj_begin,
                     cur.pos);
  if (grams <= 0.0)
    throw ParseError(ParseError::Kind::NonPositiveWeight,
                     "weight must be positive, got '" + num_tok + "'", obj_begin,
                     cur.pos);
  return {*subject, rel, grams};
}

}  // namespace

AssertionSet parse(const std::string& text) {
  Cursor cur{text};
  cur.skip_ws();
  if (cur.done())
    throw ParseError(ParseError::Kind::EmptyInput, "empty assertion", 0,
                     text.size());

  AssertionSet set;
  bool seen[kNumBlocks] = {};
  while (true) {
    std::size_t atom_begin = cur.pos;
    Proposition p = parse_atom(cur);
    int idx = block_index(p.subject);
    if (seen[idx])
      throw ParseError(ParseError::Kind::DuplicateBlock,
                       "duplicate atom for block '" + std::string(block_name(p.subject)) + "'",
                       atom_begin, cur.pos);
    seen[idx] = true;
    set.atoms.push_back(p);

    cur.skip_ws();
    if (cur.done()) break;
    if (cur.peek() != '&')
      throw ParseError(ParseError::Kind::UnknownRelation,
                       "expected '&' between atoms", cur.pos, cur.pos + 1);
    ++cur.pos;
    cur.skip_ws();
    if (cur.done())
      throw ParseError(ParseError::Kind::EmptyInput,
                       "dangling '&' at end of input", cur.pos - 1, cur.pos);
  }
  return set;
}

namespace {

// Integral grams print bare ("10"); anything else round-trips via %.17g.
std::string format_grams(double w) {
  char buf[64];
  if (w == std::floor(w) && std::fabs(w) < 1e15) {
    std::snprintf(buf, sizeof(buf), "%.0f", w);
  } else {
    std::snprintf(buf, sizeof(buf), "%.17g", w);
  }
  return buf;
}

}  // namespace

std::string format(const Proposition& p) {
  std::string out{block_name(p.subject)};
  out += relation_symbol(p.rel);
  if (p.object_is_block())
    out += block_name(p.object_block());
  else
    out += format_grams(p.grams());
  return out;
}

std::string format(const AssertionSet& a) {
  std::string out;
  for (std::size_t i = 0; i < a.atoms.size(); ++i) {
    if (i) out += " & ";
    out += format(a.atoms[i]);
  }
  return out;
}

}  // namespace def
