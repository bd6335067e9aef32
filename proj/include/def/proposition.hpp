#pragma once

#include <string>
#include <variant>
#include <vector>

#include "def/blocks.hpp"
#include "def/errors.hpp"

namespace def {

enum class Relation { Eq, Neq, Lt, Gt, Le, Ge };

std::string_view relation_symbol(Relation r);

// Logical negation: Eq<->Neq, Lt<->Ge, Gt<->Le. Used to ingest "deny"
// utterances as asserts of the negated atom.
Relation negate_relation(Relation r);

// One parsed assertion atom: block-relation-grams or block-relation-block.
// Polarity is carried by the relation (Neq is the negative of Eq).
struct Proposition {
  Block subject{};
  Relation rel{};
  std::variant<double, Block> object;

  bool object_is_block() const { return std::holds_alternative<Block>(object); }
  double grams() const { return std::get<double>(object); }
  Block object_block() const { return std::get<Block>(object); }

  // Positive, specific block-weight claim (Eq with a grams object): the only
  // shape that triggers Saying-is-Believing direct assignment.
  bool is_positive_specific() const {
    return rel == Relation::Eq && !object_is_block();
  }

  Proposition negated() const { return {subject, negate_relation(rel), object}; }

  bool operator==(const Proposition& other) const;
};

// A conjunction of atoms, at most one per subject block.
struct AssertionSet {
  std::vector<Proposition> atoms;

  bool operator==(const AssertionSet& other) const {
    return atoms == other.atoms;
  }
};

// Grammar: '&'-separated atoms of the form `<block> <op> (<grams>|<block>)`
// with op in { =, !=, <, >, <=, >= }. Whitespace-insensitive; block names
// case-insensitive. Throws ParseError with the offending token span.
AssertionSet parse(const std::string& text);

std::string format(const Proposition& p);
std::string format(const AssertionSet& a);

}  // namespace def
