#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace def {

// Base class for every domain error raised by the library. CLI maps these to
// exit code 1; anything else escaping is a bug.
struct DefError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// --- proposition-dsl ---------------------------------------------------------

// Raised by parse(); carries the half-open byte span of the offending token.
struct ParseError : DefError {
  enum class Kind {
    UnknownBlock,
    UnknownRelation,
    DuplicateBlock,
    NonPositiveWeight,
    EmptyInput,
  };

  ParseError(Kind k, const std::string& msg, std::size_t b, std::size_t e)
      : DefError(msg), kind(k), begin(b), end(e) {}

  Kind kind;
  std::size_t begin;
  std::size_t end;
};

// Block-block atom encoded without a usable belief context.
struct MissingBeliefContext : DefError {
  using DefError::DefError;
};

// --- belief-vec ---------------------------------------------------------------

struct NonPositiveWeight : DefError {
  using DefError::DefError;
};

// --- del-kernel ---------------------------------------------------------------

// No (world, event) pair survives the preconditions: the announcement is
// globally inconsistent with the model.
struct EmptyProduct : DefError {
  using DefError::DefError;
};

struct UnknownAgent : DefError {
  using DefError::DefError;
};

struct EmptyBeliefSet : DefError {
  using DefError::DefError;
};

struct AgentMismatch : DefError {
  using DefError::DefError;
};

// --- common-ground -------------------------------------------------------------

struct AlreadyTracked : DefError {
  using DefError::DefError;
};

struct UnknownProposition : DefError {
  using DefError::DefError;
};

struct NotInEvidenceBank : DefError {
  using DefError::DefError;
};

struct InconsistentFact : DefError {
  using DefError::DefError;
};

// --- equilibrium ----------------------------------------------------------------

struct UnknownIndex : DefError {
  using DefError::DefError;
};

struct ZeroVector : DefError {
  using DefError::DefError;
};

// --- dialogue-io ----------------------------------------------------------------

// Transcript file violates the JSON schema; `pointer` is a JSON-pointer path
// to the offending element.
struct SchemaViolation : DefError {
  SchemaViolation(const std::string& ptr, const std::string& msg)
      : DefError(ptr + ": " + msg), pointer(ptr) {}

  std::string pointer;
};

// A proposition-dsl ParseError raised while ingesting utterance `index`.
struct UtteranceParseError : DefError {
  UtteranceParseError(std::size_t idx, const std::string& msg)
      : DefError("utterance " + std::to_string(idx) + ": " + msg), index(idx) {}

  std::size_t index;
};

struct EmptyTranscript : DefError {
  using DefError::DefError;
};

struct InvalidConfig : DefError {
  using DefError::DefError;
};

// --- eval-harness / linalg -------------------------------------------------------

// Rank-deficient unpenalized system (only reachable with lambda = 0).
struct SingularSystem : DefError {
  using DefError::DefError;
};

}  // namespace def
