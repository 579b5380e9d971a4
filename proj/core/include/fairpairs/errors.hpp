// Copyright the FairPairs contributors. Licensed under the terms of the Apache 2.0 license. See LICENSE in the project root.
#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace fairpairs {

// Base class for every error thrown by this library. Catching fairpairs::Error
// is sufficient to contain anything the library can raise.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what_arg) : std::runtime_error(what_arg) {}
};

// Two candidates share the same relevance, so no strict total order exists.
struct TiedRelevanceError : Error { using Error::Error; };

// A flip plan's swap flags do not match the pair assignment it is applied to.
struct PlanSizeMismatchError : Error { using Error::Error; };

// A rank lies outside the 1..n range of the list it refers to.
struct RankOutOfRangeError : Error { using Error::Error; };

// A click-model parameterization violates the model-family contract.
struct InvalidSpecError : Error { using Error::Error; };

// A document shown to the simulated user has no relevance assigned.
struct MissingRelevanceError : Error { using Error::Error; };

// A score function was called with its two relevance arguments out of order.
struct OrderViolationError : Error { using Error::Error; };

// A statistic was requested for which no observations exist.
struct NoDataError : Error { using Error::Error; };

// Confidence levels must lie strictly between 0 and 1.
struct BadConfidenceError : Error { using Error::Error; };

// Every preference gap is zero, so no separation margin can be derived.
struct ZeroGapError : Error { using Error::Error; };

// A logged impression contradicts itself (presented order does not follow
// from the original order and the flip plan).
struct InconsistentRecordError : Error { using Error::Error; };

// Counted votes mention a document absent from the candidate set.
struct MissingDocumentError : Error { using Error::Error; };

// The exhaustive learner refuses candidate sets too large to enumerate.
struct TooManyDocumentsError : Error { using Error::Error; };

// A serialized artifact (log line, CSV row) could not be decoded. Carries the
// 1-based line number at which decoding failed.
class ParseError : public Error {
 public:
  ParseError(std::size_t line, const std::string& what_arg)
      : Error("line " + std::to_string(line) + ": " + what_arg), line_(line) {}
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

// A serialized artifact declares a schema version this build does not read.
struct VersionError : Error { using Error::Error; };

// An experiment configuration is malformed (unknown key, bad value, ...).
struct ConfigError : Error { using Error::Error; };

// A probe document's relevance is not strictly below every regular document.
struct ProbeRelevanceError : Error { using Error::Error; };

// A file could not be opened, read, or written.
struct IoError : Error { using Error::Error; };

}  // namespace fairpairs
