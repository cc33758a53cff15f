#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace rangesim {

// Every failure raised by the library carries one of these codes. The names
// double as the machine-readable prefix of Error::what().
enum class Errc {
  // scenario-model
  MalformedDocument,
  MissingSection,
  UnknownField,
  InvariantViolation,
  EmptyRecipe,
  InsufficientGateways,
  // capability-registry
  DuplicateId,
  UnknownPredicate,
  UnknownEffect,
  KindEffectMismatch,
  UnsupportedInterfaceVersion,
  UnboundSlot,
  PreconditionViolated,
  UnknownCapability,
  KindMismatch,
  DuplicatePlacement,
  UnknownNode,
  // attack-graph
  UnknownEntryNode,
  TargetSelectorEmpty,
  NonContiguousPath,
  // sim-engine
  InvalidScenario,
  InvalidStrategy,
  RoundLimitExceeded,
  // scenario-forge
  EmptyRequirement,
  GenerationFailed,
  MissingConsumedSlot,
  SlotOwnershipViolation,
  NoHintsAvailable,
  // cli-io
  UnknownPathNode,
};

std::string_view to_string(Errc code) noexcept;

class Error : public std::runtime_error {
 public:
  Error(Errc code, std::string detail)
      : std::runtime_error(std::string(to_string(code)) + ": " + detail),
        code_(code),
        detail_(std::move(detail)) {}

  Errc code() const noexcept { return code_; }
  const std::string& detail() const noexcept { return detail_; }

 private:
  Errc code_;
  std::string detail_;
};

}  // namespace rangesim
