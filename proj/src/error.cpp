#include "rangesim/error.hpp"

namespace rangesim {

std::string_view to_string(Errc code) noexcept {
  switch (code) {
    case Errc::MalformedDocument: return "MalformedDocument";
    case Errc::MissingSection: return "MissingSection";
    case Errc::UnknownField: return "UnknownField";
    case Errc::InvariantViolation: return "InvariantViolation";
    case Errc::EmptyRecipe: return "EmptyRecipe";
    case Errc::InsufficientGateways: return "InsufficientGateways";
    case Errc::DuplicateId: return "DuplicateId";
    case Errc::UnknownPredicate: return "UnknownPredicate";
    case Errc::UnknownEffect: return "UnknownEffect";
    case Errc::KindEffectMismatch: return "KindEffectMismatch";
    case Errc::UnsupportedInterfaceVersion: return "UnsupportedInterfaceVersion";
    case Errc::UnboundSlot: return "UnboundSlot";
    case Errc::PreconditionViolated: return "PreconditionViolated";
    case Errc::UnknownCapability: return "UnknownCapability";
    case Errc::KindMismatch: return "KindMismatch";
    case Errc::DuplicatePlacement: return "DuplicatePlacement";
    case Errc::UnknownNode: return "UnknownNode";
    case Errc::UnknownEntryNode: return "UnknownEntryNode";
    case Errc::TargetSelectorEmpty: return "TargetSelectorEmpty";
    case Errc::NonContiguousPath: return "NonContiguousPath";
    case Errc::InvalidScenario: return "InvalidScenario";
    case Errc::InvalidStrategy: return "InvalidStrategy";
    case Errc::RoundLimitExceeded: return "RoundLimitExceeded";
    case Errc::EmptyRequirement: return "EmptyRequirement";
    case Errc::GenerationFailed: return "GenerationFailed";
    case Errc::MissingConsumedSlot: return "MissingConsumedSlot";
    case Errc::SlotOwnershipViolation: return "SlotOwnershipViolation";
    case Errc::NoHintsAvailable: return "NoHintsAvailable";
    case Errc::UnknownPathNode: return "UnknownPathNode";
  }
  return "Unknown";
}

}  // namespace rangesim
