#include "ratchet/errors.hpp"

namespace ratchet {

std::string_view to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::InvalidArgument: return "InvalidArgument";
    case ErrorKind::InvalidFitness: return "InvalidFitness";
    case ErrorKind::DegenerateFitness: return "DegenerateFitness";
    case ErrorKind::ProfileUnbounded: return "ProfileUnbounded";
    case ErrorKind::EmptySystem: return "EmptySystem";
    case ErrorKind::BoundaryReached: return "BoundaryReached";
    case ErrorKind::BlowUp: return "BlowUp";
    case ErrorKind::TracerExceedsTotal: return "TracerExceedsTotal";
    case ErrorKind::NoContraction: return "NoContraction";
    case ErrorKind::HistoryGap: return "HistoryGap";
    case ErrorKind::NotMonostable: return "NotMonostable";
    case ErrorKind::NegativeArgument: return "NegativeArgument";
    case ErrorKind::NoRoot: return "NoRoot";
    case ErrorKind::LevelNotCrossed: return "LevelNotCrossed";
    case ErrorKind::NoQualifyingNodes: return "NoQualifyingNodes";
    case ErrorKind::ConfigInvalid: return "ConfigInvalid";
    case ErrorKind::IoFailure: return "IoFailure";
  }
  return "Unknown";
}

Error::Error(ErrorKind kind, const std::string& message)
    : std::runtime_error(std::string(to_string(kind)) + ": " + message), kind_(kind) {}

void fail(ErrorKind kind, const std::string& message) { throw Error(kind, message); }

}  // namespace ratchet
