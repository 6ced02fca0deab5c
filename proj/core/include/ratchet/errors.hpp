#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace ratchet {

enum class ErrorKind {
  InvalidArgument,
  InvalidFitness,
  DegenerateFitness,
  ProfileUnbounded,
  EmptySystem,
  BoundaryReached,
  BlowUp,
  TracerExceedsTotal,
  NoContraction,
  HistoryGap,
  NotMonostable,
  NegativeArgument,
  NoRoot,
  LevelNotCrossed,
  NoQualifyingNodes,
  ConfigInvalid,
  IoFailure,
};

std::string_view to_string(ErrorKind kind) noexcept;

/// Every failure raised by the library carries a machine-readable kind.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message);

  [[nodiscard]] ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] void fail(ErrorKind kind, const std::string& message);

inline void require(bool condition, ErrorKind kind, const std::string& message) {
  if (!condition) fail(kind, message);
}

// Literal messages skip the std::string construction on the success path.
inline void require(bool condition, ErrorKind kind, const char* message) {
  if (!condition) fail(kind, message);
}

}  // namespace ratchet
