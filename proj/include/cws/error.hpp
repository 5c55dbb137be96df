#pragma once

#include <stdexcept>
#include <string>

namespace cws {

enum class Errc {
  DuplicateExecution,
  UnknownExecution,
  UnknownStrategy,
  UnknownVersion,
  DuplicateTask,
  UnknownTask,
  UnknownVertex,
  UnknownAbstractVertex,
  VertexInUse,
  WouldCreateCycle,
  BatchAlreadyOpen,
  NoBatchOpen,
  TaskNotWithdrawable,
  IllegalTransition,
  NodeOffline,
  UnknownNode,
  NoPendingEvents,
  BadRequest,
  InvalidExecutionId,
  TraceInvalid,
  ExecutionFailed,
  SchedulerUnreachable,
  MissingBaseline,
};

/// Machine-readable code string, e.g. "DUPLICATE_EXECUTION".
const char* errc_name(Errc code);

/// Inverse of errc_name. Unrecognized names map to Errc::BadRequest.
Errc errc_from_name(const std::string& name);

class Error : public std::runtime_error {
 public:
  Error(Errc code, std::string message)
      : std::runtime_error(std::move(message)), code_(code) {}

  Errc code() const { return code_; }
  const char* code_name() const { return errc_name(code_); }

 private:
  Errc code_;
};

}  // namespace cws
