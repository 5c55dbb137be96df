#include "cws/error.hpp"

namespace cws {

const char* errc_name(Errc code) {
  switch (code) {
    case Errc::DuplicateExecution: return "DUPLICATE_EXECUTION";
    case Errc::UnknownExecution: return "UNKNOWN_EXECUTION";
    case Errc::UnknownStrategy: return "UNKNOWN_STRATEGY";
    case Errc::UnknownVersion: return "UNKNOWN_VERSION";
    case Errc::DuplicateTask: return "DUPLICATE_TASK";
    case Errc::UnknownTask: return "UNKNOWN_TASK";
    case Errc::UnknownVertex: return "UNKNOWN_VERTEX";
    case Errc::UnknownAbstractVertex: return "UNKNOWN_ABSTRACT_VERTEX";
    case Errc::VertexInUse: return "VERTEX_IN_USE";
    case Errc::WouldCreateCycle: return "WOULD_CREATE_CYCLE";
    case Errc::BatchAlreadyOpen: return "BATCH_ALREADY_OPEN";
    case Errc::NoBatchOpen: return "NO_BATCH_OPEN";
    case Errc::TaskNotWithdrawable: return "TASK_NOT_WITHDRAWABLE";
    case Errc::IllegalTransition: return "ILLEGAL_TRANSITION";
    case Errc::NodeOffline: return "NODE_OFFLINE";
    case Errc::UnknownNode: return "UNKNOWN_NODE";
    case Errc::NoPendingEvents: return "NO_PENDING_EVENTS";
    case Errc::BadRequest: return "BAD_REQUEST";
    case Errc::InvalidExecutionId: return "INVALID_EXECUTION_ID";
    case Errc::TraceInvalid: return "TRACE_INVALID";
    case Errc::ExecutionFailed: return "EXECUTION_FAILED";
    case Errc::SchedulerUnreachable: return "SCHEDULER_UNREACHABLE";
    case Errc::MissingBaseline: return "MISSING_BASELINE";
  }
  return "UNKNOWN_ERROR";
}

Errc errc_from_name(const std::string& name) {
  static constexpr Errc kAll[] = {
      Errc::DuplicateExecution, Errc::UnknownExecution,
      Errc::UnknownStrategy,    Errc::UnknownVersion,
      Errc::DuplicateTask,      Errc::UnknownTask,
      Errc::UnknownVertex,      Errc::UnknownAbstractVertex,
      Errc::VertexInUse,        Errc::WouldCreateCycle,
      Errc::BatchAlreadyOpen,   Errc::NoBatchOpen,
      Errc::TaskNotWithdrawable, Errc::IllegalTransition,
      Errc::NodeOffline,        Errc::UnknownNode,
      Errc::NoPendingEvents,    Errc::BadRequest,
      Errc::InvalidExecutionId, Errc::TraceInvalid,
      Errc::ExecutionFailed,    Errc::SchedulerUnreachable,
      Errc::MissingBaseline,
  };
  for (Errc code : kAll) {
    if (name == errc_name(code)) return code;
  }
  return Errc::BadRequest;
}

}  // namespace cws
