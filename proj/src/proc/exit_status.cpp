#include <string>

#include "dd/process.hpp"

namespace dd::proc {

Outcome map_exit_status(const ExitStatus& status) {
  switch (status.kind) {
    case ExitKind::Code:
      if (status.value == 0) return Outcome::Fail;
      if (status.value == 125) return Outcome::Unresolved;
      if (status.value >= 1 && status.value <= 127) return Outcome::Pass;
      return Outcome::Unresolved;
    case ExitKind::Signal:
    case ExitKind::Timeout:
    case ExitKind::NotRun:
      return Outcome::Unresolved;
  }
  return Outcome::Unresolved;
}

std::string describe(const ExitStatus& status) {
  switch (status.kind) {
    case ExitKind::Code: return "exit " + std::to_string(status.value);
    case ExitKind::Signal: return "signal " + std::to_string(status.value);
    case ExitKind::Timeout: return "timeout";
    case ExitKind::NotRun: return "not run";
  }
  return "unknown";
}

}  // namespace dd::proc
