#include "gridham/check.hpp"

#include <sstream>

namespace gridham {

namespace {
CheckLevel g_level = CheckLevel::Lemma;
}

CheckLevel check_level() { return g_level; }
void set_check_level(CheckLevel lvl) { g_level = lvl; }

CheckCounters& check_counters() {
  static CheckCounters counters;
  return counters;
}

namespace detail {
void invariant_failed(const char* expr, const char* file, int line) {
  std::ostringstream msg;
  msg << "invariant violated: " << expr << " at " << file << ':' << line;
  throw InvariantViolation(msg.str());
}
}  // namespace detail

}  // namespace gridham
