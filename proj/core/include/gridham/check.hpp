#pragma once

#include <stdexcept>
#include <string>

namespace gridham {

// Internal invariant checking. Lemma-level checks guard the reduction engine's
// structural claims; heavy checks add O(|F|) cross-validation after each move.
// Tests run Heavy, regular use runs Lemma, benchmarks run Off.
enum class CheckLevel : int { Off = 0, Lemma = 1, Heavy = 2 };

CheckLevel check_level();
void set_check_level(CheckLevel lvl);

struct InvariantViolation : std::logic_error {
  explicit InvariantViolation(const std::string& what) : std::logic_error(what) {}
};

namespace detail {
[[noreturn]] void invariant_failed(const char* expr, const char* file, int line);
}

// Counters for the acceptance report: how many reduction invocations ran,
// how many lemma checks they passed, and how many bridges they laid down.
struct CheckCounters {
  unsigned long long reduce_calls = 0;
  unsigned long long lemma_checks = 0;
  unsigned long long bridges_created = 0;
  unsigned long long substitutions = 0;  // half-bridge replacements next to a bridge end
  unsigned long long triples = 0;        // three-cycle squares handled via the across rule
};
CheckCounters& check_counters();

}  // namespace gridham

#define GH_CHECK(expr)                                                  \
  do {                                                                  \
    if (!(expr)) ::gridham::detail::invariant_failed(#expr, __FILE__, __LINE__); \
  } while (0)

#define GH_LEMMA_CHECK(expr)                                            \
  do {                                                                  \
    if (::gridham::check_level() >= ::gridham::CheckLevel::Lemma) {     \
      if (!(expr)) ::gridham::detail::invariant_failed(#expr, __FILE__, __LINE__); \
      ++::gridham::check_counters().lemma_checks;                       \
    }                                                                   \
  } while (0)

#define GH_HEAVY_CHECK(expr)                                            \
  do {                                                                  \
    if (::gridham::check_level() >= ::gridham::CheckLevel::Heavy) {     \
      if (!(expr)) ::gridham::detail::invariant_failed(#expr, __FILE__, __LINE__); \
    }                                                                   \
  } while (0)
