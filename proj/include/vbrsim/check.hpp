#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "vbrsim/report.hpp"

namespace vbrsim {

enum class Comparator { Within, AtLeast, AtMost, Monotone };
enum class Direction { NonDecreasing, NonIncreasing, Increasing, Decreasing };

// One line of an expectations file:
//   <path> Within <lo> <hi> [tol=<t>]
//   <path> Within <value> tol=<t>
//   <path> AtLeast <value> [tol=<t>]
//   <path> AtMost <value> [tol=<t>]
//   <path> Monotone nondecreasing|nonincreasing|increasing|decreasing [tol=<t>]
// Paths are dotted JSON keys with `[N]`, `[*]` or `[key=value]` selectors.
struct ExpectedOutcome {
  std::string path;
  Comparator comparator = Comparator::Within;
  std::vector<double> values;
  Direction direction = Direction::NonDecreasing;
  double tolerance = 0.0;
  int line = 0;
};

class CheckError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

std::vector<ExpectedOutcome> parse_expectations(const std::string& text);

// Values matched by `path`, each tagged with its concrete location. Throws
// CheckError when the path matches nothing.
struct PathMatch {
  std::string where;
  Json value;
};
std::vector<PathMatch> resolve_path(const Json& doc, const std::string& path);

struct CheckResult {
  bool pass = false;
  std::string message;
};

CheckResult evaluate(const Json& doc, const ExpectedOutcome& expectation);

struct CheckSummary {
  std::vector<CheckResult> results;
  bool all_passed() const;
};

CheckSummary check(const Json& doc, const std::vector<ExpectedOutcome>& expectations);

}  // namespace vbrsim
