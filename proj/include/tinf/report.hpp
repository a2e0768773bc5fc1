#pragma once

#include <string>
#include <vector>

#include <json.hpp>

namespace tinf {

/// Outcome of one sampled identity check.
struct CheckReport {
  std::string name;
  double max_deviation = 0.0;
  double tolerance = 0.0;
  int samples = 0;
  /// false for checks that must fail (the identity is expected not to hold).
  bool expect_hold = true;

  bool holds() const noexcept { return max_deviation <= tolerance; }
  /// The check came out the way it should.
  bool ok() const noexcept { return holds() == expect_hold; }

  /// Folds another deviation into the running maximum. NaN counts as infinite.
  void record(double deviation);

  nlohmann::json to_json() const;
};

nlohmann::json to_json(const std::vector<CheckReport>& reports);
bool all_ok(const std::vector<CheckReport>& reports);

}  // namespace tinf
