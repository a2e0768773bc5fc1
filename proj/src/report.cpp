#include "tinf/report.hpp"

#include <cmath>
#include <limits>

namespace tinf {

void CheckReport::record(double deviation) {
  if (std::isnan(deviation)) deviation = std::numeric_limits<double>::infinity();
  if (deviation > max_deviation) max_deviation = deviation;
}

nlohmann::json CheckReport::to_json() const {
  nlohmann::json j;
  j["name"] = name;
  // JSON has no infinity.
  if (std::isfinite(max_deviation)) {
    j["max_deviation"] = max_deviation;
  } else {
    j["max_deviation"] = nullptr;
  }
  j["tolerance"] = tolerance;
  j["samples"] = samples;
  j["expect"] = expect_hold ? "hold" : "fail";
  j["holds"] = holds();
  j["passed"] = ok();
  return j;
}

nlohmann::json to_json(const std::vector<CheckReport>& reports) {
  nlohmann::json arr = nlohmann::json::array();
  for (const CheckReport& r : reports) arr.push_back(r.to_json());
  return arr;
}

bool all_ok(const std::vector<CheckReport>& reports) {
  for (const CheckReport& r : reports)
    if (!r.ok()) return false;
  return true;
}

}  // namespace tinf
