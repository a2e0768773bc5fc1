#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "config.hpp"
#include "tinf/report.hpp"

namespace tinf::cli {

struct VerifyResult {
  std::vector<CheckReport> checks;
  std::vector<std::string> notes;
};

/// Every identity check applicable to the configured object, in a fixed
/// order. Deterministic given the config (seed included).
VerifyResult verify_suite(const RunConfig& cfg);

/// Closed-form geodesic checks on catalog sprays; independent of the config.
std::vector<CheckReport> closed_form_suite();

/// Great circle through (1, 0) with unit initial velocity (sin a, cos a), in
/// the stereographic chart.
std::vector<double> great_circle(double t, double tilt);

/// |error(dt)| / |error(dt / 2)| for the sphere geodesic against the great
/// circle at time t1.
double rk4_error_ratio(double dt, double t1 = 1.0);

}  // namespace tinf::cli
