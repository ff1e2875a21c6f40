#ifndef POLARLAM_VERIFY_HPP
#define POLARLAM_VERIFY_HPP

#include <string>
#include <vector>

#include "polarlam/dataset.hpp"

// Reproduction checks of the bundled reference values: material polar
// parameters, panel feasibility, recomputed residuals of the recovered
// stacks, and the meso-scale blending of the published families.

namespace polarlam::verify {

struct Check {
  std::string name;
  std::string ref;  // dataset file / field the expected value comes from
  double computed = 0;
  double expected = 0;
  double tolerance = 0;
  bool pass = false;
  std::string note;
};

// Polar parameters recomputed from the engineering constants must match
// the bundled polar_Q values: moduli to 0.1 % relative, angles to 0.01 deg.
std::vector<Check> check_material();

// Every panel of the bundled design satisfies g_feas <= 0 and the maximum
// over panels is -0.2893 within +-0.001.
std::vector<Check> check_feasibility();

// Recomputed residuals of the stand-alone stacks stay within a factor of 5
// of the recorded values, or below 1e-4 absolute.
std::vector<Check> check_standalone_residuals(
    TensorNormKind norm = TensorNormKind::frobenius);

struct BlendedSummary {
  std::vector<Check> checks;       // per-group totals + per-panel match fraction
  int panels_total = 0;
  int panels_matching = 0;         // within max(0.01, 10% of recorded)
};

// Recomputed residuals of the four blended skin groups against the
// recorded per-panel values and group totals.
BlendedSummary check_blended_residuals(TensorNormKind norm = TensorNormKind::frobenius);

// Every (panel, base) pair of the blended groups passes the scheme-mode
// blending decision; group independent-variable counts match the records.
std::vector<Check> check_meso_blending();

std::vector<Check> check_dataset_integrity();

struct Report {
  std::vector<Check> checks;
  bool all_pass = true;
  void add(std::vector<Check> more);
};

// selector: all, integrity, material, feasibility, standalone, blended, meso
Report run(const std::string& selector);

}  // namespace polarlam::verify

#endif
