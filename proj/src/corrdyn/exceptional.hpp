#pragma once

#include <vector>

#include "corrdyn/correspondence.hpp"
#include "corrdyn/equilibrium.hpp"

namespace corrdyn {

struct ExceptionalReport {
  std::vector<Complex> e0;  // totally backward-invariant finite set
  bool certified = false;   // closure re-verified: preimages(e) stay inside e0
  std::vector<Complex> orbit_truncation;
};

// Detects the maximal finite set closed under taking full preimage fibers.
// Candidate seeds are the fixed points, the critical values, and their first
// two preimage layers; points whose fibers escape the current set are removed
// until stable. extra_seeds join the candidate pool (the result should not
// depend on generic additions). An empty set is a valid outcome.
ExceptionalReport find_e0(const Correspondence& F, int max_size = 16,
                          const std::vector<Complex>& extra_seeds = {});

// Union of the forward images of e0 through n steps (k = 0 included),
// deduplicated by the merge radius. Guard: at most 1e4 points.
std::vector<Complex> orbit(const Correspondence& F, const std::vector<Complex>& e0, int n);

struct ExceptionalTestResult {
  double distance = 0.0;  // preimage tree of z at order n vs the reference
  double baseline = 0.0;  // same for the control point
  bool flagged = false;   // distance > 3 * baseline
};

// Flags points whose normalized preimage distribution stays away from the
// reference measure. The control point must be generic.
ExceptionalTestResult exceptional_test(const Correspondence& F, Complex z, int n,
                                       const PointMeasure& reference,
                                       Complex control_point = Complex(2.7183, 1.2341),
                                       int n_grid = 64);

}  // namespace corrdyn
