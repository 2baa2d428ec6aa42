#pragma once

#include <vector>

#include "corrdyn/correspondence.hpp"

namespace corrdyn {

// Continues a single inverse branch along a path: for every path point the
// preimage nearest to the previous value is chosen, with adaptive bisection
// of path steps that move farther than half the fiber root gap. w0 must lie
// in the preimage fiber of path.front(). Returns the branch values at the
// original path points. Throws BranchCollision when two candidate roots come
// within the collision radius or the refinement budget (2^14 evaluations) is
// exhausted.
std::vector<Complex> continue_preimage(const Correspondence& F, const std::vector<Complex>& path,
                                       Complex w0);

struct BranchChain {
  Complex base;                         // continued center preimage
  int order = 0;                        // m
  std::vector<Complex> boundary_images; // continued images of the circle samples
  bool alive = true;
  double diameter = 0.0;                // max pairwise distance of boundary images
};

struct DiameterRow {
  int m = 0;
  long long count_alive = 0;
  double median_diameter = 0.0;
  double q10 = 0.0;
  double q90 = 0.0;
};

// Continues all inverse branches of the circle |w - z| = r through m_max
// orders. Each alive order-(m-1) branch spawns one child per preimage of its
// center; children whose boundary loop cannot be continued single-valuedly
// (collision or monodromy) die and stay dead. Requires the base point to be
// farther than r from every critical value (BadBasePoint otherwise).
std::vector<DiameterRow> branch_diameter_stats(const Correspondence& F, Complex z, double r,
                                               int m_max, int n_boundary);

// Least-squares slope of log median_diameter against m over rows with a
// positive diameter, skipping the first `skip` rows.
double diameter_slope(const std::vector<DiameterRow>& rows, int skip = 1);

}  // namespace corrdyn
