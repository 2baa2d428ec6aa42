#pragma once

#include <optional>
#include <vector>

#include "corrdyn/correspondence.hpp"
#include "corrdyn/equilibrium.hpp"

namespace corrdyn {

enum class StabilityClass { Repelling, Attracting, Neutral, Irregular };

const char* stability_name(StabilityClass c) noexcept;

struct PeriodicPoint {
  Complex location;
  int period = 1;
  int multiplicity = 1;
  // forward multiplier along the recovered cycle; empty when a step had a
  // vanishing domain derivative (the point can still classify as repelling
  // through the inverse product) or when the cycle is irregular
  std::optional<Complex> multiplier;
  StabilityClass cls = StabilityClass::Irregular;
};

struct PeriodicReport {
  int period = 1;
  std::vector<PeriodicPoint> points;
  int count_with_multiplicity = 0;
  double nu_distance = -1.0;  // filled by the equidistribution driver
};

// Band half-width around |multiplier| = 1 inside which points are Neutral.
inline constexpr double kClassMargin = 1e-6;

// Fixed points of F with multipliers. Parametrized graphs solve f - g in the
// parameter (requires deg f > deg g); implicit graphs solve Q(x, x) and use
// -Q_x / Q_y. Points are merged by location, multiplicities summed.
std::vector<PeriodicPoint> fixed_points(const Correspondence& F);

// Periodic points of period n: diagonal roots of the n-fold composed graph,
// cycles recovered by matching forward images, multipliers multiplied along
// the cycle. Guard d2^n <= 2000.
PeriodicReport periodic_points(const Correspondence& F, int n);

struct EquidistributionRow {
  int n = 0;
  int repelling_count = 0;  // with multiplicity
  double distance = 1.0;    // repelling measure vs the reference estimate
  double overflow_outside_bbox = 0.0;
};

// For each n <= n_max, forms the repelling-point measure with weights
// multiplicity / d2^n and reports its distance to the reference measure.
// minimal_period_only drops points already periodic at a proper divisor.
std::vector<EquidistributionRow> repelling_equidistribution(const Correspondence& F, int n_max,
                                                            const PointMeasure& reference,
                                                            bool minimal_period_only = false,
                                                            int n_grid = 64);

struct MixedFixedReport {
  PeriodicReport report;  // fixed points of G after n steps of F; count p2 d2^n
  // first-projection slice of the intersection of the n-step graph with the
  // graph of G, weighted 1 / (p1 d2^n)
  std::vector<PeriodicPoint> slice_points;
  double slice_distance = -1.0;
};

// Fixed points of the composite G after F^n; guard p2 d2^n <= 2000. The slice
// view uses the adjoint of G, so its weights carry p1.
MixedFixedReport mixed_fixed_points(const Correspondence& F, const Correspondence& G, int n,
                                    const PointMeasure* reference = nullptr, int n_grid = 64);

}  // namespace corrdyn
