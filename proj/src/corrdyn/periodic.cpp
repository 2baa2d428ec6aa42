#include "corrdyn/periodic.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>

#include "corrdyn/parallel.hpp"

namespace corrdyn {

namespace {

constexpr double kDerivativeZero = 1e-9;

const char* names[] = {"repelling", "attracting", "neutral", "irregular"};

// Derivative data of a single correspondence step x -> y.
struct StepDeriv {
  double log_forward = 0.0;  // log |dy/dx| along the branch; +-inf allowed
  std::optional<Complex> forward;
  bool irregular = false;  // both directional derivatives vanish
};

StepDeriv step_derivative(const Correspondence& C, Complex x, Complex y) {
  StepDeriv out;
  Complex num, den;  // forward multiplier = num / den
  double num_scale, den_scale;
  if (C.is_parametrized()) {
    const auto& [g, f] = C.parametrized_repr();
    const RootSet ts = solve_roots(g - x);
    Complex t = ts.roots.front().location;
    double best = std::abs(f.eval(t) - y);
    for (const Root& cand : ts.roots) {
      const double d = std::abs(f.eval(cand.location) - y);
      if (d < best) {
        best = d;
        t = cand.location;
      }
    }
    num = f.derivative().eval(t);
    den = g.derivative().eval(t);
    num_scale = f.derivative().eval_magnitude(std::abs(t));
    den_scale = g.derivative().eval_magnitude(std::abs(t));
  } else {
    const BiPoly& q = C.graph();
    num = -q.derivative_x().eval(x, y);
    den = q.derivative_y().eval(x, y);
    const double ax = std::abs(x), ay = std::abs(y);
    auto mag = [&](const BiPoly& b) {
      double acc = 0.0;
      for (int i = 0; i <= b.deg_x(); ++i)
        for (int j = 0; j <= b.deg_y(); ++j)
          acc += std::abs(b.coeff(i, j)) * std::pow(ax, i) * std::pow(ay, j);
      return acc;
    };
    num_scale = mag(q.derivative_x());
    den_scale = mag(q.derivative_y());
  }

  const bool num_zero = std::abs(num) <= kDerivativeZero * num_scale + 1e-280;
  const bool den_zero = std::abs(den) <= kDerivativeZero * den_scale + 1e-280;
  if (num_zero && den_zero) {
    out.irregular = true;
    return out;
  }
  if (den_zero) {
    out.log_forward = std::numeric_limits<double>::infinity();
    return out;  // forward derivative blows up; multiplier undefined but repelling
  }
  out.forward = num / den;
  out.log_forward = num_zero ? -std::numeric_limits<double>::infinity()
                             : std::log(std::abs(num / den));
  return out;
}

StabilityClass classify(double log_mag) {
  if (std::isnan(log_mag)) return StabilityClass::Irregular;
  if (log_mag > std::log1p(kClassMargin)) return StabilityClass::Repelling;
  if (log_mag < std::log1p(-kClassMargin)) return StabilityClass::Attracting;
  return StabilityClass::Neutral;
}

// Finds a forward chain x0 -> x1 -> ... through `steps` closing at x0 and
// accumulates the multiplier. Returns false when no chain closes.
bool recover_cycle(const std::vector<const Correspondence*>& steps, Complex x0,
                   PeriodicPoint& out) {
  const double tol = 1e-6 * (1.0 + std::abs(x0));
  std::vector<Complex> chain{x0};
  bool found = false;

  std::function<bool(std::size_t)> dfs = [&](std::size_t depth) -> bool {
    if (depth == steps.size()) return std::abs(chain.back() - x0) <= tol;
    const RootSet fiber = steps[depth]->images(chain.back());
    for (const Root& r : fiber.roots) {
      chain.push_back(r.location);
      if (dfs(depth + 1)) return true;
      chain.pop_back();
    }
    return false;
  };
  found = dfs(0);
  if (!found) return false;

  double log_mag = 0.0;
  Complex product(1);
  bool product_defined = true;
  for (std::size_t i = 0; i < steps.size(); ++i) {
    const StepDeriv d = step_derivative(*steps[i], chain[i], chain[i + 1]);
    if (d.irregular) {
      out.cls = StabilityClass::Irregular;
      out.multiplier.reset();
      return true;
    }
    log_mag += d.log_forward;
    if (d.forward && product_defined)
      product *= *d.forward;
    else
      product_defined = false;
  }
  out.cls = classify(log_mag);
  if (product_defined)
    out.multiplier = product;
  else
    out.multiplier.reset();
  return true;
}

std::vector<PeriodicPoint> diagonal_points(const Correspondence& graph_corr,
                                           const std::vector<const Correspondence*>& steps,
                                           int period) {
  const UniPoly diag = graph_corr.graph().diagonal();
  if (diag.trimmed(1e-10).is_zero())
    raise(ErrorCode::DiagonalDegenerate, "the diagonal is a component of the graph");
  const RootSet rs = solve_roots(diag);

  std::vector<PeriodicPoint> points(rs.roots.size());
  parallel_for(rs.roots.size(), [&](std::size_t i) {
    PeriodicPoint p;
    p.location = rs.roots[i].location;
    p.period = period;
    p.multiplicity = rs.roots[i].multiplicity;
    if (!recover_cycle(steps, p.location, p)) {
      p.cls = StabilityClass::Irregular;  // no closing chain within tolerance
      p.multiplier.reset();
    }
    points[i] = p;
  });
  return points;
}

}  // namespace

const char* stability_name(StabilityClass c) noexcept { return names[static_cast<int>(c)]; }

std::vector<PeriodicPoint> fixed_points(const Correspondence& F) {
  if (F.is_parametrized()) {
    const auto& [g, f] = F.parametrized_repr();
    if (f.degree() <= g.degree())
      raise(ErrorCode::InvalidArgument,
            "fixed-point counting needs deg f > deg g (growth exponent above 1)");
    const RootSet ts = solve_roots(f - g);
    std::vector<PeriodicPoint> raw;
    for (const Root& t : ts.roots) {
      PeriodicPoint p;
      p.location = g.eval(t.location);
      p.period = 1;
      p.multiplicity = t.multiplicity;
      const StepDeriv d = step_derivative(F, p.location, p.location);
      if (d.irregular) {
        p.cls = StabilityClass::Irregular;
      } else {
        p.cls = classify(d.log_forward);
        p.multiplier = d.forward;
      }
      raw.push_back(p);
    }
    // merge by location; multiplier of the first branch is kept
    double max_mag = 0.0;
    for (const PeriodicPoint& p : raw) max_mag = std::max(max_mag, std::abs(p.location));
    const double radius = merge_radius(max_mag);
    std::vector<PeriodicPoint> merged;
    for (const PeriodicPoint& p : raw) {
      bool absorbed = false;
      for (PeriodicPoint& m : merged)
        if (std::abs(m.location - p.location) <= radius) {
          m.multiplicity += p.multiplicity;
          absorbed = true;
          break;
        }
      if (!absorbed) merged.push_back(p);
    }
    return merged;
  }
  std::vector<const Correspondence*> steps{&F};
  return diagonal_points(F, steps, 1);
}

PeriodicReport periodic_points(const Correspondence& F, int n) {
  if (n < 1) raise(ErrorCode::InvalidArgument, "period must be >= 1");
  if (std::pow(static_cast<double>(F.degrees().d2), n) > 2000.0)
    raise(ErrorCode::GuardExceeded, "d2^n above the degree guard 2000");

  const Correspondence fn = n == 1 ? F : graph_power(F, n);
  std::vector<const Correspondence*> steps(static_cast<std::size_t>(n), &F);
  PeriodicReport report;
  report.period = n;
  report.points = diagonal_points(fn, steps, n);
  for (const PeriodicPoint& p : report.points) report.count_with_multiplicity += p.multiplicity;
  return report;
}

std::vector<EquidistributionRow> repelling_equidistribution(const Correspondence& F, int n_max,
                                                            const PointMeasure& reference,
                                                            bool minimal_period_only, int n_grid) {
  const BBox box = bbox_of(reference);
  std::vector<PeriodicPoint> seen;  // points of all lower periods
  std::vector<EquidistributionRow> rows;
  for (int n = 1; n <= n_max; ++n) {
    const PeriodicReport rep = periodic_points(F, n);
    double d2n = std::pow(static_cast<double>(F.degrees().d2), n);
    std::vector<Atom> atoms;
    int repelling = 0;
    for (const PeriodicPoint& p : rep.points) {
      if (p.cls != StabilityClass::Repelling) continue;
      if (minimal_period_only) {
        bool lower = false;
        for (const PeriodicPoint& q : seen)
          if (n % q.period == 0 && std::abs(q.location - p.location) <=
                                        merge_radius(std::abs(p.location))) {
            lower = true;
            break;
          }
        if (lower) continue;
      }
      atoms.push_back({p.location, p.multiplicity / d2n});
      repelling += p.multiplicity;
    }
    EquidistributionRow row;
    row.n = n;
    row.repelling_count = repelling;
    if (!atoms.empty()) {
      const PointMeasure nu(std::move(atoms));
      row.distance = measure_distance(nu, reference, box, n_grid).total;
      row.overflow_outside_bbox = grid_density(nu, box, 1, 1).overflow;
    }
    rows.push_back(row);
    for (const PeriodicPoint& p : rep.points) seen.push_back(p);
  }
  return rows;
}

MixedFixedReport mixed_fixed_points(const Correspondence& F, const Correspondence& G, int n,
                                    const PointMeasure* reference, int n_grid) {
  if (n < 1) raise(ErrorCode::InvalidArgument, "mixed fixed points need n >= 1");
  const double d2n = std::pow(static_cast<double>(F.degrees().d2), n);
  if (G.degrees().d2 * d2n > 2000.0)
    raise(ErrorCode::GuardExceeded, "p2 d2^n above the degree guard 2000");

  const Correspondence fn = n == 1 ? F : graph_power(F, n);
  const Correspondence h = compose(G, fn);
  std::vector<const Correspondence*> steps(static_cast<std::size_t>(n), &F);
  steps.push_back(&G);

  MixedFixedReport out;
  out.report.period = n;
  out.report.points = diagonal_points(h, steps, n);
  for (const PeriodicPoint& p : out.report.points)
    out.report.count_with_multiplicity += p.multiplicity;

  // slice view: fixed points of adjoint(G) after F^n, weights 1 / (p1 d2^n)
  const Correspondence gbar = G.adjoint();
  const Correspondence hbar = compose(gbar, fn);
  std::vector<const Correspondence*> bar_steps(static_cast<std::size_t>(n), &F);
  bar_steps.push_back(&gbar);
  out.slice_points = diagonal_points(hbar, bar_steps, n);

  if (reference) {
    const double p1 = G.degrees().d1;
    std::vector<Atom> atoms;
    for (const PeriodicPoint& p : out.slice_points)
      atoms.push_back({p.location, p.multiplicity / (p1 * d2n)});
    if (!atoms.empty())
      out.slice_distance =
          measure_distance(PointMeasure(std::move(atoms)), *reference, bbox_of(*reference), n_grid)
              .total;
  }
  return out;
}

}  // namespace corrdyn
