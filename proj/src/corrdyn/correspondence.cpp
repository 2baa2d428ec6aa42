#include "corrdyn/correspondence.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

namespace corrdyn {

namespace {

constexpr double kDegenerateLeading = 1e-9;

// Merges nearby fiber atoms, summing multiplicities; centers are
// multiplicity-weighted means.
RootSet merge_fiber(std::vector<Root> atoms) {
  double max_mag = 0.0;
  for (const Root& r : atoms) max_mag = std::max(max_mag, std::abs(r.location));
  const double radius = merge_radius(max_mag);
  std::sort(atoms.begin(), atoms.end(), [](const Root& a, const Root& b) {
    if (a.location.real() != b.location.real()) return a.location.real() < b.location.real();
    return a.location.imag() < b.location.imag();
  });
  std::vector<Root> merged;
  for (const Root& r : atoms) {
    bool absorbed = false;
    for (Root& m : merged) {
      if (std::abs(m.location - r.location) <= radius) {
        const double wa = m.multiplicity, wb = r.multiplicity;
        m.location = (m.location * wa + r.location * wb) / (wa + wb);
        m.multiplicity += r.multiplicity;
        absorbed = true;
        break;
      }
    }
    if (!absorbed) merged.push_back(r);
  }
  RootSet rs;
  rs.roots = std::move(merged);
  for (const Root& r : rs.roots) rs.total += r.multiplicity;
  return rs;
}

BiPoly normalize_graph(const BiPoly& q) {
  const int top = q.deg_x();
  Complex lead(0);
  double best = -1.0;
  for (int j = 0; j <= q.deg_y(); ++j) {
    const double mag = std::abs(q.coeff(top, j));
    if (mag > best) {
      best = mag;
      lead = q.coeff(top, j);
    }
  }
  if (best <= 0.0) return q;
  return q.scaled(Complex(1) / lead);
}

// Solves a fiber polynomial after guarding against a degenerate
// specialization: the leading coefficient collapses exactly when the leading
// polynomial of the graph vanishes at the specialization point, so the test
// is relative to that polynomial's own magnitude there.
RootSet solve_fiber(const UniPoly& fiber, const UniPoly& leading, int nominal_degree, Complex at,
                    const char* side) {
  const double lead_mag = leading.eval_magnitude(std::abs(at));
  if (fiber.is_zero() || std::abs(leading.eval(at)) <= kDegenerateLeading * lead_mag) {
    std::ostringstream os;
    os << "fiber over (" << at.real() << ", " << at.imag() << ") degenerates in " << side;
    raise(ErrorCode::DegenerateFiber, os.str());
  }
  RootSet rs = solve_roots(fiber, 1e-7, 0.0);
  if (rs.total != nominal_degree) {
    std::ostringstream os;
    os << "fiber over (" << at.real() << ", " << at.imag() << ") lost multiplicity: " << rs.total
       << " of " << nominal_degree;
    raise(ErrorCode::DegenerateFiber, os.str());
  }
  return rs;
}

UniPoly leading_in_x(const BiPoly& q) {  // coefficient of x^deg_x as a polynomial in y
  std::vector<Complex> c;
  for (int j = 0; j <= q.deg_y(); ++j) c.push_back(q.coeff(q.deg_x(), j));
  return UniPoly(std::move(c));
}

UniPoly leading_in_y(const BiPoly& q) {  // coefficient of y^deg_y as a polynomial in x
  std::vector<Complex> c;
  for (int i = 0; i <= q.deg_x(); ++i) c.push_back(q.coeff(i, q.deg_y()));
  return UniPoly(std::move(c));
}

}  // namespace

double merge_radius(double max_magnitude) { return 1e-7 * (1.0 + max_magnitude); }

Correspondence Correspondence::parametrized(UniPoly g, UniPoly f, std::string name) {
  if (g.degree() < 1 || f.degree() < 1)
    raise(ErrorCode::InvalidArgument, "parametrized correspondence needs deg g >= 1 and deg f >= 1");
  Correspondence c;
  c.degrees_ = {g.degree(), f.degree()};
  c.repr_ = Parametrized{std::move(g), std::move(f)};
  c.name_ = std::move(name);
  return c;
}

Correspondence Correspondence::implicit_graph(BiPoly q, std::string name) {
  if (q.deg_x() < 1 || q.deg_y() < 1)
    raise(ErrorCode::InvalidArgument, "implicit graph needs positive degree in both variables");

  // Empirical properness: on circles of growing radius, every fiber must keep
  // its full degree and stay far from the origin. A branch running to
  // infinity over a finite point shows up as a small root in the mirrored
  // fiber.
  const double radii[2] = {1e4, 1e8};
  for (int dir = 0; dir < 2; ++dir) {
    const int nominal = dir == 0 ? q.deg_y() : q.deg_x();
    const UniPoly leading = dir == 0 ? leading_in_y(q) : leading_in_x(q);
    for (double R : radii) {
      for (int a = 0; a < 4; ++a) {
        const double th = 2.0 * std::numbers::pi * a / 4.0 + 0.377;
        const Complex w = R * Complex(std::cos(th), std::sin(th));
        const UniPoly fiber = dir == 0 ? q.specialize_x(w) : q.specialize_y(w);
        if (fiber.is_zero() ||
            std::abs(leading.eval(w)) <= kDegenerateLeading * leading.eval_magnitude(R))
          raise(ErrorCode::ImproperGraph, "fiber degree collapses over a large point");
        const RootSet rs = solve_roots(fiber, 1e-7, 0.0);
        if (rs.total != nominal)
          raise(ErrorCode::ImproperGraph, "fiber loses mass over a large point");
        for (const Root& r : rs.roots)
          if (R >= 1e8 && std::abs(r.location) < 2.0)
            raise(ErrorCode::ImproperGraph,
                  "graph has a branch running to infinity over a bounded point");
      }
    }
  }

  return implicit_unchecked(std::move(q), std::move(name));
}

Correspondence Correspondence::implicit_unchecked(BiPoly q, std::string name) {
  Correspondence c;
  c.degrees_ = {q.deg_y(), q.deg_x()};
  c.graph_cache_ = std::make_shared<const BiPoly>(q);
  c.repr_ = std::move(q);
  c.name_ = std::move(name);
  return c;
}

const BiPoly& Correspondence::graph() const {
  if (!graph_cache_) {
    const auto& [g, f] = parametrized_repr();
    // A(x, t) = g(t) - x, B(t, y) = f(t) - y
    BiPoly A(1, g.degree());
    for (int k = 0; k <= g.degree(); ++k) A.at(0, k) = g.coeff(k);
    A.at(1, 0) -= Complex(1);
    BiPoly B(f.degree(), 1);
    for (int k = 0; k <= f.degree(); ++k) B.at(k, 0) = f.coeff(k);
    B.at(0, 1) -= Complex(1);
    graph_cache_ = std::make_shared<const BiPoly>(normalize_graph(resultant_elim(A, B).value));
  }
  return *graph_cache_;
}

RootSet Correspondence::preimages(Complex z) const {
  if (is_parametrized()) {
    const auto& [g, f] = parametrized_repr();
    const RootSet ts = solve_roots(f - z);
    std::vector<Root> atoms;
    for (const Root& t : ts.roots) atoms.push_back({g.eval(t.location), t.multiplicity});
    return merge_fiber(std::move(atoms));
  }
  const BiPoly& q = std::get<BiPoly>(repr_);
  return solve_fiber(q.specialize_y(z), leading_in_x(q), degrees_.d2, z, "x");
}

RootSet Correspondence::images(Complex x) const {
  if (is_parametrized()) {
    const auto& [g, f] = parametrized_repr();
    const RootSet ts = solve_roots(g - x);
    std::vector<Root> atoms;
    for (const Root& t : ts.roots) atoms.push_back({f.eval(t.location), t.multiplicity});
    return merge_fiber(std::move(atoms));
  }
  const BiPoly& q = std::get<BiPoly>(repr_);
  return solve_fiber(q.specialize_x(x), leading_in_y(q), degrees_.d1, x, "y");
}

Correspondence Correspondence::adjoint() const {
  if (is_parametrized()) {
    const auto& [g, f] = parametrized_repr();
    return parametrized(f, g, name_.empty() ? "" : name_ + "_adj");
  }
  return implicit_unchecked(std::get<BiPoly>(repr_).swapped_vars(),
                            name_.empty() ? "" : name_ + "_adj");
}

LojasiewiczEstimate Correspondence::lojasiewicz() const {
  if (is_parametrized()) {
    const auto& [g, f] = parametrized_repr();
    return {static_cast<double>(f.degree()) / g.degree(), true, 0.0};
  }
  const BiPoly& q = std::get<BiPoly>(repr_);
  // min |y| over curve points with |x| = R, ladder of R, log-log slope
  std::vector<double> logR, logm;
  for (int k = 0; k < 8; ++k) {
    const double R = std::pow(10.0, 2.0 + 3.0 * k / 7.0);
    double min_mag = std::numeric_limits<double>::infinity();
    for (int a = 0; a < 6; ++a) {
      const double th = 2.0 * std::numbers::pi * a / 6.0 + 0.31;
      const UniPoly fiber = q.specialize_x(R * Complex(std::cos(th), std::sin(th)));
      for (const Root& r : solve_roots(fiber, 1e-7, 0.0).roots)
        min_mag = std::min(min_mag, std::abs(r.location));
    }
    if (!std::isfinite(min_mag) || min_mag <= 0.0)
      raise(ErrorCode::FitUnstable, "no finite fiber magnitude on the sampling ladder");
    logR.push_back(std::log(R));
    logm.push_back(std::log(min_mag));
  }
  const std::size_t n = logR.size();
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < n; ++i) {
    sx += logR[i];
    sy += logm[i];
    sxx += logR[i] * logR[i];
    sxy += logR[i] * logm[i];
  }
  const double denom = n * sxx - sx * sx;
  const double slope = (n * sxy - sx * sy) / denom;
  const double intercept = (sy - slope * sx) / n;
  double ss = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const double d = logm[i] - (intercept + slope * logR[i]);
    ss += d * d;
  }
  const double residual = std::sqrt(ss / n);
  if (residual > 0.2) raise(ErrorCode::FitUnstable, "log-log growth fit residual above 0.2");
  return {slope, false, residual};
}

RootSet Correspondence::critical_values() const {
  std::vector<Root> atoms;
  auto push_all = [&atoms](const RootSet& rs) {
    for (const Root& r : rs.roots) atoms.push_back({r.location, 1});
  };

  if (is_parametrized()) {
    const auto& [g, f] = parametrized_repr();
    if (f.degree() >= 2)
      for (const Root& c : solve_roots(f.derivative()).roots) atoms.push_back({f.eval(c.location), 1});
    if (g.degree() >= 2)
      for (const Root& c : solve_roots(g.derivative()).roots) push_all(images(g.eval(c.location)));
  } else {
    const BiPoly& q = std::get<BiPoly>(repr_);
    if (degrees_.d2 >= 2) {
      const UniPoly disc = resultant_in_x(q, q.derivative_x());
      if (disc.degree() >= 1) push_all(solve_roots(disc));
    }
    if (degrees_.d1 >= 2) {
      const BiPoly qs = q.swapped_vars();
      const UniPoly disc = resultant_in_x(qs, qs.derivative_x());
      if (disc.degree() >= 1)
        for (const Root& xc : solve_roots(disc).roots) push_all(images(xc.location));
    }
  }

  RootSet merged = merge_fiber(std::move(atoms));
  for (Root& r : merged.roots) r.multiplicity = 1;
  merged.total = static_cast<int>(merged.roots.size());
  return merged;
}

Complex Correspondence::perron_frobenius(const std::function<Complex(Complex)>& phi,
                                         Complex z) const {
  const RootSet fiber = preimages(z);
  Complex acc(0);
  for (const Root& r : fiber.roots) acc += phi(r.location) * static_cast<double>(r.multiplicity);
  return acc / static_cast<double>(degrees_.d2);
}

double Correspondence::escape_radius() const {
  const BiPoly& q = graph();
  double max_root = 0.0;
  auto absorb = [&max_root](const UniPoly& p) {
    if (p.degree() < 1) return;
    for (const Root& r : solve_roots(p).roots) max_root = std::max(max_root, std::abs(r.location));
  };
  std::vector<Complex> top_row, top_col;
  for (int j = 0; j <= q.deg_y(); ++j) top_row.push_back(q.coeff(q.deg_x(), j));
  for (int i = 0; i <= q.deg_x(); ++i) top_col.push_back(q.coeff(i, q.deg_y()));
  absorb(UniPoly(std::move(top_row)));
  absorb(UniPoly(std::move(top_col)));
  return std::max(10.0, 2.0 * max_root);
}

Correspondence compose(const Correspondence& outer, const Correspondence& inner,
                       ComposeInfo* info) {
  // inner graph read as (x, t), outer graph read as (t, y)
  const ResultantResult rr = resultant_elim(inner.graph(), outer.graph());
  const BiPoly q = normalize_graph(rr.value);
  const int want_d1 = inner.degrees().d1 * outer.degrees().d1;
  const int want_d2 = inner.degrees().d2 * outer.degrees().d2;
  if (info) {
    info->expected_d1 = want_d1;
    info->expected_d2 = want_d2;
    info->degree_dropped = q.deg_y() < want_d1 || q.deg_x() < want_d2;
  }
  std::string name;
  if (!outer.name().empty() || !inner.name().empty())
    name = outer.name() + "*" + inner.name();
  // compositions of proper correspondences stay proper
  return Correspondence::implicit_unchecked(q, std::move(name));
}

Correspondence graph_power(const Correspondence& f, int n, ComposeInfo* info) {
  if (n < 1) raise(ErrorCode::InvalidArgument, "graph_power needs n >= 1");
  Correspondence acc = f;
  ComposeInfo local;
  for (int k = 1; k < n; ++k) {
    acc = compose(f, acc, &local);
    if (info && local.degree_dropped) info->degree_dropped = true;
  }
  if (info) {
    info->expected_d1 = 1;
    info->expected_d2 = 1;
    for (int k = 0; k < n; ++k) {
      info->expected_d1 *= f.degrees().d1;
      info->expected_d2 *= f.degrees().d2;
    }
  }
  return acc;
}

}  // namespace corrdyn
