#include "corrdyn/polycore.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "corrdyn/parallel.hpp"

namespace corrdyn {

namespace {

constexpr double kEps = 2.220446049250313e-16;

std::vector<Complex> trim_exact_zeros(std::vector<Complex> c) {
  while (!c.empty() && c.back() == Complex(0)) c.pop_back();
  return c;
}

}  // namespace

// ---------------------------------------------------------------------------
// UniPoly
// ---------------------------------------------------------------------------

UniPoly::UniPoly(std::vector<Complex> coeffs) : coeffs_(trim_exact_zeros(std::move(coeffs))) {}

UniPoly::UniPoly(std::initializer_list<Complex> coeffs)
    : coeffs_(trim_exact_zeros(std::vector<Complex>(coeffs))) {}

UniPoly UniPoly::constant(Complex c) { return UniPoly(std::vector<Complex>{c}); }

UniPoly UniPoly::identity() { return UniPoly({Complex(0), Complex(1)}); }

UniPoly UniPoly::monomial(int degree, Complex c) {
  if (degree < 0) raise(ErrorCode::InvalidArgument, "negative monomial degree");
  std::vector<Complex> v(static_cast<std::size_t>(degree) + 1, Complex(0));
  v.back() = c;
  return UniPoly(std::move(v));
}

UniPoly UniPoly::chebyshev(int m) {
  if (m < 0) raise(ErrorCode::InvalidArgument, "chebyshev index must be >= 0");
  UniPoly prev = constant(1);
  if (m == 0) return prev;
  UniPoly cur = identity();
  const UniPoly two_z({Complex(0), Complex(2)});
  for (int k = 1; k < m; ++k) {
    UniPoly next = two_z * cur - prev;
    prev = std::move(cur);
    cur = std::move(next);
  }
  return cur;
}

Complex UniPoly::coeff(int k) const {
  if (k < 0 || k >= static_cast<int>(coeffs_.size())) return Complex(0);
  return coeffs_[static_cast<std::size_t>(k)];
}

double UniPoly::coeff_scale() const {
  double s = 0.0;
  for (const Complex& c : coeffs_) s = std::max(s, std::abs(c));
  return s;
}

Complex UniPoly::eval(Complex z) const {
  Complex acc(0);
  for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) acc = acc * z + *it;
  return acc;
}

std::pair<Complex, Complex> UniPoly::eval_with_derivative(Complex z) const {
  Complex v(0), d(0);
  for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) {
    d = d * z + v;
    v = v * z + *it;
  }
  return {v, d};
}

double UniPoly::eval_magnitude(double abs_z) const {
  double acc = 0.0;
  for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) acc = acc * abs_z + std::abs(*it);
  return acc;
}

UniPoly UniPoly::derivative() const {
  if (coeffs_.size() <= 1) return UniPoly();
  std::vector<Complex> d(coeffs_.size() - 1);
  for (std::size_t k = 1; k < coeffs_.size(); ++k) d[k - 1] = coeffs_[k] * static_cast<double>(k);
  return UniPoly(std::move(d));
}

UniPoly UniPoly::compose(const UniPoly& inner) const {
  UniPoly acc;
  for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) acc = acc * inner + constant(*it);
  return acc;
}

UniPoly UniPoly::trimmed(double rel_eps) const {
  if (is_zero()) return UniPoly();
  const double cut = rel_eps * coeff_scale();
  std::vector<Complex> c = coeffs_;
  while (!c.empty() && std::abs(c.back()) <= cut) c.pop_back();
  return UniPoly(std::move(c));
}

UniPoly UniPoly::operator+(const UniPoly& rhs) const {
  std::vector<Complex> c(std::max(coeffs_.size(), rhs.coeffs_.size()), Complex(0));
  for (std::size_t k = 0; k < coeffs_.size(); ++k) c[k] += coeffs_[k];
  for (std::size_t k = 0; k < rhs.coeffs_.size(); ++k) c[k] += rhs.coeffs_[k];
  return UniPoly(std::move(c));
}

UniPoly UniPoly::operator-(const UniPoly& rhs) const { return *this + (-rhs); }

UniPoly UniPoly::operator-() const {
  std::vector<Complex> c = coeffs_;
  for (Complex& v : c) v = -v;
  return UniPoly(std::move(c));
}

UniPoly UniPoly::operator*(const UniPoly& rhs) const {
  if (is_zero() || rhs.is_zero()) return UniPoly();
  std::vector<Complex> c(coeffs_.size() + rhs.coeffs_.size() - 1, Complex(0));
  for (std::size_t i = 0; i < coeffs_.size(); ++i)
    for (std::size_t j = 0; j < rhs.coeffs_.size(); ++j) c[i + j] += coeffs_[i] * rhs.coeffs_[j];
  return UniPoly(std::move(c));
}

UniPoly UniPoly::operator*(Complex c) const {
  std::vector<Complex> v = coeffs_;
  for (Complex& x : v) x *= c;
  return UniPoly(std::move(v));
}

bool UniPoly::approx_equal(const UniPoly& rhs, double tol) const {
  const int n = std::max(degree(), rhs.degree());
  const double scale = std::max({coeff_scale(), rhs.coeff_scale(), 1.0});
  for (int k = 0; k <= n; ++k)
    if (std::abs(coeff(k) - rhs.coeff(k)) > tol * scale) return false;
  return true;
}

std::string UniPoly::to_string(const std::string& var) const {
  if (is_zero()) return "0";
  std::ostringstream os;
  for (std::size_t k = 0; k < coeffs_.size(); ++k) {
    if (coeffs_[k] == Complex(0)) continue;
    if (os.tellp() > 0) os << " + ";
    os << "(" << coeffs_[k].real() << (coeffs_[k].imag() < 0 ? "-" : "+")
       << std::abs(coeffs_[k].imag()) << "i)";
    if (k > 0) os << var << "^" << k;
  }
  return os.str();
}

// ---------------------------------------------------------------------------
// Root solving: Aberth-Ehrlich + Newton polish + multiplicity clustering
// ---------------------------------------------------------------------------

namespace {

double frac(double x) { return x - std::floor(x); }

// Simultaneous iteration on a polynomial with nonzero constant term.
// Roots that reach evaluation-level accuracy are frozen; returns false when
// the iteration cap was hit before every root settled or stalled.
bool aberth_iterate(const UniPoly& q, std::vector<Complex>& z) {
  const int m = q.degree();
  const double lc_mag = std::abs(q.leading());
  double upper = 0.0;
  for (int k = 0; k < m; ++k) upper = std::max(upper, std::abs(q.coeff(k)) / lc_mag);
  upper += 1.0;

  double r0 = std::pow(std::abs(q.coeff(0)) / lc_mag, 1.0 / m);
  if (!(r0 > 1e-8)) r0 = 0.5 * upper;
  r0 = std::min(r0, upper);

  z.resize(static_cast<std::size_t>(m));
  for (int j = 0; j < m; ++j) {
    const double theta = 2.0 * std::numbers::pi * j / m + 0.41 + 0.07 * frac(0.7731 * j);
    const double r = r0 * (1.0 + 0.08 * frac(0.6180339887 * (j + 1)));
    z[static_cast<std::size_t>(j)] = r * Complex(std::cos(theta), std::sin(theta));
  }

  std::vector<Complex> step(static_cast<std::size_t>(m));
  const int cap = 500;
  for (int iter = 0; iter < cap; ++iter) {
    double max_step = 0.0;
    double scale = 1.0;
    for (const Complex& zi : z) scale = std::max(scale, std::abs(zi));

    for (int i = 0; i < m; ++i) {
      Complex zi = z[static_cast<std::size_t>(i)];
      auto [v, d] = q.eval_with_derivative(zi);
      if (std::abs(v) <= 8.0 * kEps * q.eval_magnitude(std::abs(zi))) {
        step[static_cast<std::size_t>(i)] = 0.0;
        continue;
      }
      if (d == Complex(0)) {
        // stationary start; nudge off the critical point
        step[static_cast<std::size_t>(i)] = -1e-3 * (1.0 + std::abs(zi)) * Complex(0.7, 0.7);
        max_step = std::max(max_step, std::abs(step[static_cast<std::size_t>(i)]));
        continue;
      }
      const Complex newton = v / d;
      Complex repulse(0);
      for (int j = 0; j < m; ++j) {
        if (j == i) continue;
        Complex diff = zi - z[static_cast<std::size_t>(j)];
        if (diff == Complex(0)) diff = Complex(1e-14 * (1.0 + std::abs(zi)), 0);
        repulse += 1.0 / diff;
      }
      const Complex denom = Complex(1) - newton * repulse;
      Complex w = std::abs(denom) < 1e-300 ? newton : newton / denom;
      const double wmax = 1.0 + std::abs(zi);
      if (std::abs(w) > wmax) w *= wmax / std::abs(w);
      step[static_cast<std::size_t>(i)] = w;
      max_step = std::max(max_step, std::abs(w));
    }
    for (int i = 0; i < m; ++i) z[static_cast<std::size_t>(i)] -= step[static_cast<std::size_t>(i)];
    if (max_step < 1e-13 * scale) return true;
  }
  return false;
}

void newton_polish(const UniPoly& q, std::vector<Complex>& z) {
  for (Complex& zi : z) {
    for (int it = 0; it < 3; ++it) {
      auto [v, d] = q.eval_with_derivative(zi);
      if (d == Complex(0)) break;
      const Complex cand = zi - v / d;
      if (std::abs(q.eval(cand)) < std::abs(v))
        zi = cand;
      else
        break;
    }
  }
}

// Newton iteration for a root of the (order)-th derivative of p, seeded at c.
Complex polish_on_derivative(const UniPoly& p, int order, Complex c) {
  UniPoly d = p;
  for (int k = 0; k < order; ++k) d = d.derivative();
  for (int it = 0; it < 40; ++it) {
    auto [v, dv] = d.eval_with_derivative(c);
    if (dv == Complex(0)) break;
    const Complex step = v / dv;
    c -= step;
    if (std::abs(step) < 1e-15 * (1.0 + std::abs(c))) break;
  }
  return c;
}

// True when c behaves like a root of p of multiplicity exactly >= k:
// p, p', ..., p^(k-1) all vanish at c up to evaluation-level noise.
bool verify_multiplicity(const UniPoly& p, Complex c, int k) {
  UniPoly d = p;
  for (int j = 0; j < k; ++j) {
    const double mag = d.eval_magnitude(std::abs(c));
    if (std::abs(d.eval(c)) > 3e-11 * mag + 1e-280) return false;
    d = d.derivative();
  }
  return true;
}

struct ClusterOut {
  Complex center;
  int multiplicity;
};

// Radius under which a group of m approximations is a candidate for a single
// multiplicity-m root: double arithmetic smears an m-fold root over a disk of
// radius about eps^(1/m). Over-wide merges are undone by verify_multiplicity.
double detect_radius(int m, double root_scale) {
  return root_scale * std::pow(1e-11, 1.0 / m);
}

void refine_cluster(const UniPoly& p, std::vector<Complex> pts, double root_scale,
                    std::vector<ClusterOut>& out) {
  if (pts.empty()) return;
  if (pts.size() == 1) {
    out.push_back({pts[0], 1});
    return;
  }
  const int k = static_cast<int>(pts.size());
  Complex mean(0);
  for (const Complex& v : pts) mean += v;
  mean /= static_cast<double>(k);
  Complex c = polish_on_derivative(p, k - 1, mean);
  if (std::abs(c - mean) < 4.0 * detect_radius(k, root_scale) && verify_multiplicity(p, c, k)) {
    out.push_back({c, k});
    return;
  }
  // not a genuine k-fold root; peel off the outlier and retry
  std::size_t far = 0;
  double far_dist = -1.0;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    const double d = std::abs(pts[i] - mean);
    if (d > far_dist) {
      far_dist = d;
      far = i;
    }
  }
  const Complex outlier = pts[far];
  pts.erase(pts.begin() + static_cast<std::ptrdiff_t>(far));
  refine_cluster(p, std::move(pts), root_scale, out);
  out.push_back({outlier, 1});
}

}  // namespace

RootSet solve_roots(const UniPoly& p_in, double cluster_tol, double pre_trim_eps) {
  if (p_in.is_zero()) raise(ErrorCode::ZeroPolynomial, "cannot solve roots of the zero polynomial");
  const UniPoly p = pre_trim_eps > 0 ? p_in.trimmed(pre_trim_eps) : p_in;
  const int n = p.degree();
  RootSet rs;
  if (n <= 0) return rs;  // nonzero constant: no roots

  // exact zero roots come off first
  std::vector<Complex> work = p.coeffs();
  int zero_mult = 0;
  while (work.size() > 1 && work.front() == Complex(0)) {
    work.erase(work.begin());
    ++zero_mult;
  }

  // balance wildly scaled coefficients by the substitution z = s w
  double s = 1.0;
  if (work.size() >= 2) {
    const double ratio = std::abs(work.front()) / std::abs(work.back());
    if (ratio > 0.0 && std::isfinite(ratio)) {
      const double cand = std::pow(ratio, 1.0 / (static_cast<double>(work.size()) - 1.0));
      if (cand > 4.0 || cand < 0.25) s = cand;
    }
  }
  if (s != 1.0) {
    double sk = 1.0;
    for (Complex& c : work) {
      c *= sk;
      sk *= s;
    }
    const double renorm = std::abs(work.back());
    for (Complex& c : work) c /= renorm;
  }
  const UniPoly q{std::vector<Complex>(work)};

  std::vector<Complex> approx;
  bool converged = true;
  const int m = q.degree();
  if (m == 1) {
    approx.push_back(-q.coeff(0) / q.coeff(1));
  } else if (m == 2) {
    const Complex a = q.coeff(2), b = q.coeff(1), c = q.coeff(0);
    const Complex sq = std::sqrt(b * b - 4.0 * a * c);
    const Complex bp = std::abs(b + sq) >= std::abs(b - sq) ? b + sq : b - sq;
    if (bp == Complex(0)) {
      approx = {Complex(0), Complex(0)};
    } else {
      const Complex r1 = -bp / (2.0 * a);
      approx = {r1, c / (a * r1)};
    }
  } else if (m >= 3) {
    converged = aberth_iterate(q, approx);
    newton_polish(q, approx);
  }
  for (int k = 0; k < zero_mult; ++k) approx.push_back(Complex(0));

  // clustering and multiplicity verification run in the balanced coordinates
  UniPoly scaled_full = p;
  if (s != 1.0) {
    std::vector<Complex> fc = p.coeffs();
    double sk = 1.0;
    for (Complex& c : fc) {
      c *= sk;
      sk *= s;
    }
    const double renorm = std::abs(fc.back());
    for (Complex& c : fc) c /= renorm;
    scaled_full = UniPoly(std::move(fc));
  }

  // deterministic processing order
  std::sort(approx.begin(), approx.end(), [](const Complex& a, const Complex& b) {
    if (a.real() != b.real()) return a.real() < b.real();
    return a.imag() < b.imag();
  });

  double max_root = 0.0;
  for (const Complex& z : approx) max_root = std::max(max_root, std::abs(z));
  const double root_scale = 1.0 + max_root;

  // single-linkage detection with multiplicity-dependent radius
  std::vector<std::vector<Complex>> clusters;
  for (const Complex& z : approx) clusters.push_back({z});
  auto centroid = [](const std::vector<Complex>& c) {
    Complex s(0);
    for (const Complex& v : c) s += v;
    return s / static_cast<double>(c.size());
  };
  bool merged = true;
  while (merged) {
    merged = false;
    for (std::size_t a = 0; a < clusters.size() && !merged; ++a) {
      for (std::size_t b = a + 1; b < clusters.size() && !merged; ++b) {
        // one-step lookahead: pieces of an m-fold root sit at the m-smear
        // radius even while the growing cluster is still smaller than m
        const int mm = std::min(n, static_cast<int>(clusters[a].size() + clusters[b].size()) + 1);
        if (std::abs(centroid(clusters[a]) - centroid(clusters[b])) <=
            detect_radius(mm, root_scale)) {
          clusters[a].insert(clusters[a].end(), clusters[b].begin(), clusters[b].end());
          clusters.erase(clusters.begin() + static_cast<std::ptrdiff_t>(b));
          merged = true;
        }
      }
    }
  }

  std::vector<ClusterOut> refined;
  for (auto& cl : clusters) refine_cluster(scaled_full, std::move(cl), root_scale, refined);

  // enforce the reporting radius: distinct locations stay farther apart than
  // cluster_tol * root_scale
  const double report_radius = cluster_tol * root_scale;
  merged = true;
  while (merged) {
    merged = false;
    for (std::size_t a = 0; a < refined.size() && !merged; ++a) {
      for (std::size_t b = a + 1; b < refined.size() && !merged; ++b) {
        if (std::abs(refined[a].center - refined[b].center) <= report_radius) {
          const double wa = refined[a].multiplicity, wb = refined[b].multiplicity;
          refined[a].center = (refined[a].center * wa + refined[b].center * wb) / (wa + wb);
          refined[a].multiplicity += refined[b].multiplicity;
          refined.erase(refined.begin() + static_cast<std::ptrdiff_t>(b));
          merged = true;
        }
      }
    }
  }

  std::sort(refined.begin(), refined.end(), [](const ClusterOut& a, const ClusterOut& b) {
    if (a.center.real() != b.center.real()) return a.center.real() < b.center.real();
    return a.center.imag() < b.center.imag();
  });

  rs.converged = converged;
  rs.total = 0;
  for (const ClusterOut& c : refined) {
    const Complex loc = c.center * s;  // back to original coordinates
    rs.roots.push_back({loc, c.multiplicity});
    rs.total += c.multiplicity;
    rs.max_residual = std::max(rs.max_residual, std::abs(p.eval(loc)));
  }
  return rs;
}

// ---------------------------------------------------------------------------
// BiPoly
// ---------------------------------------------------------------------------

BiPoly::BiPoly(int deg_x, int deg_y) {
  if (deg_x < 0 || deg_y < 0) raise(ErrorCode::InvalidArgument, "negative BiPoly shape");
  c_.assign(static_cast<std::size_t>(deg_x) + 1,
            std::vector<Complex>(static_cast<std::size_t>(deg_y) + 1, Complex(0)));
}

BiPoly::BiPoly(std::vector<std::vector<Complex>> rows) : c_(std::move(rows)) {
  std::size_t width = 0;
  for (const auto& row : c_) width = std::max(width, row.size());
  for (auto& row : c_) row.resize(width, Complex(0));
  // drop exactly-zero fringe
  auto row_zero = [](const std::vector<Complex>& row) {
    return std::all_of(row.begin(), row.end(), [](const Complex& v) { return v == Complex(0); });
  };
  while (!c_.empty() && row_zero(c_.back())) c_.pop_back();
  if (!c_.empty()) {
    std::size_t maxj = 0;
    for (const auto& row : c_)
      for (std::size_t j = 0; j < row.size(); ++j)
        if (row[j] != Complex(0)) maxj = std::max(maxj, j);
    for (auto& row : c_) row.resize(maxj + 1);
  }
}

BiPoly BiPoly::from_uni_x(const UniPoly& p) {
  std::vector<std::vector<Complex>> rows;
  for (const Complex& c : p.coeffs()) rows.push_back({c});
  return BiPoly(std::move(rows));
}

BiPoly BiPoly::from_uni_y(const UniPoly& p) {
  std::vector<std::vector<Complex>> rows{p.coeffs()};
  return BiPoly(std::move(rows));
}

Complex BiPoly::coeff(int i, int j) const {
  if (i < 0 || j < 0 || i > deg_x() || j > deg_y()) return Complex(0);
  return c_[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
}

Complex& BiPoly::at(int i, int j) {
  if (i < 0 || j < 0 || i > deg_x() || j > deg_y())
    raise(ErrorCode::InvalidArgument, "BiPoly index out of range");
  return c_[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
}

double BiPoly::coeff_scale() const {
  double s = 0.0;
  for (const auto& row : c_)
    for (const Complex& v : row) s = std::max(s, std::abs(v));
  return s;
}

Complex BiPoly::eval(Complex x, Complex y) const {
  Complex acc(0);
  for (auto it = c_.rbegin(); it != c_.rend(); ++it) {
    Complex row(0);
    for (auto jt = it->rbegin(); jt != it->rend(); ++jt) row = row * y + *jt;
    acc = acc * x + row;
  }
  return acc;
}

UniPoly BiPoly::specialize_x(Complex x) const {
  if (is_zero()) return UniPoly();
  std::vector<Complex> out(static_cast<std::size_t>(deg_y()) + 1, Complex(0));
  Complex xp(1);
  for (const auto& row : c_) {
    for (std::size_t j = 0; j < row.size(); ++j) out[j] += row[j] * xp;
    xp *= x;
  }
  return UniPoly(std::move(out));
}

UniPoly BiPoly::specialize_y(Complex y) const {
  if (is_zero()) return UniPoly();
  std::vector<Complex> out(static_cast<std::size_t>(deg_x()) + 1, Complex(0));
  for (std::size_t i = 0; i < c_.size(); ++i) {
    Complex acc(0);
    for (auto jt = c_[i].rbegin(); jt != c_[i].rend(); ++jt) acc = acc * y + *jt;
    out[i] = acc;
  }
  return UniPoly(std::move(out));
}

UniPoly BiPoly::diagonal() const {
  if (is_zero()) return UniPoly();
  std::vector<Complex> out(static_cast<std::size_t>(deg_x() + deg_y()) + 1, Complex(0));
  for (std::size_t i = 0; i < c_.size(); ++i)
    for (std::size_t j = 0; j < c_[i].size(); ++j) out[i + j] += c_[i][j];
  return UniPoly(std::move(out));
}

BiPoly BiPoly::swapped_vars() const {
  if (is_zero()) return BiPoly();
  std::vector<std::vector<Complex>> rows(static_cast<std::size_t>(deg_y()) + 1,
                                         std::vector<Complex>(static_cast<std::size_t>(deg_x()) + 1));
  for (std::size_t i = 0; i < c_.size(); ++i)
    for (std::size_t j = 0; j < c_[i].size(); ++j) rows[j][i] = c_[i][j];
  return BiPoly(std::move(rows));
}

BiPoly BiPoly::derivative_x() const {
  if (deg_x() < 1) return BiPoly();
  std::vector<std::vector<Complex>> rows(c_.begin() + 1, c_.end());
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (Complex& v : rows[i]) v *= static_cast<double>(i + 1);
  return BiPoly(std::move(rows));
}

BiPoly BiPoly::derivative_y() const {
  if (deg_y() < 1) return BiPoly();
  std::vector<std::vector<Complex>> rows(c_.size());
  for (std::size_t i = 0; i < c_.size(); ++i) {
    rows[i].assign(c_[i].begin() + 1, c_[i].end());
    for (std::size_t j = 0; j < rows[i].size(); ++j) rows[i][j] *= static_cast<double>(j + 1);
  }
  return BiPoly(std::move(rows));
}

BiPoly BiPoly::scaled(Complex c) const {
  std::vector<std::vector<Complex>> rows = c_;
  for (auto& row : rows)
    for (Complex& v : row) v *= c;
  return BiPoly(std::move(rows));
}

BiPoly BiPoly::trimmed(double rel_eps) const {
  if (is_zero()) return BiPoly();
  const double cut = rel_eps * coeff_scale();
  std::vector<std::vector<Complex>> rows = c_;
  for (auto& row : rows)
    for (Complex& v : row)
      if (std::abs(v) <= cut) v = Complex(0);
  return BiPoly(std::move(rows));
}

bool BiPoly::approx_equal(const BiPoly& rhs, double tol) const {
  const int dx = std::max(deg_x(), rhs.deg_x());
  const int dy = std::max(deg_y(), rhs.deg_y());
  const double scale = std::max({coeff_scale(), rhs.coeff_scale(), 1.0});
  for (int i = 0; i <= dx; ++i)
    for (int j = 0; j <= dy; ++j)
      if (std::abs(coeff(i, j) - rhs.coeff(i, j)) > tol * scale) return false;
  return true;
}

std::string BiPoly::to_string(const std::string& vx, const std::string& vy) const {
  if (is_zero()) return "0";
  std::ostringstream os;
  for (std::size_t i = 0; i < c_.size(); ++i)
    for (std::size_t j = 0; j < c_[i].size(); ++j) {
      if (c_[i][j] == Complex(0)) continue;
      if (os.tellp() > 0) os << " + ";
      os << "(" << c_[i][j].real() << (c_[i][j].imag() < 0 ? "-" : "+")
         << std::abs(c_[i][j].imag()) << "i)";
      if (i > 0) os << vx << "^" << i;
      if (j > 0) os << vy << "^" << j;
    }
  return os.str();
}

// ---------------------------------------------------------------------------
// Resultants
// ---------------------------------------------------------------------------

Complex sylvester_resultant(const std::vector<Complex>& a, const std::vector<Complex>& b,
                            int deg_a, int deg_b) {
  if (deg_a < 0 || deg_b < 0) raise(ErrorCode::InvalidArgument, "negative nominal degree");
  const int n = deg_a + deg_b;
  if (n == 0) return Complex(1);

  auto coeff_of = [](const std::vector<Complex>& c, int k) {
    return (k >= 0 && k < static_cast<int>(c.size())) ? c[static_cast<std::size_t>(k)] : Complex(0);
  };

  // rows 0..deg_b-1 carry shifted copies of a (descending), then deg_a rows of b
  std::vector<std::vector<Complex>> M(static_cast<std::size_t>(n),
                                      std::vector<Complex>(static_cast<std::size_t>(n), Complex(0)));
  for (int r = 0; r < deg_b; ++r)
    for (int k = 0; k <= deg_a; ++k) M[static_cast<std::size_t>(r)][static_cast<std::size_t>(r + k)] = coeff_of(a, deg_a - k);
  for (int r = 0; r < deg_a; ++r)
    for (int k = 0; k <= deg_b; ++k)
      M[static_cast<std::size_t>(deg_b + r)][static_cast<std::size_t>(r + k)] = coeff_of(b, deg_b - k);

  // LU with partial pivoting
  Complex det(1);
  for (int col = 0; col < n; ++col) {
    int pivot = col;
    double best = std::abs(M[static_cast<std::size_t>(col)][static_cast<std::size_t>(col)]);
    for (int r = col + 1; r < n; ++r) {
      const double v = std::abs(M[static_cast<std::size_t>(r)][static_cast<std::size_t>(col)]);
      if (v > best) {
        best = v;
        pivot = r;
      }
    }
    if (best == 0.0) return Complex(0);
    if (pivot != col) {
      std::swap(M[static_cast<std::size_t>(pivot)], M[static_cast<std::size_t>(col)]);
      det = -det;
    }
    const Complex p = M[static_cast<std::size_t>(col)][static_cast<std::size_t>(col)];
    det *= p;
    for (int r = col + 1; r < n; ++r) {
      const Complex f = M[static_cast<std::size_t>(r)][static_cast<std::size_t>(col)] / p;
      if (f == Complex(0)) continue;
      for (int k = col; k < n; ++k)
        M[static_cast<std::size_t>(r)][static_cast<std::size_t>(k)] -=
            f * M[static_cast<std::size_t>(col)][static_cast<std::size_t>(k)];
    }
  }
  return det;
}

namespace {

Complex unit_node(int k, int n) {
  const double t = 2.0 * std::numbers::pi * k / n;
  return Complex(std::cos(t), std::sin(t));
}

// inverse DFT of values sampled on the unit-circle node set, fixed order
std::vector<Complex> inverse_dft(const std::vector<Complex>& values) {
  const int n = static_cast<int>(values.size());
  std::vector<Complex> out(values.size(), Complex(0));
  for (int i = 0; i < n; ++i) {
    Complex acc(0);
    for (int k = 0; k < n; ++k) acc += values[static_cast<std::size_t>(k)] * unit_node(-(i * k) % n, n);
    out[static_cast<std::size_t>(i)] = acc / static_cast<double>(n);
  }
  return out;
}

}  // namespace

ResultantResult resultant_elim(const BiPoly& A, const BiPoly& B, double trim_eps) {
  if (A.is_zero() || B.is_zero())
    raise(ErrorCode::DegenerateResultant, "resultant of a zero polynomial");
  const int dtA = A.deg_y();  // t-power of A(x, t)
  const int dtB = B.deg_x();  // t-power of B(t, y)
  const int dx = A.deg_x() * dtB;
  const int dy = B.deg_y() * dtA;
  const int nx = dx + 1, ny = dy + 1;

  // B is (t, y): fixing y leaves a polynomial in t.
  std::vector<UniPoly> b_at(static_cast<std::size_t>(ny));
  for (int k = 0; k < ny; ++k)
    b_at[static_cast<std::size_t>(k)] = B.specialize_y(unit_node(k, ny));

  std::vector<std::vector<Complex>> values(static_cast<std::size_t>(nx),
                                           std::vector<Complex>(static_cast<std::size_t>(ny)));
  parallel_for(static_cast<std::size_t>(nx), [&](std::size_t j) {
    const UniPoly a_t = A.specialize_x(unit_node(static_cast<int>(j), nx));
    for (int k = 0; k < ny; ++k)
      values[j][static_cast<std::size_t>(k)] =
          sylvester_resultant(a_t.coeffs(), b_at[static_cast<std::size_t>(k)].coeffs(), dtA, dtB);
  });

  double max_val = 0.0;
  for (const auto& row : values)
    for (const Complex& v : row) max_val = std::max(max_val, std::abs(v));

  // crude magnitude of a generic Sylvester determinant for these inputs
  const double row_a = A.coeff_scale() * (A.deg_x() + 1) * (dtA + 1);
  const double row_b = B.coeff_scale() * (B.deg_y() + 1) * (dtB + 1);
  const double det_scale = std::pow(std::max(row_a, 1e-300), dtB) *
                           std::pow(std::max(row_b, 1e-300), dtA);
  if (max_val <= 1e-13 * det_scale)
    raise(ErrorCode::DegenerateResultant, "resultant vanishes identically: inputs share a factor");

  // interpolate x-direction first, then y
  std::vector<std::vector<Complex>> half(static_cast<std::size_t>(nx));
  for (int k = 0; k < ny; ++k) {
    std::vector<Complex> col(static_cast<std::size_t>(nx));
    for (int j = 0; j < nx; ++j) col[static_cast<std::size_t>(j)] = values[static_cast<std::size_t>(j)][static_cast<std::size_t>(k)];
    const std::vector<Complex> ci = inverse_dft(col);
    for (int i = 0; i < nx; ++i) half[static_cast<std::size_t>(i)].push_back(ci[static_cast<std::size_t>(i)]);
  }
  std::vector<std::vector<Complex>> rows(static_cast<std::size_t>(nx));
  for (int i = 0; i < nx; ++i) rows[static_cast<std::size_t>(i)] = inverse_dft(half[static_cast<std::size_t>(i)]);

  ResultantResult out;
  BiPoly full(std::move(rows));
  out.value = full.trimmed(trim_eps);
  if (out.value.is_zero())
    raise(ErrorCode::DegenerateResultant, "resultant vanishes identically after trimming");

  // off-grid spot checks against direct determinants
  const Complex probes[3][2] = {{Complex(0.7312, 0.3011), Complex(-0.4145, 0.5921)},
                                {Complex(-0.8632, -0.2217), Complex(0.6512, -0.7013)},
                                {Complex(0.1909, -0.9101), Complex(-0.9781, 0.1222)}};
  double resid = 0.0;
  for (const auto& pr : probes) {
    const UniPoly a_t = A.specialize_x(pr[0]);
    const UniPoly b_t = B.specialize_y(pr[1]);
    const Complex direct = sylvester_resultant(a_t.coeffs(), b_t.coeffs(), dtA, dtB);
    const Complex interp = out.value.eval(pr[0], pr[1]);
    resid = std::max(resid, std::abs(direct - interp) / (max_val + std::abs(direct)));
  }
  out.interp_residual = resid;
  out.ill_conditioned = resid > 1e-6;
  return out;
}

UniPoly resultant_in_x(const BiPoly& A, const BiPoly& B, double trim_eps) {
  if (A.is_zero() || B.is_zero())
    raise(ErrorCode::DegenerateResultant, "resultant of a zero polynomial");
  const int dxA = A.deg_x(), dxB = B.deg_x();
  const int dy = A.deg_y() * dxB + B.deg_y() * dxA;
  const int n = dy + 1;
  std::vector<Complex> values(static_cast<std::size_t>(n));
  parallel_for(static_cast<std::size_t>(n), [&](std::size_t k) {
    const Complex y = unit_node(static_cast<int>(k), n);
    const UniPoly a = A.specialize_y(y);
    const UniPoly b = B.specialize_y(y);
    values[k] = sylvester_resultant(a.coeffs(), b.coeffs(), dxA, dxB);
  });
  double max_val = 0.0;
  for (const Complex& v : values) max_val = std::max(max_val, std::abs(v));
  const double row_a = A.coeff_scale() * (A.deg_x() + 1) * (A.deg_y() + 1);
  const double row_b = B.coeff_scale() * (B.deg_x() + 1) * (B.deg_y() + 1);
  const double det_scale = std::pow(std::max(row_a, 1e-300), dxB) *
                           std::pow(std::max(row_b, 1e-300), dxA);
  if (max_val <= 1e-13 * det_scale)
    raise(ErrorCode::DegenerateResultant, "resultant in x vanishes identically");
  const std::vector<Complex> coeffs = inverse_dft(values);
  UniPoly out{std::vector<Complex>(coeffs)};
  out = out.trimmed(trim_eps);
  if (out.is_zero()) raise(ErrorCode::DegenerateResultant, "resultant in x trimmed to zero");
  return out;
}

}  // namespace corrdyn
