#pragma once

#include <complex>
#include <string>
#include <vector>

#include "corrdyn/errors.hpp"

namespace corrdyn {

using Complex = std::complex<double>;

// ---------------------------------------------------------------------------
// UniPoly: complex univariate polynomial, coefficients ascending, trailing
// exact zeros trimmed. Degree of the zero polynomial is -1. Values are
// immutable; every operation returns a fresh polynomial.
// ---------------------------------------------------------------------------
class UniPoly {
 public:
  UniPoly() = default;  // zero polynomial
  explicit UniPoly(std::vector<Complex> coeffs);
  UniPoly(std::initializer_list<Complex> coeffs);

  static UniPoly constant(Complex c);
  static UniPoly identity();                          // z
  static UniPoly monomial(int degree, Complex c = 1); // c z^degree
  static UniPoly chebyshev(int m);                    // T_m, 2 z T_m - T_{m-1} recurrence

  bool is_zero() const noexcept { return coeffs_.empty(); }
  int degree() const noexcept { return static_cast<int>(coeffs_.size()) - 1; }
  Complex coeff(int k) const;
  const std::vector<Complex>& coeffs() const noexcept { return coeffs_; }
  Complex leading() const { return is_zero() ? Complex(0) : coeffs_.back(); }
  double coeff_scale() const;  // max |c_k|

  Complex eval(Complex z) const;
  // Value and derivative at z in one Horner pass.
  std::pair<Complex, Complex> eval_with_derivative(Complex z) const;
  // Magnitude-level evaluation sum_k |c_k| |z|^k; the scale against which a
  // residual |p(z)| is meaningfully compared.
  double eval_magnitude(double abs_z) const;

  UniPoly derivative() const;
  UniPoly compose(const UniPoly& inner) const;  // this(inner(z))
  // Drops leading coefficients smaller than rel_eps * coeff_scale().
  UniPoly trimmed(double rel_eps) const;

  UniPoly operator+(const UniPoly& rhs) const;
  UniPoly operator-(const UniPoly& rhs) const;
  UniPoly operator*(const UniPoly& rhs) const;
  UniPoly operator*(Complex c) const;
  UniPoly operator-() const;
  UniPoly operator-(Complex c) const { return *this - constant(c); }
  UniPoly operator+(Complex c) const { return *this + constant(c); }

  bool approx_equal(const UniPoly& rhs, double tol) const;
  std::string to_string(const std::string& var = "z") const;

 private:
  std::vector<Complex> coeffs_;
};

// ---------------------------------------------------------------------------
// RootSet: all roots of a polynomial with multiplicities.
// ---------------------------------------------------------------------------
struct Root {
  Complex location;
  int multiplicity = 1;
};

struct RootSet {
  std::vector<Root> roots;
  int total = 0;              // sum of multiplicities; equals the solved degree
  double max_residual = 0.0;  // max |p(location)| over listed roots
  bool converged = true;      // false when the iteration cap was reached
};

// All complex roots of p by Aberth-Ehrlich simultaneous iteration from
// perturbed circular initial guesses, Newton polishing, then multiplicity
// clustering at radius cluster_tol * (1 + max |root|). Iteration cap 500;
// hitting it returns the partial result with converged = false.
// pre_trim_eps drops noise-level leading coefficients before solving; pass 0
// when the leading coefficient is known exact but small against the rest
// (fibers specialized far from the origin). Throws ZeroPolynomial for the
// zero polynomial. A nonzero constant yields an empty RootSet.
RootSet solve_roots(const UniPoly& p, double cluster_tol = 1e-7, double pre_trim_eps = 1e-12);

// ---------------------------------------------------------------------------
// BiPoly: complex bivariate polynomial c[i][j] x^i y^j with cached partial
// degrees; the top row and top column each contain a nonzero entry after
// trimming.
// ---------------------------------------------------------------------------
class BiPoly {
 public:
  BiPoly() = default;  // zero
  BiPoly(int deg_x, int deg_y);  // zero-filled workspace of that shape
  explicit BiPoly(std::vector<std::vector<Complex>> rows);

  static BiPoly from_uni_x(const UniPoly& p);  // p(x), constant in y
  static BiPoly from_uni_y(const UniPoly& p);  // p(y), constant in x

  bool is_zero() const noexcept { return c_.empty(); }
  int deg_x() const noexcept { return static_cast<int>(c_.size()) - 1; }
  int deg_y() const noexcept { return c_.empty() ? -1 : static_cast<int>(c_[0].size()) - 1; }
  Complex coeff(int i, int j) const;
  Complex& at(int i, int j);
  double coeff_scale() const;

  Complex eval(Complex x, Complex y) const;
  UniPoly specialize_x(Complex x) const;  // polynomial in y
  UniPoly specialize_y(Complex y) const;  // polynomial in x
  UniPoly diagonal() const;               // q(x) = Q(x, x)

  BiPoly swapped_vars() const;  // Q(y, x)
  BiPoly derivative_x() const;
  BiPoly derivative_y() const;
  BiPoly scaled(Complex c) const;
  // Zeroes entries below rel_eps * coeff_scale() and shrinks the degrees.
  BiPoly trimmed(double rel_eps = 1e-9) const;

  bool approx_equal(const BiPoly& rhs, double tol) const;
  std::string to_string(const std::string& vx = "x", const std::string& vy = "y") const;

 private:
  std::vector<std::vector<Complex>> c_;  // c_[i][j] multiplies x^i y^j
};

// ---------------------------------------------------------------------------
// Resultants
// ---------------------------------------------------------------------------

// Determinant of the Sylvester matrix of a and b taken at nominal degrees
// (deg_a, deg_b) >= actual degrees; leading entries may be zero.
Complex sylvester_resultant(const std::vector<Complex>& a, const std::vector<Complex>& b,
                            int deg_a, int deg_b);

struct ResultantResult {
  BiPoly value;                  // Res_t(A, B) as a polynomial in (x, y)
  double interp_residual = 0.0;  // relative residual at off-grid check points
  bool ill_conditioned = false;  // residual above threshold; value still returned
};

// Eliminates the shared variable t between A(x, t) and B(t, y): A is indexed
// (x-power, t-power) and B (t-power, y-power). Evaluation on roots-of-unity
// node grids sized by the degree bounds deg_x(A) deg_t(B) and deg_y(B)
// deg_t(A), one Sylvester determinant per node, then coefficient recovery by
// inverse DFT with a fixed summation order. Coefficients below
// trim_eps * max are removed. Throws DegenerateResultant when the resultant
// is identically zero.
ResultantResult resultant_elim(const BiPoly& A, const BiPoly& B, double trim_eps = 1e-9);

// Res_x(A, B) for two polynomials in the same variables (x, y); eliminates x
// and returns a univariate polynomial in y. Same node/interpolation scheme.
UniPoly resultant_in_x(const BiPoly& A, const BiPoly& B, double trim_eps = 1e-9);

}  // namespace corrdyn
