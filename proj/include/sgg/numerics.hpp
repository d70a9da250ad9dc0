#pragma once

#include <cmath>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <vector>

namespace sgg {

/// Thomas algorithm for a tridiagonal system.
///
/// lower[i] multiplies x[i-1] (lower[0] unused), diag[i] multiplies x[i],
/// upper[i] multiplies x[i+1] (upper[n-1] unused). `diag` and `rhs` are
/// overwritten; the solution ends up in `rhs`. No pivoting: the matrices
/// assembled by the implicit diffusion steps are strictly diagonally
/// dominant.
inline void solve_tridiagonal_inplace(std::span<const double> lower,
                                      std::span<double> diag,
                                      std::span<const double> upper,
                                      std::span<double> rhs) {
  const std::size_t n = diag.size();
  if (n == 0) return;
  for (std::size_t i = 1; i < n; ++i) {
    const double w = lower[i] / diag[i - 1];
    diag[i] -= w * upper[i - 1];
    rhs[i] -= w * rhs[i - 1];
  }
  rhs[n - 1] /= diag[n - 1];
  for (std::size_t i = n - 1; i-- > 0;) {
    rhs[i] = (rhs[i] - upper[i] * rhs[i + 1]) / diag[i];
  }
}

struct BisectionResult {
  double root = 0.0;
  double residual = 0.0;  // f(root)
  int iterations = 0;
};

/// Bracketed bisection on [lo, hi]; requires f(lo) and f(hi) of opposite
/// signs. Iterates until the bracket collapses to a few ulps and returns the
/// evaluated point with the smallest |f|, so the residual is as small as the
/// function's conditioning allows, not just below a fixed cut.
template <class F>
BisectionResult bisect(F&& f, double lo, double hi, int max_iter = 200) {
  double flo = f(lo);
  double fhi = f(hi);
  if (flo == 0.0) return {lo, 0.0, 0};
  if (fhi == 0.0) return {hi, 0.0, 0};
  if ((flo > 0.0) == (fhi > 0.0)) {
    throw std::invalid_argument("bisect: root is not bracketed");
  }
  double best_x = std::abs(flo) < std::abs(fhi) ? lo : hi;
  double best_f = std::abs(flo) < std::abs(fhi) ? flo : fhi;
  int it = 0;
  while (it < max_iter) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;  // bracket exhausted in double precision
    const double fm = f(mid);
    ++it;
    if (std::abs(fm) < std::abs(best_f)) {
      best_f = fm;
      best_x = mid;
    }
    if (fm == 0.0) break;
    if ((fm > 0.0) == (flo > 0.0)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
      fhi = fm;
    }
  }
  return {best_x, best_f, it};
}

/// log(1 + exp(x)) without overflow.
inline double softplus(double x) {
  return x > 0.0 ? x + std::log1p(std::exp(-x)) : std::log1p(std::exp(x));
}

/// (exp(t) - 1)/t with the removable singularity at t = 0.
inline double expm1_over(double t) {
  return std::abs(t) < 1e-8 ? 1.0 + 0.5 * t : std::expm1(t) / t;
}

/// Piecewise-linear interpolation with constant extension beyond the range.
/// `xs` must be strictly increasing.
inline double interp_linear(std::span<const double> xs, std::span<const double> ys, double x) {
  const std::size_t n = xs.size();
  if (n == 0) throw std::invalid_argument("interp_linear: empty table");
  if (x <= xs.front()) return ys.front();
  if (x >= xs.back()) return ys.back();
  std::size_t lo = 0, hi = n - 1;
  while (hi - lo > 1) {
    const std::size_t mid = (lo + hi) / 2;
    if (xs[mid] <= x) lo = mid;
    else hi = mid;
  }
  const double w = (x - xs[lo]) / (xs[hi] - xs[lo]);
  return ys[lo] + w * (ys[hi] - ys[lo]);
}

struct LineFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r_squared = 1.0;
};

/// Ordinary least squares y = a + b x. r^2 is defined as 1 when the data has
/// no variance (a constant is fit exactly).
inline LineFit fit_line(std::span<const double> x, std::span<const double> y) {
  const std::size_t n = x.size();
  if (n < 2 || y.size() != n) throw std::invalid_argument("fit_line: need >= 2 samples");
  double sx = 0, sy = 0;
  for (std::size_t i = 0; i < n; ++i) {
    sx += x[i];
    sy += y[i];
  }
  const double mx = sx / static_cast<double>(n);
  const double my = sy / static_cast<double>(n);
  double sxx = 0, sxy = 0, syy = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const double dx = x[i] - mx;
    const double dy = y[i] - my;
    sxx += dx * dx;
    sxy += dx * dy;
    syy += dy * dy;
  }
  if (sxx == 0.0) throw std::invalid_argument("fit_line: degenerate abscissa");
  LineFit out;
  out.slope = sxy / sxx;
  out.intercept = my - out.slope * mx;
  if (syy > 0.0) {
    double ss_res = 0;
    for (std::size_t i = 0; i < n; ++i) {
      const double e = y[i] - (out.intercept + out.slope * x[i]);
      ss_res += e * e;
    }
    out.r_squared = 1.0 - ss_res / syy;
    if (out.r_squared < 0.0) out.r_squared = 0.0;
    if (out.r_squared > 1.0) out.r_squared = 1.0;
  }
  return out;
}

inline int sign0(double x) { return (x > 0.0) - (x < 0.0); }

}  // namespace sgg
