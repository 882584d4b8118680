// Generic adaptive quadrature. The built-in density families integrate in
// closed form; this engine is the fallback for arbitrary integrands and the
// independent oracle used by the test suites.
#pragma once

#include <cmath>
#include <functional>

namespace statusgame {

namespace detail {

template <typename F>
double simpson_slice(const F& f, double a, double fa, double b, double fb,
                     double m, double fm) {
  return (b - a) / 6.0 * (fa + 4.0 * fm + fb);
}

template <typename F>
double adaptive_simpson_rec(const F& f, double a, double fa, double b,
                            double fb, double m, double fm, double whole,
                            double tol, int depth) {
  const double lm = 0.5 * (a + m);
  const double rm = 0.5 * (m + b);
  const double flm = f(lm);
  const double frm = f(rm);
  const double left = simpson_slice(f, a, fa, m, fm, lm, flm);
  const double right = simpson_slice(f, m, fm, b, fb, rm, frm);
  const double delta = left + right - whole;
  if (depth <= 0 || std::abs(delta) <= 15.0 * tol) {
    return left + right + delta / 15.0;
  }
  return adaptive_simpson_rec(f, a, fa, m, fm, lm, flm, left, 0.5 * tol,
                              depth - 1) +
         adaptive_simpson_rec(f, m, fm, b, fb, rm, frm, right, 0.5 * tol,
                              depth - 1);
}

}  // namespace detail

// Adaptive Simpson with Richardson correction, absolute tolerance.
template <typename F>
double adaptive_simpson(const F& f, double a, double b, double abs_tol = 1e-10,
                        int max_depth = 40) {
  if (a == b) return 0.0;
  const double m = 0.5 * (a + b);
  const double fa = f(a);
  const double fb = f(b);
  const double fm = f(m);
  const double whole = detail::simpson_slice(f, a, fa, b, fb, m, fm);
  return detail::adaptive_simpson_rec(f, a, fa, b, fb, m, fm, whole, abs_tol,
                                      max_depth);
}

inline double adaptive_simpson(const std::function<double(double)>& f,
                               double a, double b) {
  return adaptive_simpson<std::function<double(double)>>(f, a, b);
}

}  // namespace statusgame
