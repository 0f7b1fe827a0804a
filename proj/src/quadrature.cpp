#include "cclt/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "cclt/errors.hpp"

namespace cclt {

namespace {

// Panels are always split this many times before a panel may be accepted.
constexpr int kMinDepth = 3;

struct Panel {
  double a, b, fa, fm, fb, whole;
};

QuadratureValue refine(const std::function<double(double)>& f, const Panel& p, double tol,
                       int depth, int max_depth) {
  const double m = 0.5 * (p.a + p.b);
  const double lm = 0.5 * (p.a + m);
  const double rm = 0.5 * (m + p.b);
  const double flm = f(lm);
  const double frm = f(rm);
  const double h = p.b - p.a;
  const double left = h / 12.0 * (p.fa + 4.0 * flm + p.fm);
  const double right = h / 12.0 * (p.fm + 4.0 * frm + p.fb);
  const double delta = (left + right - p.whole) / 15.0;
  if (!std::isfinite(delta)) throw NumericalError("adaptive_simpson: non-finite integrand");
  if (std::abs(delta) <= tol && depth >= kMinDepth) return {left + right + delta, std::abs(delta)};
  if (depth >= max_depth) {
    std::ostringstream os;
    os << "adaptive_simpson: no convergence on [" << p.a << ", " << p.b
       << "] at max depth (error estimate " << std::abs(delta) << ")";
    throw NumericalError(os.str());
  }
  const auto l = refine(f, {p.a, m, p.fa, flm, p.fm, left}, tol / 2.0, depth + 1, max_depth);
  const auto r = refine(f, {m, p.b, p.fm, frm, p.fb, right}, tol / 2.0, depth + 1, max_depth);
  return {l.value + r.value, l.error + r.error};
}

}  // namespace

QuadratureValue adaptive_simpson(const std::function<double(double)>& f, double a, double b,
                                 double abs_tol, int max_depth, double rel_tol) {
  if (a == b) return {0.0, 0.0};
  const double fa = f(a);
  const double fb = f(b);
  const double fm = f(0.5 * (a + b));
  const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
  const double tol = std::max(abs_tol, rel_tol * std::abs(whole));
  return refine(f, {a, b, fa, fm, fb, whole}, tol, 0, max_depth);
}

}  // namespace cclt
