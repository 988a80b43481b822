#pragma once

#include <cmath>
#include <cstddef>

namespace pmflab::detail {

// Gauss-Kronrod 7-15 nodes/weights on [-1, 1].
inline constexpr double kGk15Nodes[15] = {
    -0.991455371120813, -0.949107912342759, -0.864864423359769, -0.741531185599394,
    -0.586087235467691, -0.405845151377397, -0.207784955007898, 0.0,
    0.207784955007898,  0.405845151377397,  0.586087235467691,  0.741531185599394,
    0.864864423359769,  0.949107912342759,  0.991455371120813};
inline constexpr double kGk15Weights[15] = {
    0.022935322010529, 0.063092092629979, 0.104790010322250, 0.140653259715525,
    0.169004726639267, 0.190350578064785, 0.204432940075298, 0.209482141084728,
    0.204432940075298, 0.190350578064785, 0.169004726639267, 0.140653259715525,
    0.104790010322250, 0.063092092629979, 0.022935322010529};
inline constexpr double kG7Weights[7] = {
    0.129484966168870, 0.279705391489277, 0.381830050505119, 0.417959183673469,
    0.381830050505119, 0.279705391489277, 0.129484966168870};

template <class F>
void gk15_panel(const F& f, double a, double b, double& kronrod, double& err) {
  const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
  double gauss = 0.0;
  kronrod = 0.0;
  for (int i = 0; i < 15; ++i) {
    const double v = f(mid + half * kGk15Nodes[i]);
    kronrod += kGk15Weights[i] * v;
    if (i % 2 == 1) gauss += kG7Weights[i / 2] * v;
  }
  kronrod *= half;
  gauss *= half;
  err = std::fabs(kronrod - gauss);
}

// Adaptive bisection on [a, b] to an absolute tolerance. The integrands used
// here are smooth, so the recursion stays shallow.
template <class F>
double integrate_adaptive(const F& f, double a, double b, double abs_tol, int depth = 0) {
  double value, err;
  gk15_panel(f, a, b, value, err);
  if (err <= abs_tol || depth >= 40) return value;
  const double mid = 0.5 * (a + b);
  return integrate_adaptive(f, a, mid, abs_tol * 0.5, depth + 1) +
         integrate_adaptive(f, mid, b, abs_tol * 0.5, depth + 1);
}

}  // namespace pmflab::detail
