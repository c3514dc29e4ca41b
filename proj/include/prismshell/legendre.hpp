#pragma once

#include <cassert>

namespace prismshell {

struct LegendreValue {
  double value;
  double derivative;
};

/// Evaluate the Legendre polynomial L_ell and its derivative at s in [-1,1]
/// by the three-term recurrence
///   L_0 = 1,  L_1 = s,  (n+1) L_{n+1} = (2n+1) s L_n - n L_{n-1}.
inline LegendreValue legendre(int ell, double s) {
  assert(ell >= 0);
  if (ell == 0) return {1.0, 0.0};
  if (ell == 1) return {s, 1.0};
  double lm1 = 1.0, dm1 = 0.0; // L_{n-1}, L'_{n-1}
  double l = s, d = 1.0;       // L_n, L'_n
  for (int n = 1; n < ell; ++n) {
    const double a = (2.0 * n + 1.0) / (n + 1.0);
    const double b = static_cast<double>(n) / (n + 1.0);
    const double lp1 = a * s * l - b * lm1;
    const double dp1 = a * (l + s * d) - b * dm1;
    lm1 = l;
    dm1 = d;
    l = lp1;
    d = dp1;
  }
  return {l, d};
}

} // namespace prismshell
