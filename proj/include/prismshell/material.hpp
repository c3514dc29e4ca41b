#pragma once

#include "prismshell/core.hpp"

namespace prismshell {

/// St. Venant-Kirchhoff material parameters.
struct Material {
  double young = 1.0;
  double poisson = 0.0;

  Material() = default;
  Material(double e, double nu) : young(e), poisson(nu) {
    if (e <= 0.0) throw Error("Material: Young's modulus must be positive");
    if (nu <= -1.0 || nu >= 0.5) throw Error("Material: Poisson ratio out of range");
  }

  double lambda() const {
    return young * poisson / ((1.0 + poisson) * (1.0 - 2.0 * poisson));
  }
  double mu() const { return young / (2.0 * (1.0 + poisson)); }
};

} // namespace prismshell
