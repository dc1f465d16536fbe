#pragma once

#include "anholo/field.hpp"

namespace anholo {

struct Rect {
  double x1min = 0, x1max = 1, x2min = 0, x2max = 1;
};

struct PoissonStats {
  double residual = 0;  // max |L psi - f| of the discrete operator
  int unknowns = 0;
};

// psi_11 + psi_22 = 2 upsilon4 on the rectangle, psi = bc on the edges. Five-point
// stencil, sparse direct solve. The result is a grid field (second order).
ScalarField solve_psi(const ScalarField& upsilon4, const Rect& domain, const ScalarField& bc, int n1, int n2,
                      PoissonStats* stats = nullptr);

}  // namespace anholo
