#pragma once

#include "miv/types.hpp"

namespace miv {

/// Minimal root-mean-square residual after aligning e onto z by translation,
/// orthogonal rotation/reflection and isotropic scaling.
double procrustes_error(const Matrix& e, const Matrix& z);

/// Principal angles (radians, ascending, in [0, pi/2]) between span(u) and
/// span(m); u has k columns, m at least k. Inputs are orthonormalized
/// internally and must have full column rank.
Vector principal_angles(const Matrix& u, const Matrix& m);

}  // namespace miv
