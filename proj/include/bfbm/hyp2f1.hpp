#pragma once

namespace bfbm {

// Gauss hypergeometric function for real arguments z < 1: direct power
// series for moderate |z|, Pfaff transformation for large negative z, and
// the 1-z connection formula when the transformed argument approaches 1.
double hyp2f1(double a, double b, double c, double z);

}  // namespace bfbm
