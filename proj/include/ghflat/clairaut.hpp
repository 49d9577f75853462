#pragma once

#include <optional>

#include "ghflat/manifold.hpp"

namespace ghflat {

// Geodesic distance between (r1, 0) and (r2, dphi) on a rotationally
// symmetric metric via the Clairaut relation f(r)^2 phi' = c. Solves for the
// constant by bisection over the monotone-in-r branch and the single-turning-
// point branches, and always admits the radial/through-pole comparison paths.
// Returns nullopt when no branch matches (caller keeps the grid value).
// `upper_bound` prunes candidates that cannot be minimizing.
std::optional<double> clairaut_distance(const RotSymManifold& M, double r1, double r2,
                                        double dphi, double upper_bound);

}  // namespace ghflat
