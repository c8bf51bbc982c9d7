#pragma once

#include "conic/core.hpp"

namespace conic {

struct Projection {
  double distance = 0.0;
  Vec nearest;
  Vec lambda;  // convex weights on the points
  Vec mu;      // nonnegative weights on the rays
};

enum class L2Method {
  active_set,         // finite primal active-set on (lambda, mu); default
  projected_gradient  // accelerated projected gradient with simplex projection
};

/// Nearest point of conv(points) + cone(rays) to x in the given norm.
Projection project_onto_vset(const Vec& x, const PointList& points, const PointList& rays,
                             NormId norm, const Tolerance& tol = default_tolerance(),
                             L2Method method = L2Method::active_set);

/// Euclidean projection onto the probability simplex.
Vec project_to_simplex(const Vec& v);

}  // namespace conic
