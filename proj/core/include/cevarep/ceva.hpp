#pragma once

// Ceva's theorem for a triangle x, y, z with cevian feet
//   p = (t_y y + s_z z) / (t_y + s_z)   on ]y, z[
//   q = (t_z z + s_x x) / (t_z + s_x)   on ]z, x[
//   r = (t_x x + s_y y) / (t_x + s_y)   on ]x, y[
// The closed cevians [x,p], [y,q], [z,r] share a point iff
//   t_x t_y t_z = s_x s_y s_z.

#include "cevarep/geom.hpp"

#include <array>
#include <optional>

namespace cevarep {

struct CevaWeights {
    double t_x = 1.0, t_y = 1.0, t_z = 1.0;
    double s_x = 1.0, s_y = 1.0, s_z = 1.0;

    /// Throws InvalidArgument unless all six weights are finite and positive.
    void validate() const;
    /// log(t_x t_y t_z) - log(s_x s_y s_z), accumulated in the log domain.
    double log_imbalance() const;
};

struct CevianPoints {
    Vec p, q, r;
};

CevianPoints cevian_points(const Vec& x, const Vec& y, const Vec& z, const CevaWeights& w,
                           const Tolerances& tol = {});

/// |log(t_x t_y t_z) - log(s_x s_y s_z)| <= tolerance
bool ceva_condition(const CevaWeights& w, double tolerance);

/// Normalized barycentric weights (with respect to x, y, z) of the point where
/// the cevians meet. Derived from mass points: masses t_x s_x, s_x s_y, t_x t_z.
std::array<double, 3> ceva_barycentric(const CevaWeights& w);

/// The common point of the three cevians. Throws ConditionViolated when the
/// product condition fails at tolerance `condition_tol` and
/// CollinearVertices for degenerate triangles.
Vec ceva_point(const Vec& x, const Vec& y, const Vec& z, const CevaWeights& w,
               const Tolerances& tol = {}, double condition_tol = 1e-9);

/// Distance from v to the closed segment [a, b].
double distance_to_segment(const Vec& a, const Vec& b, const Vec& v);

/// Independent oracle: intersects the lines x-p and y-q in the triangle's own
/// planar frame (y-x, z-x) with a 2x2 solve, then accepts the point only if it
/// lies on [z,r] within tolerance and all three segment parameters are in
/// [0,1]. Returns nullopt when the cevians do not concur.
std::optional<Vec> cevian_intersection_bruteforce(const Vec& x, const Vec& y, const Vec& z,
                                                  const CevaWeights& w,
                                                  const Tolerances& tol = {});

}  // namespace cevarep
