#pragma once

// Fractional-affine maps f(x) = (A x + a) / (<B, x> + b) on the open
// half-space {x : <B, x> + b > 0}.

#include "cevarep/geom.hpp"
#include "cevarep/oracle.hpp"

#include <cstdint>

namespace cevarep {

/// A fractional-affine map in canonical form.
///
/// The representation (A, a, B, b) is only determined up to a positive
/// factor, so the constructor rescales it such that the denominator equals 1
/// at a stored anchor point. The anchor also witnesses that the domain is
/// nonempty.
class FracAffineMap {
public:
    /// Throws DimensionMismatch on inconsistent shapes and EmptyDomain when the
    /// denominator is not positive at the anchor.
    FracAffineMap(AffineMap top, AffineFunctional bottom, Vec anchor);

    static FracAffineMap affine(AffineMap top);
    static FracAffineMap identity(Eigen::Index dim);

    const AffineMap& top() const { return top_; }
    const AffineFunctional& bottom() const { return bottom_; }
    const Vec& anchor() const { return anchor_; }
    Eigen::Index in_dim() const { return top_.in_dim(); }
    Eigen::Index out_dim() const { return top_.out_dim(); }

    double denominator(const Vec& x) const { return bottom_(x); }
    bool in_domain(const Vec& x, const Tolerances& tol = {}) const;

    /// Throws OutOfDomain unless denominator(x) > tol.eq.
    Vec eval(const Vec& x, const Tolerances& tol = {}) const;
    Vec operator()(const Vec& x) const { return eval(x); }

    /// Same map, rescaled so that the denominator is 1 at `anchor`.
    FracAffineMap normalized_at(const Vec& anchor) const;

    /// max |entry difference| over (A, a, B, b); both maps should share an anchor.
    double parameter_distance(const FracAffineMap& other) const;

private:
    AffineMap top_;
    AffineFunctional bottom_;
    Vec anchor_;
};

Vec eval(const FracAffineMap& f, const Vec& x, const Tolerances& tol = {});

/// lambda(t) = t bx / (t bx + (1-t) by) with bx, by the denominators at x, y.
/// Satisfies f(convex_combine(x,y,t)) = convex_combine(f(x), f(y), lambda(t)).
double lambda_reparam(const FracAffineMap& f, const Vec& x, const Vec& y, double t,
                      const Tolerances& tol = {});

/// Inverse of lambda_reparam on ]0,1[.
double lambda_inverse(const FracAffineMap& f, const Vec& x, const Vec& y, double s,
                      const Tolerances& tol = {});

/// g o f, renormalized at f's anchor.
FracAffineMap compose(const FracAffineMap& g, const FracAffineMap& f);

/// Entries of A, a, B uniform in [-spread, spread]; b = 1 and anchor at the
/// origin. Deterministic per seed.
FracAffineMap random_fracaffine(Eigen::Index n, Eigen::Index m, std::uint64_t seed,
                                double spread = 1.0);

/// Largest box around the anchor (half width at most `max_half_width`) on
/// which the denominator stays at least `floor_fraction` of its anchor value.
Box safe_region(const FracAffineMap& f, double max_half_width = 1.0,
                double floor_fraction = 0.5);

/// Exact minimum of the denominator over a box (attained at a corner).
double min_denominator(const FracAffineMap& f, const Box& region);

/// Throws RegionEscapesDomain unless min_denominator(f, region) > tol.eq.
Oracle as_oracle(const FracAffineMap& f, const Box& region, const Tolerances& tol = {});

}  // namespace cevarep
