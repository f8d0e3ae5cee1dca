#pragma once

// Dimension-generic linear-algebra substrate: vectors, affine maps and
// functionals, segment coordinates, collinearity and least-squares fitting.

#include <Eigen/Dense>

#include <algorithm>
#include <span>
#include <utility>
#include <vector>

namespace cevarep {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

struct Tolerances {
    double collinear = 1e-9;
    double eq = 1e-9;
    double rank = 1e-8;
    double fit = 1e-7;

    /// Throws InvalidArgument unless every field is strictly positive.
    void validate() const;
};

/// x -> matrix * x + offset
struct AffineMap {
    Mat matrix;
    Vec offset;

    Eigen::Index in_dim() const { return matrix.cols(); }
    Eigen::Index out_dim() const { return matrix.rows(); }
    Vec operator()(const Vec& x) const;
};

/// x -> <row, x> + offset
struct AffineFunctional {
    Vec row;
    double offset = 0.0;

    Eigen::Index dim() const { return row.size(); }
    double operator()(const Vec& x) const;
};

enum class Openness { open, closed };

struct Segment {
    Vec a;
    Vec b;
    Openness openness = Openness::closed;

    bool degenerate() const { return a == b; }
};

struct LineProjection {
    double coordinate;  // s with p ~ a + s (b - a)
    double residual;    // |p - a - s (b - a)|
};

struct FitReport {
    double max_residual = 0.0;
    double condition_number = 0.0;
};

struct ScalarFit {
    AffineFunctional functional;
    FitReport report;
};

struct VectorFit {
    AffineMap map;
    FitReport report;
};

/// Default cap on the design-matrix condition number accepted by the fitters.
inline constexpr double kDefaultConditionCap = 1e6;

/// Returns t*a + (1-t)*b. The parameter weights the first argument.
Vec convex_combine(const Vec& a, const Vec& b, double t);

/// max(1, |v_1|, ..., |v_k|)
template <class... Vs>
double scale_of(const Vs&... vs) {
    double s = 1.0;
    ((s = std::max(s, vs.norm())), ...);
    return s;
}

/// Orthogonal projection of p onto the line through a and b. Never throws on
/// off-line points; throws DegenerateEndpoints when a ~ b.
LineProjection project_onto_line(const Vec& a, const Vec& b, const Vec& p,
                                 const Tolerances& tol = {});

/// Weight on b of p along [a,b]: p ~ (1-s) a + s b. Throws NotOnLine when the
/// orthogonal residual exceeds tol.collinear * max(1, |b-a|).
double segment_coordinate(const Vec& a, const Vec& b, const Vec& p,
                          const Tolerances& tol = {});

/// True when |a - b| <= tol.eq * max(1, |a|, |b|).
bool approx_equal(const Vec& a, const Vec& b, const Tolerances& tol = {});

/// Second-largest singular value of [p_i - p_0], normalized by
/// max(1, max_i |p_i - p_0|). Positive values certify a nondegenerate triangle.
double noncollinearity_measure(std::span<const Vec> pts);

ScalarFit fit_affine_scalar(std::span<const std::pair<Vec, double>> samples,
                            double condition_cap = kDefaultConditionCap);

/// Componentwise least squares with one shared design matrix.
VectorFit fit_affine_vector(std::span<const std::pair<Vec, Vec>> samples,
                            double condition_cap = kDefaultConditionCap);

}  // namespace cevarep
