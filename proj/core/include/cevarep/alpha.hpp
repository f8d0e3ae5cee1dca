#pragma once

// Ratio coordinates of images along chords.
//
// For x, y with f(x) != f(y) and t > 0, alpha_{x,y}(t) is the positive number
// with
//   f(x/(1+t) + t y/(1+t)) = f(x)/(1+alpha) + alpha f(y)/(1+alpha).
// For maps sending open segments into open segments it satisfies
//   alpha_{x,y}(t) = 1 / alpha_{y,x}(1/t)                 (inverse law)
//   alpha_{x,y}(s t) = alpha_{x,z}(s) alpha_{z,y}(t)      (multiplicative law)
// and therefore alpha_{x,y}(t) = alpha_{x,y}(1) t^c, with c = 1 in the end.

#include "cevarep/geom.hpp"
#include "cevarep/oracle.hpp"

#include <span>
#include <utility>
#include <vector>

namespace cevarep {

/// Arguments of alpha are restricted to this range; beyond it the probe point
/// crowds a chord endpoint and the segment coordinate loses accuracy.
inline constexpr double kAlphaArgMin = 0x1.0p-6;
inline constexpr double kAlphaArgMax = 0x1.0p6;

struct AlphaSample {
    Vec x;
    Vec y;
    double t = 0.0;
    double alpha = 0.0;
    double residual = 0.0;  // orthogonal distance of f(probe) from the image chord
};

/// Probe point x/(1+t) + t y/(1+t).
Vec alpha_probe(const Vec& x, const Vec& y, double t);

/// Throws EqualImages when f(x) ~ f(y) and NotOnOpenSegment when the image of
/// the probe leaves the open chord ]f(x), f(y)[.
AlphaSample compute_alpha(const Oracle& o, const Vec& x, const Vec& y, double t,
                          const Tolerances& tol = {});

/// Same, with the endpoint images already evaluated.
AlphaSample compute_alpha(const Oracle& o, const Vec& x, const Vec& y, const Vec& fx,
                          const Vec& fy, double t, const Tolerances& tol = {});

struct LawReport {
    double max_log_residual = 0.0;
    bool pass = false;
    std::vector<double> residuals;  // one per tested argument
};

/// max over ts of |log alpha_{x,y}(t) + log alpha_{y,x}(1/t)|
LawReport check_inverse_law(const Oracle& o, const Vec& x, const Vec& y,
                            std::span<const double> ts, double law_tol,
                            const Tolerances& tol = {});

/// max over (s,t) of |log alpha_{x,y}(st) - log alpha_{x,z}(s) - log alpha_{z,y}(t)|.
/// Requires f(x), f(y), f(z) pairwise distinct (EqualImages otherwise).
LawReport check_multiplicative_law(const Oracle& o, const Vec& x, const Vec& y,
                                   const Vec& z,
                                   std::span<const std::pair<double, double>> pairs,
                                   double law_tol, const Tolerances& tol = {});

struct ExponentEstimate {
    double c_hat = 0.0;
    double intercept = 0.0;  // log alpha_{x,y}(1)
    double max_log_residual = 0.0;
    int sample_count = 0;
};

/// {2^k : k = -3..3}
std::vector<double> default_exponent_grid();

/// Ordinary least squares of log alpha against log t. The grid needs at least
/// five points spanning a factor of 16 (DegenerateGrid otherwise).
ExponentEstimate estimate_exponent(const Oracle& o, const Vec& x, const Vec& y,
                                   std::span<const double> t_grid,
                                   const Tolerances& tol = {});

/// Same fit on precomputed (t, alpha) samples.
ExponentEstimate fit_power_law(std::span<const AlphaSample> samples);

/// True when alpha is strictly increasing in t along the samples (sorted by t),
/// allowing inversions no larger than `slack` in log scale.
bool strictly_increasing(std::span<const AlphaSample> samples, double slack = 0.0);

}  // namespace cevarep
