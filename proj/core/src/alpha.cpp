#include "cevarep/alpha.hpp"

#include "cevarep/error.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace cevarep {

Vec alpha_probe(const Vec& x, const Vec& y, double t) {
    return convex_combine(x, y, 1.0 / (1.0 + t));
}

AlphaSample compute_alpha(const Oracle& o, const Vec& x, const Vec& y, double t,
                          const Tolerances& tol) {
    return compute_alpha(o, x, y, o.eval(x), o.eval(y), t, tol);
}

AlphaSample compute_alpha(const Oracle& o, const Vec& x, const Vec& y, const Vec& fx,
                          const Vec& fy, double t, const Tolerances& tol) {
    if (!(t >= kAlphaArgMin && t <= kAlphaArgMax)) {
        fail(ErrorKind::InvalidArgument,
             "alpha argument " + std::to_string(t) + " outside [2^-6, 2^6]");
    }
    if (approx_equal(fx, fy, tol)) {
        fail(ErrorKind::EqualImages, "f(x) and f(y) coincide; alpha is undefined");
    }
    const Vec fm = o.eval(alpha_probe(x, y, t));
    const Vec chord = fy - fx;
    const double len2 = chord.squaredNorm();
    // Both weights are read off by projection from their own endpoint so the
    // ratio keeps full relative accuracy near either end of the chord.
    const double toward_y = (fm - fx).dot(chord);
    const double toward_x = (fy - fm).dot(chord);
    const double s = toward_y / len2;
    const double residual = (fm - fx - s * chord).norm();
    if (residual > tol.collinear * std::max(1.0, std::sqrt(len2))) {
        fail(ErrorKind::NotOnOpenSegment,
             "image of the probe point is off the chord by " + std::to_string(residual));
    }
    if (!(toward_y > 0.0 && toward_x > 0.0)) {
        fail(ErrorKind::NotOnOpenSegment,
             "image of the probe point lies outside the open chord (coordinate " +
                 std::to_string(s) + ")");
    }
    return {x, y, t, toward_y / toward_x, residual};
}

LawReport check_inverse_law(const Oracle& o, const Vec& x, const Vec& y,
                            std::span<const double> ts, double law_tol,
                            const Tolerances& tol) {
    const Vec fx = o.eval(x);
    const Vec fy = o.eval(y);
    LawReport report;
    for (double t : ts) {
        const double forward = compute_alpha(o, x, y, fx, fy, t, tol).alpha;
        const double backward = compute_alpha(o, y, x, fy, fx, 1.0 / t, tol).alpha;
        const double r = std::abs(std::log(forward) + std::log(backward));
        report.residuals.push_back(r);
        report.max_log_residual = std::max(report.max_log_residual, r);
    }
    report.pass = report.max_log_residual <= law_tol;
    return report;
}

LawReport check_multiplicative_law(const Oracle& o, const Vec& x, const Vec& y,
                                   const Vec& z,
                                   std::span<const std::pair<double, double>> pairs,
                                   double law_tol, const Tolerances& tol) {
    const Vec fx = o.eval(x);
    const Vec fy = o.eval(y);
    const Vec fz = o.eval(z);
    if (approx_equal(fx, fy, tol) || approx_equal(fy, fz, tol) || approx_equal(fx, fz, tol)) {
        fail(ErrorKind::EqualImages, "multiplicative law needs pairwise distinct images");
    }
    LawReport report;
    for (const auto& [s, t] : pairs) {
        const double xy = compute_alpha(o, x, y, fx, fy, s * t, tol).alpha;
        const double xz = compute_alpha(o, x, z, fx, fz, s, tol).alpha;
        const double zy = compute_alpha(o, z, y, fz, fy, t, tol).alpha;
        const double r = std::abs(std::log(xy) - std::log(xz) - std::log(zy));
        report.residuals.push_back(r);
        report.max_log_residual = std::max(report.max_log_residual, r);
    }
    report.pass = report.max_log_residual <= law_tol;
    return report;
}

std::vector<double> default_exponent_grid() {
    std::vector<double> grid;
    for (int k = -3; k <= 3; ++k) grid.push_back(std::ldexp(1.0, k));
    return grid;
}

ExponentEstimate fit_power_law(std::span<const AlphaSample> samples) {
    const auto count = samples.size();
    if (count < 2) fail(ErrorKind::DegenerateGrid, "power-law fit needs two samples");
    double mean_lt = 0.0, mean_la = 0.0;
    for (const auto& s : samples) {
        mean_lt += std::log(s.t);
        mean_la += std::log(s.alpha);
    }
    mean_lt /= static_cast<double>(count);
    mean_la /= static_cast<double>(count);
    double sxx = 0.0, sxy = 0.0;
    for (const auto& s : samples) {
        const double dx = std::log(s.t) - mean_lt;
        sxx += dx * dx;
        sxy += dx * (std::log(s.alpha) - mean_la);
    }
    if (!(sxx > 0.0)) fail(ErrorKind::DegenerateGrid, "grid has no spread in log t");

    ExponentEstimate est;
    est.c_hat = sxy / sxx;
    est.intercept = mean_la - est.c_hat * mean_lt;
    est.sample_count = static_cast<int>(count);
    for (const auto& s : samples) {
        const double fitted = est.intercept + est.c_hat * std::log(s.t);
        est.max_log_residual = std::max(est.max_log_residual, std::abs(std::log(s.alpha) - fitted));
    }
    return est;
}

ExponentEstimate estimate_exponent(const Oracle& o, const Vec& x, const Vec& y,
                                   std::span<const double> t_grid, const Tolerances& tol) {
    if (t_grid.size() < 5) fail(ErrorKind::DegenerateGrid, "exponent grid needs >= 5 points");
    const auto [lo, hi] = std::minmax_element(t_grid.begin(), t_grid.end());
    if (!(*lo > 0.0) || *hi / *lo < 16.0 * (1.0 - 1e-12)) {
        fail(ErrorKind::DegenerateGrid, "exponent grid must span a factor of at least 16");
    }
    const Vec fx = o.eval(x);
    const Vec fy = o.eval(y);
    std::vector<AlphaSample> samples;
    samples.reserve(t_grid.size());
    for (double t : t_grid) samples.push_back(compute_alpha(o, x, y, fx, fy, t, tol));
    return fit_power_law(samples);
}

bool strictly_increasing(std::span<const AlphaSample> samples, double slack) {
    std::vector<const AlphaSample*> sorted;
    for (const auto& s : samples) sorted.push_back(&s);
    std::sort(sorted.begin(), sorted.end(),
              [](const AlphaSample* a, const AlphaSample* b) { return a->t < b->t; });
    for (std::size_t i = 1; i < sorted.size(); ++i) {
        if (sorted[i]->t == sorted[i - 1]->t) continue;
        if (std::log(sorted[i]->alpha) - std::log(sorted[i - 1]->alpha) <= -slack) return false;
        if (slack == 0.0 && !(sorted[i]->alpha > sorted[i - 1]->alpha)) return false;
    }
    return true;
}

}  // namespace cevarep
