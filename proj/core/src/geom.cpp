#include "cevarep/geom.hpp"

#include "cevarep/error.hpp"

#include <cmath>
#include <limits>
#include <string>

namespace cevarep {

void Tolerances::validate() const {
    if (!(collinear > 0.0 && eq > 0.0 && rank > 0.0 && fit > 0.0)) {
        fail(ErrorKind::InvalidArgument, "tolerances must be strictly positive");
    }
}

Vec AffineMap::operator()(const Vec& x) const {
    if (x.size() != matrix.cols()) {
        fail(ErrorKind::DimensionMismatch, "affine map expects dimension " +
                                               std::to_string(matrix.cols()));
    }
    return matrix * x + offset;
}

double AffineFunctional::operator()(const Vec& x) const {
    if (x.size() != row.size()) {
        fail(ErrorKind::DimensionMismatch,
             "affine functional expects dimension " + std::to_string(row.size()));
    }
    return row.dot(x) + offset;
}

Vec convex_combine(const Vec& a, const Vec& b, double t) {
    if (a.size() != b.size()) {
        fail(ErrorKind::DimensionMismatch, "convex_combine: endpoint dimensions differ");
    }
    if (!std::isfinite(t)) fail(ErrorKind::InvalidArgument, "convex_combine: t not finite");
    Vec out(a.size());
    for (Eigen::Index i = 0; i < a.size(); ++i) out[i] = t * a[i] + (1.0 - t) * b[i];
    return out;
}

bool approx_equal(const Vec& a, const Vec& b, const Tolerances& tol) {
    return (a - b).norm() <= tol.eq * scale_of(a, b);
}

LineProjection project_onto_line(const Vec& a, const Vec& b, const Vec& p,
                                 const Tolerances& tol) {
    if (a.size() != b.size() || a.size() != p.size()) {
        fail(ErrorKind::DimensionMismatch, "project_onto_line: dimensions differ");
    }
    const Vec dir = b - a;
    const double len2 = dir.squaredNorm();
    if (std::sqrt(len2) <= tol.eq * scale_of(a, b)) {
        fail(ErrorKind::DegenerateEndpoints, "segment endpoints coincide");
    }
    const Vec rel = p - a;
    const double s = rel.dot(dir) / len2;
    return {s, (rel - s * dir).norm()};
}

double segment_coordinate(const Vec& a, const Vec& b, const Vec& p, const Tolerances& tol) {
    const auto proj = project_onto_line(a, b, p, tol);
    if (proj.residual > tol.collinear * std::max(1.0, (b - a).norm())) {
        fail(ErrorKind::NotOnLine,
             "point is off the line by " + std::to_string(proj.residual));
    }
    return proj.coordinate;
}

double noncollinearity_measure(std::span<const Vec> pts) {
    if (pts.size() < 3) {
        fail(ErrorKind::InvalidArgument, "noncollinearity_measure needs at least 3 points");
    }
    const auto dim = pts[0].size();
    Mat cols(dim, static_cast<Eigen::Index>(pts.size() - 1));
    double reach = 1.0;
    for (std::size_t i = 1; i < pts.size(); ++i) {
        if (pts[i].size() != dim) {
            fail(ErrorKind::DimensionMismatch, "noncollinearity_measure: dimensions differ");
        }
        cols.col(static_cast<Eigen::Index>(i - 1)) = pts[i] - pts[0];
        reach = std::max(reach, cols.col(static_cast<Eigen::Index>(i - 1)).norm());
    }
    const Vec sv = Eigen::JacobiSVD<Mat>(cols).singularValues();
    if (sv.size() < 2) return 0.0;
    return sv[1] / reach;
}

namespace {

// Least squares on the mean-centered design [x - mean | 1], solved by SVD.
// Centering is a change of variables; the fitted affine function is the same.
struct CenteredSolve {
    Mat coef;  // (n+1) x k
    Vec mean;
    double condition;
};

CenteredSolve solve_centered(const Mat& xs, const Mat& ys, double condition_cap) {
    const auto count = xs.rows();
    const auto n = xs.cols();
    if (count < n + 1) {
        fail(ErrorKind::RankDeficient, "need at least " + std::to_string(n + 1) +
                                           " samples, got " + std::to_string(count));
    }
    CenteredSolve out;
    out.mean = xs.colwise().mean().transpose();
    Mat design(count, n + 1);
    design.leftCols(n) = xs.rowwise() - out.mean.transpose();
    design.col(n).setOnes();

    Eigen::JacobiSVD<Mat> svd(design, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const Vec& sv = svd.singularValues();
    const double smin = sv[sv.size() - 1];
    out.condition = smin > 0.0 ? sv[0] / smin : std::numeric_limits<double>::infinity();
    if (!(out.condition <= condition_cap)) {
        fail(ErrorKind::RankDeficient,
             "design matrix condition number " + std::to_string(out.condition) +
                 " exceeds cap " + std::to_string(condition_cap) +
                 " (sampling region too thin)");
    }
    out.coef = svd.solve(ys);
    return out;
}

}  // namespace

ScalarFit fit_affine_scalar(std::span<const std::pair<Vec, double>> samples,
                            double condition_cap) {
    if (samples.empty()) fail(ErrorKind::RankDeficient, "no samples");
    const auto n = samples[0].first.size();
    const auto count = static_cast<Eigen::Index>(samples.size());
    Mat xs(count, n);
    Mat ys(count, 1);
    for (Eigen::Index i = 0; i < count; ++i) {
        const auto& [x, y] = samples[static_cast<std::size_t>(i)];
        if (x.size() != n) fail(ErrorKind::DimensionMismatch, "fit: sample dimensions differ");
        xs.row(i) = x.transpose();
        ys(i, 0) = y;
    }
    const auto solved = solve_centered(xs, ys, condition_cap);

    ScalarFit fit;
    fit.functional.row = solved.coef.col(0).head(n);
    fit.functional.offset = solved.coef(n, 0) - fit.functional.row.dot(solved.mean);
    fit.report.condition_number = solved.condition;
    for (const auto& [x, y] : samples) {
        fit.report.max_residual =
            std::max(fit.report.max_residual, std::abs(fit.functional(x) - y));
    }
    return fit;
}

VectorFit fit_affine_vector(std::span<const std::pair<Vec, Vec>> samples,
                            double condition_cap) {
    if (samples.empty()) fail(ErrorKind::RankDeficient, "no samples");
    const auto n = samples[0].first.size();
    const auto m = samples[0].second.size();
    const auto count = static_cast<Eigen::Index>(samples.size());
    Mat xs(count, n);
    Mat ys(count, m);
    for (Eigen::Index i = 0; i < count; ++i) {
        const auto& [x, y] = samples[static_cast<std::size_t>(i)];
        if (x.size() != n || y.size() != m) {
            fail(ErrorKind::DimensionMismatch, "fit: sample dimensions differ");
        }
        xs.row(i) = x.transpose();
        ys.row(i) = y.transpose();
    }
    const auto solved = solve_centered(xs, ys, condition_cap);

    VectorFit fit;
    fit.map.matrix = solved.coef.topRows(n).transpose();
    fit.map.offset = solved.coef.row(n).transpose() - fit.map.matrix * solved.mean;
    fit.report.condition_number = solved.condition;
    for (const auto& [x, y] : samples) {
        fit.report.max_residual =
            std::max(fit.report.max_residual, (fit.map(x) - y).cwiseAbs().maxCoeff());
    }
    return fit;
}

}  // namespace cevarep
