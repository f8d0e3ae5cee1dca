#include "cevarep/fracaffine.hpp"

#include "cevarep/error.hpp"
#include "cevarep/random.hpp"

#include <cmath>
#include <limits>
#include <string>

namespace cevarep {

FracAffineMap::FracAffineMap(AffineMap top, AffineFunctional bottom, Vec anchor)
    : top_(std::move(top)), bottom_(std::move(bottom)), anchor_(std::move(anchor)) {
    const auto n = top_.matrix.cols();
    const auto m = top_.matrix.rows();
    if (n < 1 || m < 1) fail(ErrorKind::DimensionMismatch, "dimensions must be positive");
    if (top_.offset.size() != m || bottom_.row.size() != n || anchor_.size() != n) {
        fail(ErrorKind::DimensionMismatch, "inconsistent fractional-affine shapes");
    }
    if (!top_.matrix.allFinite() || !top_.offset.allFinite() || !bottom_.row.allFinite() ||
        !std::isfinite(bottom_.offset) || !anchor_.allFinite()) {
        fail(ErrorKind::InvalidArgument, "non-finite fractional-affine entries");
    }
    const double at_anchor = bottom_(anchor_);
    if (!(at_anchor > 0.0)) {
        fail(ErrorKind::EmptyDomain, "denominator is not positive at the anchor");
    }
    // A representation that is already canonical up to the rounding of the
    // dot product is kept as is, so that stored maps reload bit for bit.
    const double magnitude = bottom_.row.cwiseProduct(anchor_).cwiseAbs().sum() + std::abs(bottom_.offset);
    const double slack = 4.0 * static_cast<double>(n + 1) * std::numeric_limits<double>::epsilon() * magnitude;
    if (std::abs(at_anchor - 1.0) <= slack) return;
    top_.matrix /= at_anchor;
    top_.offset /= at_anchor;
    bottom_.row /= at_anchor;
    bottom_.offset /= at_anchor;
}

FracAffineMap FracAffineMap::affine(AffineMap top) {
    const auto n = top.matrix.cols();
    return {std::move(top), AffineFunctional{Vec::Zero(n), 1.0}, Vec::Zero(n)};
}

FracAffineMap FracAffineMap::identity(Eigen::Index dim) {
    return affine(AffineMap{Mat::Identity(dim, dim), Vec::Zero(dim)});
}

bool FracAffineMap::in_domain(const Vec& x, const Tolerances& tol) const {
    return x.size() == in_dim() && bottom_(x) > tol.eq;
}

Vec FracAffineMap::eval(const Vec& x, const Tolerances& tol) const {
    const double den = bottom_(x);
    if (!(den > tol.eq)) {
        fail(ErrorKind::OutOfDomain,
             "denominator " + std::to_string(den) + " is not strictly positive");
    }
    return (top_.matrix * x + top_.offset) / den;
}

FracAffineMap FracAffineMap::normalized_at(const Vec& anchor) const {
    return {top_, bottom_, anchor};
}

double FracAffineMap::parameter_distance(const FracAffineMap& other) const {
    if (other.in_dim() != in_dim() || other.out_dim() != out_dim()) {
        fail(ErrorKind::DimensionMismatch, "parameter_distance: shapes differ");
    }
    double d = (top_.matrix - other.top_.matrix).cwiseAbs().maxCoeff();
    d = std::max(d, (top_.offset - other.top_.offset).cwiseAbs().maxCoeff());
    d = std::max(d, (bottom_.row - other.bottom_.row).cwiseAbs().maxCoeff());
    return std::max(d, std::abs(bottom_.offset - other.bottom_.offset));
}

Vec eval(const FracAffineMap& f, const Vec& x, const Tolerances& tol) {
    return f.eval(x, tol);
}

namespace {

std::pair<double, double> endpoint_denominators(const FracAffineMap& f, const Vec& x,
                                                const Vec& y, const Tolerances& tol) {
    if (!f.in_domain(x, tol) || !f.in_domain(y, tol)) {
        fail(ErrorKind::OutOfDomain, "segment endpoint outside the domain");
    }
    return {f.denominator(x), f.denominator(y)};
}

void require_open_unit(double v, const char* what) {
    if (!(v > 0.0 && v < 1.0)) {
        fail(ErrorKind::InvalidArgument, std::string(what) + " must lie in ]0,1[");
    }
}

}  // namespace

double lambda_reparam(const FracAffineMap& f, const Vec& x, const Vec& y, double t,
                      const Tolerances& tol) {
    require_open_unit(t, "t");
    const auto [bx, by] = endpoint_denominators(f, x, y, tol);
    return t * bx / (t * bx + (1.0 - t) * by);
}

double lambda_inverse(const FracAffineMap& f, const Vec& x, const Vec& y, double s,
                      const Tolerances& tol) {
    require_open_unit(s, "s");
    const auto [bx, by] = endpoint_denominators(f, x, y, tol);
    return s * by / (s * by + (1.0 - s) * bx);
}

FracAffineMap compose(const FracAffineMap& g, const FracAffineMap& f) {
    if (g.in_dim() != f.out_dim()) {
        fail(ErrorKind::DimensionMismatch, "compose: g expects dimension " +
                                               std::to_string(g.in_dim()) + ", f yields " +
                                               std::to_string(f.out_dim()));
    }
    const Mat& ag = g.top().matrix;
    const Vec& a_g = g.top().offset;
    const Vec& bg = g.bottom().row;
    const double b_g = g.bottom().offset;
    const Mat& af = f.top().matrix;
    const Vec& a_f = f.top().offset;
    const Vec& bf = f.bottom().row;
    const double b_f = f.bottom().offset;

    AffineMap top{ag * af + a_g * bf.transpose(), ag * a_f + a_g * b_f};
    AffineFunctional bottom{(bg.transpose() * af).transpose() + b_g * bf, bg.dot(a_f) + b_g * b_f};
    if (!(g.denominator(f.eval(f.anchor())) > 0.0)) {
        fail(ErrorKind::EmptyDomain, "composition is undefined at f's anchor");
    }
    return {std::move(top), std::move(bottom), f.anchor()};
}

FracAffineMap random_fracaffine(Eigen::Index n, Eigen::Index m, std::uint64_t seed,
                                double spread) {
    if (n < 1 || m < 1) fail(ErrorKind::InvalidArgument, "n and m must be at least 1");
    if (!(spread >= 0.0) || !std::isfinite(spread)) {
        fail(ErrorKind::InvalidArgument, "spread must be finite and non-negative");
    }
    Rng rng(seed);
    auto draw = [&] { return rng.uniform(-spread, spread); };
    AffineMap top{Mat(m, n), Vec(m)};
    for (Eigen::Index i = 0; i < m; ++i)
        for (Eigen::Index j = 0; j < n; ++j) top.matrix(i, j) = draw();
    for (Eigen::Index i = 0; i < m; ++i) top.offset[i] = draw();
    AffineFunctional bottom{Vec(n), 1.0};
    for (Eigen::Index j = 0; j < n; ++j) bottom.row[j] = draw();
    return {std::move(top), std::move(bottom), Vec::Zero(n)};
}

double min_denominator(const FracAffineMap& f, const Box& region) {
    if (region.dim() != f.in_dim()) {
        fail(ErrorKind::DimensionMismatch, "region dimension differs from map input");
    }
    const Vec center = region.center();
    const Vec half = 0.5 * (region.hi - region.lo);
    return f.denominator(center) - f.bottom().row.cwiseAbs().dot(half);
}

Box safe_region(const FracAffineMap& f, double max_half_width, double floor_fraction) {
    // denominator(anchor) == 1 by normalization
    const double slope = f.bottom().row.lpNorm<1>();
    double half = max_half_width;
    if (slope * half > 1.0 - floor_fraction) half = (1.0 - floor_fraction) / slope;
    return Box::around(f.anchor(), half);
}

Oracle as_oracle(const FracAffineMap& f, const Box& region, const Tolerances& tol) {
    region.validate();
    const double lowest = min_denominator(f, region);
    if (!(lowest > tol.eq)) {
        fail(ErrorKind::RegionEscapesDomain,
             "sampling region reaches denominator " + std::to_string(lowest));
    }
    Oracle o;
    o.name = "fracaffine";
    o.in_dim = f.in_dim();
    o.out_dim = f.out_dim();
    o.eval = [f, tol](const Vec& x) { return f.eval(x, tol); };
    o.in_domain = [f, tol](const Vec& x) { return f.in_domain(x, tol); };
    o.region = region;
    return o;
}

}  // namespace cevarep
