#include "cevarep/ceva.hpp"

#include "cevarep/error.hpp"

#include <cmath>
#include <string>

namespace cevarep {

void CevaWeights::validate() const {
    for (double v : {t_x, t_y, t_z, s_x, s_y, s_z}) {
        if (!(v > 0.0) || !std::isfinite(v)) {
            fail(ErrorKind::InvalidArgument,
                 "Ceva weights must be finite and positive, got " + std::to_string(v));
        }
    }
}

double CevaWeights::log_imbalance() const {
    return (std::log(t_x) + std::log(t_y) + std::log(t_z)) -
           (std::log(s_x) + std::log(s_y) + std::log(s_z));
}

namespace {

void require_triangle(const Vec& x, const Vec& y, const Vec& z, const Tolerances& tol) {
    if (x.size() != y.size() || x.size() != z.size()) {
        fail(ErrorKind::DimensionMismatch, "triangle vertices differ in dimension");
    }
    const std::array<Vec, 3> pts{x, y, z};
    if (noncollinearity_measure(pts) <= tol.rank) {
        fail(ErrorKind::CollinearVertices, "triangle vertices are collinear");
    }
}

}  // namespace

CevianPoints cevian_points(const Vec& x, const Vec& y, const Vec& z, const CevaWeights& w,
                           const Tolerances& tol) {
    w.validate();
    require_triangle(x, y, z, tol);
    CevianPoints out;
    out.p = (w.t_y / (w.t_y + w.s_z)) * y + (w.s_z / (w.t_y + w.s_z)) * z;
    out.q = (w.t_z / (w.t_z + w.s_x)) * z + (w.s_x / (w.t_z + w.s_x)) * x;
    out.r = (w.t_x / (w.t_x + w.s_y)) * x + (w.s_y / (w.t_x + w.s_y)) * y;
    return out;
}

bool ceva_condition(const CevaWeights& w, double tolerance) {
    w.validate();
    return std::abs(w.log_imbalance()) <= tolerance;
}

std::array<double, 3> ceva_barycentric(const CevaWeights& w) {
    // m_y / m_z = t_y / s_z, m_z / m_x = t_z / s_x, m_x / m_y = t_x / s_y
    const double mx = w.t_x * w.s_x;
    const double my = w.s_x * w.s_y;
    const double mz = w.t_x * w.t_z;
    const double total = mx + my + mz;
    return {mx / total, my / total, mz / total};
}

Vec ceva_point(const Vec& x, const Vec& y, const Vec& z, const CevaWeights& w,
               const Tolerances& tol, double condition_tol) {
    w.validate();
    require_triangle(x, y, z, tol);
    if (!ceva_condition(w, condition_tol)) {
        fail(ErrorKind::ConditionViolated,
             "t_x t_y t_z != s_x s_y s_z (log imbalance " + std::to_string(w.log_imbalance()) +
                 ")");
    }
    const auto [bx, by, bz] = ceva_barycentric(w);
    return bx * x + by * y + bz * z;
}

double distance_to_segment(const Vec& a, const Vec& b, const Vec& v) {
    const Vec dir = b - a;
    const double len2 = dir.squaredNorm();
    if (len2 == 0.0) return (v - a).norm();
    const double s = std::clamp((v - a).dot(dir) / len2, 0.0, 1.0);
    return (v - a - s * dir).norm();
}

std::optional<Vec> cevian_intersection_bruteforce(const Vec& x, const Vec& y, const Vec& z,
                                                  const CevaWeights& w,
                                                  const Tolerances& tol) {
    w.validate();
    require_triangle(x, y, z, tol);

    // Frame coordinates: x = (0,0), y = (1,0), z = (0,1).
    const Eigen::Vector2d fy(1.0, 0.0);
    const Eigen::Vector2d fz(0.0, 1.0);
    const Eigen::Vector2d fp(w.t_y / (w.t_y + w.s_z), w.s_z / (w.t_y + w.s_z));
    const Eigen::Vector2d fq(0.0, w.t_z / (w.t_z + w.s_x));
    const Eigen::Vector2d fr(w.s_y / (w.t_x + w.s_y), 0.0);

    // a fp = fy + b (fq - fy)
    Eigen::Matrix2d sys;
    sys.col(0) = fp;
    sys.col(1) = fy - fq;
    const Eigen::Vector2d ab = sys.fullPivLu().solve(fy);
    const Eigen::Vector2d hit = ab[0] * fp;

    // Parameter of the hit along z -> r, by projection in the frame.
    const Eigen::Vector2d zr = fr - fz;
    const double g = (hit - fz).dot(zr) / zr.squaredNorm();

    auto to_ambient = [&](const Eigen::Vector2d& c) -> Vec {
        return x + c[0] * (y - x) + c[1] * (z - x);
    };
    const Vec point = to_ambient(hit);
    const Vec r = to_ambient(fr);

    const double reach =
        std::max({1.0, (y - x).norm(), (z - x).norm(), (z - y).norm()});
    const double slack = tol.collinear;
    auto in_unit = [slack](double v) { return v >= -slack && v <= 1.0 + slack; };
    if (!in_unit(ab[0]) || !in_unit(ab[1]) || !in_unit(g)) return std::nullopt;
    if (distance_to_segment(z, r, point) > tol.collinear * reach) return std::nullopt;
    return point;
}

}  // namespace cevarep
