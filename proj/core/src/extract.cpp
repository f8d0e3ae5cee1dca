#include "cevarep/extract.hpp"

#include "cevarep/error.hpp"
#include "cevarep/parallel.hpp"
#include "cevarep/random.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace cevarep {

namespace {

// Random streams derived from the user seed; distinct stages never share one.
enum Stream : std::uint64_t {
    kBaseStream = 1,
    kFitStream = 2,
    kHoldoutStream = 3,
    kConsistencyStream = 4,
};

double relative_error(const Vec& approx, const Vec& exact) {
    return (approx - exact).norm() / std::max(1.0, exact.norm());
}

}  // namespace

BaseTriple select_base_triple(const Oracle& o, int trials, std::uint64_t seed,
                              const Tolerances& tol) {
    if (trials < 1) fail(ErrorKind::InvalidArgument, "base triple search needs trials >= 1");
    BaseTriple best;
    best.image_noncollinearity = -1.0;
    for (int i = 0; i < trials; ++i) {
        Rng rng(mix64(seed) ^ kBaseStream, static_cast<std::uint64_t>(i));
        BaseTriple cand;
        cand.x0 = o.region.sample(rng);
        cand.y0 = o.region.sample(rng);
        cand.z0 = o.region.sample(rng);
        cand.fx0 = o.eval(cand.x0);
        cand.fy0 = o.eval(cand.y0);
        cand.fz0 = o.eval(cand.z0);
        const std::array<Vec, 3> images{cand.fx0, cand.fy0, cand.fz0};
        cand.image_noncollinearity = noncollinearity_measure(images);
        if (cand.image_noncollinearity > best.image_noncollinearity) best = std::move(cand);
    }
    if (!(best.image_noncollinearity > tol.rank)) {
        fail(ErrorKind::CollinearRange,
             "collinear range: the image of the sampling region appears to lie on a line "
             "(best non-collinearity " +
                 std::to_string(best.image_noncollinearity) +
                 "); such maps are characterized by monotonicity along the line instead");
    }
    return best;
}

double compute_phi(const Oracle& o, const BaseTriple& base, const Vec& x,
                   const Tolerances& tol) {
    return compute_phi(o, base, x, o.eval(x), tol);
}

double compute_phi(const Oracle& o, const BaseTriple& base, const Vec& x, const Vec& fx,
                   const Tolerances& tol) {
    // alpha_{x0,y0}(1) alpha_{y0,x0}(1) = 1 by the inverse law
    if (x == base.x0) return 1.0;
    if (!approx_equal(fx, base.fx0, tol)) {
        return compute_alpha(o, base.x0, x, base.fx0, fx, 1.0, tol).alpha;
    }
    if (approx_equal(fx, base.fy0, tol)) {
        fail(ErrorKind::BothBranchesDegenerate,
             "f(x) matches both f(x0) and f(y0) although they differ");
    }
    return compute_alpha(o, base.x0, base.y0, base.fx0, base.fy0, 1.0, tol).alpha *
           compute_alpha(o, base.y0, x, base.fy0, fx, 1.0, tol).alpha;
}

PhiTable build_phi_table(const Oracle& o, const BaseTriple& base, int sample_count,
                         std::uint64_t seed, const Tolerances& tol, unsigned threads) {
    const auto n = o.in_dim;
    if (sample_count < n + 2) {
        fail(ErrorKind::InvalidArgument,
             "phi table needs at least n + 2 = " + std::to_string(n + 2) + " samples");
    }
    PhiTable table;
    table.entries.resize(static_cast<std::size_t>(sample_count) + 1);
    table.entries[0] = {base.x0, 1.0, base.fx0};
    parallel_for(static_cast<std::size_t>(sample_count), threads, [&](std::size_t i) {
        Rng rng(seed, i);
        PhiEntry e;
        e.x = o.region.sample(rng);
        const Vec fx = o.eval(e.x);
        e.phi = compute_phi(o, base, e.x, fx, tol);
        e.phif = e.phi * fx;
        table.entries[i + 1] = std::move(e);
    });
    return table;
}

ExponentCheck verify_exponent_one(const Oracle& o, const BaseTriple& base,
                                  double exponent_tol, const Tolerances& tol) {
    const auto grid = default_exponent_grid();
    ExponentCheck check;
    check.per_pair[0] = estimate_exponent(o, base.x0, base.y0, grid, tol);
    check.per_pair[1] = estimate_exponent(o, base.x0, base.z0, grid, tol);
    check.per_pair[2] = estimate_exponent(o, base.z0, base.y0, grid, tol);
    double worst_residual = 0.0;
    for (const auto& e : check.per_pair) {
        check.c_hat += e.c_hat / 3.0;
        worst_residual = std::max(worst_residual, e.max_log_residual);
    }
    if (!(std::abs(check.c_hat - 1.0) <= exponent_tol && worst_residual <= exponent_tol)) {
        fail(ErrorKind::ExponentMismatch,
             "alpha does not follow a power law with exponent 1 (c_hat = " +
                 std::to_string(check.c_hat) +
                 ", power-law residual = " + std::to_string(worst_residual) + ")");
    }
    return check;
}

ExtractResult extract_representation(const Oracle& oracle, const ExtractConfig& cfg) {
    const Oracle o = guarded(oracle);
    cfg.tol.validate();
    o.region.validate();
    if (o.region.dim() != o.in_dim) {
        fail(ErrorKind::DimensionMismatch, "oracle region dimension differs from input");
    }
    const auto n = static_cast<int>(o.in_dim);
    const unsigned threads = cfg.threads ? cfg.threads : default_thread_count();
    const int total = cfg.sample_count > 0 ? cfg.sample_count : std::max(40, 8 * (n + 2));
    const int fit_count = (total * 7 + 9) / 10;
    const int holdout_count = total - fit_count;
    if (holdout_count < 1) fail(ErrorKind::InvalidArgument, "sample_count too small");

    ExtractResult result;
    result.base = select_base_triple(o, cfg.base_trials, cfg.seed, cfg.tol);
    const BaseTriple& base = result.base;

    // The exponent is verified and then taken to be exactly 1.
    const auto exponent = verify_exponent_one(o, base, cfg.exponent_tol, cfg.tol);
    result.c_hat = exponent.c_hat;
    result.exponent_estimates = exponent.per_pair;

    const auto table = build_phi_table(o, base, fit_count, mix64(cfg.seed) ^ kFitStream,
                                       cfg.tol, threads);
    std::vector<std::pair<Vec, double>> phi_samples;
    std::vector<std::pair<Vec, Vec>> phif_samples;
    for (const auto& e : table.entries) {
        phi_samples.emplace_back(e.x, e.phi);
        phif_samples.emplace_back(e.x, e.phif);
    }
    const auto phi_fit = fit_affine_scalar(phi_samples, cfg.condition_cap);
    const auto phif_fit = fit_affine_vector(phif_samples, cfg.condition_cap);
    result.fit_residual_phi = phi_fit.report.max_residual;
    result.fit_residual_phif = phif_fit.report.max_residual;
    result.fit_condition = phi_fit.report.condition_number;
    result.fit_points = static_cast<int>(table.entries.size());

    if (!(phi_fit.functional(base.x0) > 0.0)) {
        fail(ErrorKind::PositivityViolated, "fitted denominator is not positive at x0");
    }
    FracAffineMap map(phif_fit.map, phi_fit.functional, base.x0);

    for (const auto& e : table.entries) {
        if (!(map.denominator(e.x) > 0.0)) {
            fail(ErrorKind::PositivityViolated, "fitted denominator is not positive on a sample");
        }
    }

    // Held-out validation.
    std::vector<double> errors(static_cast<std::size_t>(holdout_count), 0.0);
    std::vector<char> positive(static_cast<std::size_t>(holdout_count), 1);
    const auto holdout_seed = mix64(cfg.seed) ^ kHoldoutStream;
    parallel_for(errors.size(), threads, [&](std::size_t i) {
        Rng rng(holdout_seed, i);
        const Vec x = o.region.sample(rng);
        if (!(map.denominator(x) > cfg.tol.eq)) {
            positive[i] = 0;
            return;
        }
        errors[i] = relative_error(map.eval(x, cfg.tol), o.eval(x));
    });
    if (std::find(positive.begin(), positive.end(), 0) != positive.end()) {
        fail(ErrorKind::PositivityViolated,
             "fitted denominator is not positive on a held-out point");
    }
    for (double e : errors) result.validation_sup_error = std::max(result.validation_sup_error, e);
    result.validation_points = holdout_count;

    // Three-point consistency with oracle-side phi (c = 1):
    // f((t x + s y + r z)/(t+s+r)) = (t phi f(x) + s phi f(y) + r phi f(z)) /
    //                                (t phi(x) + s phi(y) + r phi(z))
    std::vector<double> three_point(static_cast<std::size_t>(cfg.consistency_tuples), 0.0);
    std::vector<double> jensen(three_point.size(), 0.0);
    const auto consistency_seed = mix64(cfg.seed) ^ kConsistencyStream;
    parallel_for(three_point.size(), threads, [&](std::size_t i) {
        Rng rng(consistency_seed, i);
        const std::array<Vec, 3> pts{o.region.sample(rng), o.region.sample(rng),
                                     o.region.sample(rng)};
        const std::array<double, 3> w{rng.log_uniform(0.25, 4.0), rng.log_uniform(0.25, 4.0),
                                      rng.log_uniform(0.25, 4.0)};
        Vec num = Vec::Zero(o.out_dim);
        double den = 0.0;
        std::array<double, 3> phis{};
        for (std::size_t k = 0; k < 3; ++k) {
            const Vec fk = o.eval(pts[k]);
            phis[k] = compute_phi(o, base, pts[k], fk, cfg.tol);
            num += w[k] * phis[k] * fk;
            den += w[k] * phis[k];
        }
        const Vec mixed = (w[0] * pts[0] + w[1] * pts[1] + w[2] * pts[2]) / (w[0] + w[1] + w[2]);
        three_point[i] = relative_error(num / den, o.eval(mixed));

        const Vec mid = 0.5 * (pts[0] + pts[1]);
        const double phi_mid = compute_phi(o, base, mid, cfg.tol);
        jensen[i] = std::abs(phi_mid - 0.5 * (phis[0] + phis[1])) /
                    std::max({1.0, std::abs(phis[0]), std::abs(phis[1])});
    });
    for (double r : three_point) result.three_point_residual = std::max(result.three_point_residual, r);
    for (double r : jensen) result.phi_jensen_residual = std::max(result.phi_jensen_residual, r);

    result.map = std::move(map);
    if (result.validation_sup_error > cfg.tol.fit) {
        fail(ErrorKind::ValidationFailed,
             "held-out sup error " + std::to_string(result.validation_sup_error) +
                 " exceeds tolerance " + std::to_string(cfg.tol.fit));
    }
    if (result.three_point_residual > cfg.tol.fit) {
        fail(ErrorKind::ValidationFailed,
             "three-point consistency residual " + std::to_string(result.three_point_residual) +
                 " exceeds tolerance");
    }
    if (result.phi_jensen_residual > cfg.tol.fit) {
        fail(ErrorKind::ValidationFailed, "oracle-side phi is not midpoint-affine");
    }
    return result;
}

}  // namespace cevarep
