#include "helpers.hpp"

#include "cevarep/certify.hpp"
#include "cevarep/fracaffine.hpp"
#include "cevarep/json_io.hpp"

#include <algorithm>
#include <cmath>

using namespace cevarep;
using testing::function_oracle;
using testing::vec;

namespace {

Oracle fracaffine_oracle(Eigen::Index n, Eigen::Index m, std::uint64_t seed) {
    const auto f = random_fracaffine(n, m, seed);
    return as_oracle(f, safe_region(f));
}

// Off-chord distance of the parabola image of t x + (1-t) y, computed from
// scratch: f is (x1, x2 + x1^2), so the bend is t(1-t)(x1 - y1)^2 along e2
// before projection onto the chord normal.
double parabola_offset(const Vec& x, const Vec& y, double t) {
    const Vec fx = vec({x[0], x[1] + x[0] * x[0]});
    const Vec fy = vec({y[0], y[1] + y[0] * y[0]});
    const Vec m = t * x + (1.0 - t) * y;
    const Vec fm = vec({m[0], m[1] + m[0] * m[0]});
    const Vec d = (fy - fx).normalized();
    const Vec r = fm - fx;
    return (r - r.dot(d) * d).norm();
}

}  // namespace

TEST_SUITE("certify") {

TEST_CASE("fractional-affine maps pass") {
    CertifyConfig cfg;
    cfg.trials = 10000;
    cfg.seed = 1;
    const auto r = certify(zoo("random_fracaffine", {2, 2, 1, 1.0, ""}), cfg);
    CHECK(r.verdict == Verdict::pass);
    CHECK(r.violations == 0);
    CHECK(r.range_noncollinear);
    CHECK(r.ceva_max_log_residual <= 1e-9);
    CHECK(r.inverse_max_log_residual <= 1e-9);
    CHECK(r.trials == 10000);
    CHECK_FALSE(r.c_estimates.empty());
    for (const auto& e : r.c_estimates) CHECK(std::abs(e.c_hat - 1.0) <= 1e-6);
}

TEST_CASE("no false positives across seeds and shapes") {
    for (std::uint64_t seed = 0; seed < 50; ++seed) {
        CAPTURE(seed);
        const Eigen::Index n = 1 + static_cast<Eigen::Index>(seed % 4);
        const Eigen::Index m = 1 + static_cast<Eigen::Index>((seed / 4) % 3);
        CertifyConfig cfg;
        cfg.trials = 1000;
        cfg.seed = seed;
        const auto r = certify(fracaffine_oracle(n, m, seed), cfg);
        CHECK(r.verdict == Verdict::pass);
        CHECK(r.witnesses.empty());
    }
}

TEST_CASE("parabola example with seed 3") {
    CertifyConfig cfg;
    cfg.seed = 3;
    const auto o = zoo("parabola_bend");
    const auto r = certify(o, cfg);
    REQUIRE(r.verdict == Verdict::violated);
    REQUIRE_FALSE(r.witnesses.empty());
    const auto& w = r.witnesses.front();
    CHECK(w.kind == WitnessKind::off_chord);
    REQUIRE(w.points.size() == 2);
    CHECK(std::abs(w.residual - parabola_offset(w.points[0], w.points[1], w.t_values[0])) <=
          1e-12);
    CHECK(r.witnesses.size() <= 16);
    CHECK(r.violations >= static_cast<int>(r.witnesses.size()));
    CHECK(std::is_sorted(r.witnesses.begin(), r.witnesses.end(),
                         [](const Witness& a, const Witness& b) { return a.trial < b.trial; }));
}

TEST_CASE("parabola is detected within 200 trials for every seed") {
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        CAPTURE(seed);
        CertifyConfig cfg;
        cfg.trials = 200;
        cfg.seed = seed;
        const auto o = zoo("parabola_bend");
        const auto r = certify(o, cfg);
        REQUIRE(r.verdict == Verdict::violated);
        for (const auto& w : r.witnesses) {
            CHECK(std::abs(reverify_witness(o, w, cfg) - w.residual) <= 1e-12);
            CHECK(reverify_witness(o, w, cfg) > cfg.tol.collinear);
        }
    }
}

TEST_CASE("witnesses re-verify after a JSON round trip") {
    CertifyConfig cfg;
    cfg.seed = 9;
    for (const char* name : {"parabola_bend", "cubic_coords"}) {
        const auto o = zoo(name);
        const auto r = certify(o, cfg);
        REQUIRE(r.verdict == Verdict::violated);
        for (const auto& w : r.witnesses) {
            const Witness back = witness_from_json(witness_to_json(w));
            CHECK(std::abs(reverify_witness(o, back, cfg) - w.residual) <= 1e-12);
        }
    }
}

TEST_CASE("monotone maps onto a line pass") {
    // Every strictly monotone scalar map keeps chords, so only the chord test
    // and the inverse law apply and both hold.
    const auto o = function_oracle(1, 1, Box::cube(1, 0.5, 2.0), [](const Vec& x) {
        return vec({x[0] * x[0] * x[0]});
    });
    const auto r = certify(o);
    CHECK(r.verdict == Verdict::pass);
    CHECK_FALSE(r.range_noncollinear);
    CHECK(r.c_estimates.empty());
}

TEST_CASE("law witnesses recompute from stored values") {
    const auto o = fracaffine_oracle(2, 2, 5);
    Rng rng(8);
    const CertifyConfig cfg;
    for (int i = 0; i < 50; ++i) {
        Witness mul;
        mul.kind = WitnessKind::multiplicative_law;
        mul.points = {o.region.sample(rng), o.region.sample(rng), o.region.sample(rng)};
        mul.t_values = {rng.log_uniform(0.25, 4.0), rng.log_uniform(0.25, 4.0)};
        CHECK(reverify_witness(o, mul, cfg) <= 1e-9);

        Witness inv;
        inv.kind = WitnessKind::inverse_law;
        inv.points = {mul.points[0], mul.points[1]};
        inv.t_values = {mul.t_values[0]};
        CHECK(reverify_witness(o, inv, cfg) <= 1e-9);
    }

    // The exponent residual of a scalar cube is far from a unit power law.
    const auto cube = function_oracle(1, 1, Box::cube(1, 0.5, 2.0), [](const Vec& x) {
        return vec({x[0] * x[0] * x[0]});
    });
    Witness expo;
    expo.kind = WitnessKind::exponent;
    expo.points = {vec({0.5}), vec({2.0})};
    expo.t_values = default_exponent_grid();
    CHECK(reverify_witness(cube, expo, cfg) > 0.05);

    Witness bad;
    bad.kind = WitnessKind::multiplicative_law;
    bad.points = {vec({1.0})};
    CHECK_ERROR_KIND(reverify_witness(cube, bad, cfg), ErrorKind::InvalidArgument);
}

TEST_CASE("constant and degenerate maps") {
    const auto r = certify(zoo("constant", {3, 2, 4, 1.0, ""}));
    CHECK(r.verdict == Verdict::pass);
    CHECK_FALSE(r.range_noncollinear);

    // Tiny but nonzero variation lands in the degenerate band and is skipped.
    const auto flat = function_oracle(2, 1, Box::cube(2, -1.0, 1.0), [](const Vec& x) {
        return vec({1.0 + 1e-8 * x[0]});
    });
    const auto rf = certify(flat);
    CHECK(rf.verdict == Verdict::inconclusive);
    CHECK(rf.skipped > rf.trials / 2);
}

TEST_CASE("zoo fixtures") {
    const auto names = zoo_names();
    CHECK(names.size() == 8);
    for (const auto& name : names) {
        const auto o = zoo(name);
        CHECK(o.name == name);
        CHECK(o.region.dim() == o.in_dim);
        Rng rng(1);
        CHECK(o.eval(o.region.sample(rng)).size() == o.out_dim);
    }
    CHECK_ERROR_KIND(zoo("hyperbola"), ErrorKind::UnknownName);
    CHECK_ERROR_KIND(zoo("embedded_monotone", {1, 2, 0, 1.0, "sine"}), ErrorKind::UnknownName);
    CHECK_ERROR_KIND(zoo("identity", {0, 2, 0, 1.0, ""}), ErrorKind::InvalidArgument);

    CHECK(certify(zoo("identity")).verdict == Verdict::pass);
    CHECK(certify(zoo("random_affine", {3, 3, 2, 1.0, ""})).verdict == Verdict::pass);
    const auto moebius = zoo("scalar_moebius");
    CHECK(std::abs(moebius.eval(vec({0.5}))[0] - 0.8) <= 1e-15);
    CHECK(certify(moebius).verdict == Verdict::pass);
}

TEST_CASE("curves through the plane are caught, lines are not") {
    const auto line = certify(zoo("embedded_monotone"));
    CHECK(line.verdict == Verdict::pass);
    CHECK_FALSE(line.range_noncollinear);
    CHECK(certify(zoo("embedded_monotone", {1, 2, 0, 1.0, "exp"})).verdict == Verdict::violated);
    CHECK(certify(zoo("cubic_coords")).verdict == Verdict::violated);
}

TEST_CASE("reports are identical across thread counts") {
    for (const char* name : {"random_fracaffine", "parabola_bend", "cubic_coords"}) {
        CertifyConfig cfg;
        cfg.trials = 500;
        cfg.seed = 12;
        cfg.threads = 1;
        const auto o = zoo(name);
        const auto one = report_to_json(certify(o, cfg));
        cfg.threads = 7;
        CHECK(report_to_json(certify(o, cfg)) == one);
        cfg.threads = 1;
        CHECK(report_to_json(certify(o, cfg)) == one);
    }
}

TEST_CASE("random fractional-affine seed 1 passes 1e4 trials") {
    CertifyConfig cfg;
    cfg.trials = 10000;
    const auto r = certify(fracaffine_oracle(3, 2, 1), cfg);
    CHECK(r.verdict == Verdict::pass);
    CHECK(r.ceva_max_log_residual <= 1e-9);
}

TEST_CASE("oracle failures inside the region are errors") {
    const auto bad = function_oracle(2, 2, Box::cube(2, -1.0, 1.0), [](const Vec& x) {
        if (x[0] > 0.9) fail(ErrorKind::OutOfDomain, "hole");
        return x;
    });
    CHECK_ERROR_KIND(certify(bad), ErrorKind::OracleFailure);
    CertifyConfig cfg;
    cfg.trials = 0;
    CHECK_ERROR_KIND(certify(zoo("identity"), cfg), ErrorKind::InvalidArgument);
}

TEST_CASE("verdict and witness kind names") {
    CHECK(to_string(Verdict::inconclusive) == "inconclusive");
    CHECK(to_string(WitnessKind::multiplicative_law) == "multiplicative_law");
}

}
