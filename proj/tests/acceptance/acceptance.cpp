// Acceptance suite: one PASS/FAIL line per criterion, non-zero exit on any failure.
//
// Checks use formulas written out here (projections, distances, closed-form
// alpha) rather than the library helpers that implement the same thing.

#include "../../tools/cli.hpp"

#include "cevarep/alpha.hpp"
#include "cevarep/ceva.hpp"
#include "cevarep/certify.hpp"
#include "cevarep/error.hpp"
#include "cevarep/extract.hpp"
#include "cevarep/fracaffine.hpp"
#include "cevarep/geom.hpp"
#include "cevarep/random.hpp"

#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

using namespace cevarep;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
    return std::chrono::duration<double>(Clock::now() - start).count();
}

struct Outcome {
    bool pass = false;
    std::string detail;
};

std::string fmt(const char* f, auto... args) {
    char buf[512];
    std::snprintf(buf, sizeof buf, f, args...);
    return buf;
}

Vec random_point(Rng& rng, const Box& box) { return box.sample(rng); }

// Coordinate along [a, b] and orthogonal residual, from scratch.
std::pair<double, double> chord_coordinate(const Vec& a, const Vec& b, const Vec& p) {
    const Vec d = b - a;
    const Vec r = p - a;
    const double s = r.dot(d) / d.squaredNorm();
    return {s, (r - s * d).norm()};
}

double point_segment_distance(const Vec& a, const Vec& b, const Vec& p) {
    const Vec d = b - a;
    const double s = std::clamp((p - a).dot(d) / d.squaredNorm(), 0.0, 1.0);
    return (a + s * d - p).norm();
}

// alpha_{x,y}(t) = t * beta(y) / beta(x) for a fractional-affine map.
double closed_form_alpha(const FracAffineMap& f, const Vec& x, const Vec& y, double t) {
    return t * f.denominator(y) / f.denominator(x);
}

int run_cli(const std::vector<std::string>& args, std::string& out) {
    std::ostringstream o, e;
    const int code = cli::run(args, o, e);
    out = o.str();
    return code;
}

const std::array<std::pair<int, int>, 12> kShapes{{{1, 1}, {1, 2}, {1, 3}, {2, 1}, {2, 2}, {2, 3},
                                                   {3, 1}, {3, 2}, {3, 3}, {5, 1}, {5, 2}, {5, 3}}};

Outcome forward_property() {
    const auto start = Clock::now();
    double worst_residual = 0.0;
    double closest_endpoint = 1.0;
    long checked = 0, short_chords = 0;
    for (int k = 0; k < 50; ++k) {
        const auto [n, m] = kShapes[static_cast<std::size_t>(k) % kShapes.size()];
        const auto f = random_fracaffine(n, m, 1000 + static_cast<std::uint64_t>(k));
        const Box region = safe_region(f);
        Rng rng(static_cast<std::uint64_t>(k), 1);
        for (int i = 0; i < 1000; ++i) {
            const Vec x = random_point(rng, region);
            const Vec y = random_point(rng, region);
            const double t = rng.uniform(0.01, 0.99);
            const Vec fx = f.eval(x);
            const Vec fy = f.eval(y);
            const double scale = std::max({1.0, fx.norm(), fy.norm()});
            // Chords shorter than this carry no usable direction in double precision.
            if ((fy - fx).norm() <= 1e-7 * scale) {
                ++short_chords;
                continue;
            }
            const Vec fm = f.eval(t * x + (1.0 - t) * y);
            const auto [s, residual] = chord_coordinate(fx, fy, fm);
            worst_residual = std::max(worst_residual, residual / scale);
            closest_endpoint = std::min({closest_endpoint, s, 1.0 - s});
            ++checked;
        }
    }
    const double elapsed = seconds_since(start);
    const bool ok = worst_residual <= 1e-9 && closest_endpoint >= 1e-12 && elapsed <= 10.0 &&
                    short_chords * 100 < checked;
    return {ok, fmt("checked=%ld short=%ld max_rel_residual=%.3g min_interior=%.3g time=%.2fs",
                    checked, short_chords, worst_residual, closest_endpoint, elapsed)};
}

Outcome reverse_property() {
    double worst_round = 0.0, worst_surj = 0.0;
    for (int k = 0; k < 50; ++k) {
        const auto [n, m] = kShapes[static_cast<std::size_t>(k) % kShapes.size()];
        const auto f = random_fracaffine(n, m, 2000 + static_cast<std::uint64_t>(k));
        const Box region = safe_region(f);
        Rng rng(static_cast<std::uint64_t>(k), 2);
        const Vec x = random_point(rng, region);
        const Vec y = random_point(rng, region);
        const Vec fx = f.eval(x);
        const Vec fy = f.eval(y);
        for (int j = 1; j <= 99; ++j) {
            const double s = j / 100.0;
            const double t = lambda_inverse(f, x, y, s);
            worst_round = std::max(worst_round, std::abs(lambda_reparam(f, x, y, t) - s));
            const Vec lhs = s * fx + (1.0 - s) * fy;
            const Vec rhs = f.eval(t * x + (1.0 - t) * y);
            worst_surj = std::max(worst_surj, (lhs - rhs).norm() / std::max({1.0, lhs.norm(), rhs.norm()}));
        }
    }
    return {worst_round <= 1e-12 && worst_surj <= 1e-10,
            fmt("max_round_trip=%.3g max_rel_surjectivity=%.3g", worst_round, worst_surj)};
}

Outcome ceva_iff() {
    Rng rng(33);
    double worst_distance = 0.0;
    int tuples = 0, concurrent = 0, perturbed_empty = 0, perturbed = 0;
    while (tuples < 1000) {
        const Eigen::Index dim = 2 + tuples % 3;
        Vec x(dim), y(dim), z(dim);
        for (Eigen::Index i = 0; i < dim; ++i) {
            x[i] = rng.uniform(-1, 1);
            y[i] = rng.uniform(-1, 1);
            z[i] = rng.uniform(-1, 1);
        }
        const std::array pts{x, y, z};
        if (noncollinearity_measure(pts) < 1e-2) continue;
        ++tuples;
        CevaWeights w{rng.log_uniform(0.1, 10), rng.log_uniform(0.1, 10), rng.log_uniform(0.1, 10),
                      rng.log_uniform(0.1, 10), rng.log_uniform(0.1, 10), 1.0};
        // project onto the product condition by solving for s_z
        w.s_z = w.t_x * w.t_y * w.t_z / (w.s_x * w.s_y);
        // cevian feet from their defining coordinates
        const Vec p = (w.t_y * y + w.s_z * z) / (w.t_y + w.s_z);
        const Vec q = (w.t_z * z + w.s_x * x) / (w.t_z + w.s_x);
        const Vec r = (w.t_x * x + w.s_y * y) / (w.t_x + w.s_y);
        const auto hit = cevian_intersection_bruteforce(x, y, z, w);
        if (hit) {
            const double d = std::max({point_segment_distance(x, p, *hit), point_segment_distance(y, q, *hit),
                                       point_segment_distance(z, r, *hit)});
            worst_distance = std::max(worst_distance, d);
            const Vec c = ceva_point(x, y, z, w);
            worst_distance = std::max(worst_distance, (c - *hit).norm());
            if (d <= 1e-10) ++concurrent;
        }
        for (int which = 0; which < 6; ++which) {
            CevaWeights off = w;
            double* fields[] = {&off.t_x, &off.t_y, &off.t_z, &off.s_x, &off.s_y, &off.s_z};
            *fields[which] *= 1.01;
            ++perturbed;
            if (!cevian_intersection_bruteforce(x, y, z, off)) ++perturbed_empty;
        }
    }
    const Vec a = Vec::Zero(2);
    Vec b(2), c(2);
    b << 1, 0;
    c << 0, 1;
    const double centroid_error = (ceva_point(a, b, c, CevaWeights{}) - (a + b + c) / 3.0).norm();
    const bool ok = concurrent == tuples && perturbed_empty == perturbed && worst_distance <= 1e-10 &&
                    centroid_error <= 1e-12;
    return {ok, fmt("concurrent=%d/%d empty_after_perturbation=%d/%d max_distance=%.3g centroid_error=%.3g",
                    concurrent, tuples, perturbed_empty, perturbed, worst_distance, centroid_error)};
}

Outcome alpha_laws() {
    double worst_inverse = 0.0, worst_mul = 0.0, worst_closed = 0.0, worst_c = 0.0, worst_fit = 0.0;
    const std::vector<double> ts{0.125, 0.5, 1.0, 3.0, 8.0};
    const std::vector<std::pair<double, double>> pairs{{0.5, 2.0}, {2.0, 3.0}, {0.25, 0.5}, {4.0, 0.3}};
    for (int k = 0; k < 50; ++k) {
        const Eigen::Index n = 2 + k % 3;
        const Eigen::Index m = 2 + (k / 3) % 2;
        const auto f = random_fracaffine(n, m, 3000 + static_cast<std::uint64_t>(k));
        const Oracle o = as_oracle(f, safe_region(f));
        Rng rng(static_cast<std::uint64_t>(k), 4);
        const Vec x = o.region.sample(rng);
        const Vec y = o.region.sample(rng);
        const Vec z = o.region.sample(rng);
        worst_inverse = std::max(worst_inverse, check_inverse_law(o, x, y, ts, 1e-9).max_log_residual);
        worst_mul = std::max(worst_mul, check_multiplicative_law(o, x, y, z, pairs, 1e-9).max_log_residual);
        for (double t : ts) {
            const double a = compute_alpha(o, x, y, t).alpha;
            worst_closed = std::max(worst_closed, std::abs(std::log(a / closed_form_alpha(f, x, y, t))));
        }
        const auto est = estimate_exponent(o, x, y, default_exponent_grid());
        worst_c = std::max(worst_c, std::abs(est.c_hat - 1.0));
        worst_fit = std::max(worst_fit, est.max_log_residual);
    }
    const bool ok = worst_inverse <= 1e-9 && worst_mul <= 1e-9 && worst_closed <= 1e-9 &&
                    worst_c <= 1e-6 && worst_fit <= 1e-8;
    return {ok, fmt("inverse=%.3g multiplicative=%.3g closed_form=%.3g |c-1|=%.3g power_fit=%.3g",
                    worst_inverse, worst_mul, worst_closed, worst_c, worst_fit)};
}

Outcome round_trip_extraction() {
    double worst_param = 0.0, worst_validation = 0.0, slowest = 0.0;
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        const auto f = random_fracaffine(3, 2, seed);
        const Oracle o = as_oracle(f, safe_region(f));
        ExtractConfig cfg;
        cfg.seed = seed;
        const auto start = Clock::now();
        const auto r = extract_representation(o, cfg);
        slowest = std::max(slowest, seconds_since(start));
        worst_param = std::max(worst_param, r.map->parameter_distance(f.normalized_at(r.map->anchor())));
        // validation recomputed on fresh points
        Rng rng(seed, 5);
        for (int i = 0; i < 100; ++i) {
            const Vec x = o.region.sample(rng);
            const Vec want = f.eval(x);
            worst_validation = std::max(worst_validation,
                                        (r.map->eval(x) - want).norm() / std::max(1.0, want.norm()));
        }
        worst_validation = std::max(worst_validation, r.validation_sup_error);
    }
    return {worst_param <= 1e-6 && worst_validation <= 1e-7 && slowest <= 5.0,
            fmt("max_param_error=%.3g max_validation_error=%.3g slowest=%.3fs", worst_param,
                worst_validation, slowest)};
}

Outcome affine_corollary() {
    double worst = 0.0;
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        ZooParams p;
        p.n = 2 + static_cast<Eigen::Index>(seed % 4);
        p.m = 2 + static_cast<Eigen::Index>(seed % 2);
        p.seed = seed;
        ExtractConfig cfg;
        cfg.seed = seed;
        const auto r = extract_representation(zoo("random_affine", p), cfg);
        worst = std::max(worst, r.map->bottom().row.norm());
    }
    return {worst <= 1e-8, fmt("max_B_norm=%.3g over 20 affine oracles", worst)};
}

Outcome counterexamples() {
    int flagged = 0, reverified = 0, witnesses = 0;
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        CertifyConfig cfg;
        cfg.trials = 200;
        cfg.seed = seed;
        const Oracle o = zoo("parabola_bend");
        const auto r = certify(o, cfg);
        if (r.verdict != Verdict::violated || r.witnesses.empty()) continue;
        ++flagged;
        bool all = true;
        for (const auto& w : r.witnesses) {
            ++witnesses;
            // recompute the bend directly from the stored points
            const Vec& x = w.points[0];
            const Vec& y = w.points[1];
            const double t = w.t_values[0];
            auto para = [](const Vec& v) {
                Vec out(2);
                out << v[0], v[1] + v[0] * v[0];
                return out;
            };
            const auto [s, residual] = chord_coordinate(para(x), para(y), para(t * x + (1.0 - t) * y));
            (void)s;
            const bool ok = std::abs(residual - w.residual) <= 1e-12 &&
                            std::abs(reverify_witness(o, w, cfg) - w.residual) <= 1e-12 &&
                            residual > cfg.tol.collinear;
            all = all && ok;
        }
        if (all) ++reverified;
    }

    CertifyConfig cubic_cfg;
    const auto cubic = certify(zoo("cubic_coords"), cubic_cfg);
    bool cubic_kind = cubic.verdict == Verdict::violated;
    for (const auto& w : cubic.witnesses) {
        cubic_kind = cubic_kind && (w.kind == WitnessKind::off_chord || w.kind == WitnessKind::outside_open ||
                                    w.kind == WitnessKind::exponent);
    }

    std::string out;
    const int zoo_code = run_cli({"extract", "--zoo", "embedded_monotone"}, out);
    const int dsl_code = run_cli({"extract", "--src", "f1 := x1\nf2 := 0.5 - 3*x1"}, out);
    const int gen_code = [&] {
        std::string map_json;
        run_cli({"gen", "-n", "1", "-m", "2", "--seed", "3"}, map_json);
        char path[] = "/tmp/cevarep-acceptance-XXXXXX";
        const int fd = mkstemp(path);
        if (fd < 0) return -1;
        FILE* fp = fdopen(fd, "w");
        std::fputs(map_json.c_str(), fp);
        std::fclose(fp);
        const int code = run_cli({"extract", "--map", path}, out);
        std::remove(path);
        return code;
    }();
    const bool refusals = zoo_code == cli::kRefused && dsl_code == cli::kRefused && gen_code == cli::kRefused;

    const bool ok = flagged == 20 && reverified == 20 && cubic_kind && refusals;
    return {ok, fmt("parabola flagged=%d/20 reverified=%d/20 (witnesses=%d) cubic=%s refusal_exit_codes=%d,%d,%d",
                    flagged, reverified, witnesses, cubic_kind ? "violated" : "missed", zoo_code, dsl_code,
                    gen_code)};
}

Outcome conditioning_guard() {
    Rng rng(88);
    std::vector<std::pair<Vec, double>> scalar;
    std::vector<std::pair<Vec, Vec>> vector;
    for (int i = 0; i < 200; ++i) {
        Vec x(2);
        x << rng.uniform(0.0, 1.0), rng.uniform(0.0, 1e-8);
        scalar.emplace_back(x, 3.0 * x[0] - 7.0 * x[1] + 1.0);
        Vec v(2);
        v << x[0] + x[1], 2.0 - x[1];
        vector.emplace_back(x, v);
    }
    auto kind_of = [](const std::function<void()>& fn) -> std::string {
        try {
            fn();
        } catch (const Error& e) {
            return std::string(to_string(e.kind()));
        }
        return "no error";
    };
    const auto s = kind_of([&] { fit_affine_scalar(scalar); });
    const auto v = kind_of([&] { fit_affine_vector(vector); });
    return {s == "RankDeficient" && v == "RankDeficient",
            fmt("scalar fit: %s, vector fit: %s", s.c_str(), v.c_str())};
}

Outcome determinism() {
    const std::vector<std::vector<std::string>> commands{
        {"certify", "--zoo", "random_fracaffine", "--zoo-n", "3", "--zoo-m", "2", "--seed", "17", "--trials", "2000"},
        {"certify", "--zoo", "parabola_bend", "--seed", "4", "--trials", "1000"},
        {"certify", "--src", "f1 := (x1 + 2*x2)/(3 + x1)\nf2 := (1 - x2)/(3 + x1)", "--seed", "2"},
        {"extract", "--zoo", "random_fracaffine", "--zoo-n", "3", "--zoo-m", "2", "--seed", "11"},
        {"extract", "--src", "f1 := (x1 + 2*x2)/(3 + x1)\nf2 := (1 - x2)/(3 + x1)", "--seed", "5"},
    };
    const char* thread_settings[] = {nullptr, "1", "2", "3", "8", "16"};
    int identical = 0, total = 0;
    for (const auto& cmd : commands) {
        std::string reference;
        unsetenv("CEVAREP_THREADS");
        const int reference_code = run_cli(cmd, reference);
        for (const char* threads : thread_settings) {
            for (int rep = 0; rep < 2; ++rep) {
                if (threads) setenv("CEVAREP_THREADS", threads, 1);
                else unsetenv("CEVAREP_THREADS");
                std::string out;
                const int code = run_cli(cmd, out);
                ++total;
                if (out == reference && code == reference_code) ++identical;
            }
        }
    }
    unsetenv("CEVAREP_THREADS");
    return {identical == total, fmt("identical outputs=%d/%d", identical, total)};
}

}  // namespace

int main() {
    struct Criterion {
        const char* name;
        Outcome (*run)();
    };
    const Criterion criteria[] = {
        {"forward segment inclusion", forward_property},
        {"reverse property via lambda", reverse_property},
        {"ceva if and only if", ceva_iff},
        {"alpha laws and unit exponent", alpha_laws},
        {"round-trip extraction", round_trip_extraction},
        {"affine maps have zero B", affine_corollary},
        {"counterexample detection", counterexamples},
        {"conditioning guard", conditioning_guard},
        {"cli determinism", determinism},
    };
    int failures = 0;
    int index = 0;
    for (const auto& c : criteria) {
        ++index;
        Outcome out;
        try {
            out = c.run();
        } catch (const std::exception& e) {
            out = {false, std::string("exception: ") + e.what()};
        }
        if (!out.pass) ++failures;
        std::printf("%s [%d] %s: %s\n", out.pass ? "PASS" : "FAIL", index, c.name, out.detail.c_str());
        std::fflush(stdout);
    }
    std::printf("%d/%d criteria passed\n", index - failures, index);
    return failures == 0 ? EXIT_SUCCESS : EXIT_FAILURE;
}
