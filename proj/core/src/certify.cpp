#include "cevarep/certify.hpp"

#include "cevarep/error.hpp"
#include "cevarep/extract.hpp"
#include "cevarep/parallel.hpp"
#include "cevarep/random.hpp"

#include <algorithm>
#include <cmath>
#include <optional>

namespace cevarep {

std::string_view to_string(Verdict v) noexcept {
    switch (v) {
        case Verdict::pass: return "pass";
        case Verdict::violated: return "violated";
        case Verdict::inconclusive: return "inconclusive";
    }
    return "inconclusive";
}

std::string_view to_string(WitnessKind k) noexcept {
    switch (k) {
        case WitnessKind::off_chord: return "off_chord";
        case WitnessKind::outside_open: return "outside_open";
        case WitnessKind::inverse_law: return "inverse_law";
        case WitnessKind::multiplicative_law: return "multiplicative_law";
        case WitnessKind::exponent: return "exponent";
    }
    return "off_chord";
}

namespace {

constexpr int kRangeScanTriples = 64;
constexpr std::uint64_t kRangeScanStream = 0x5ca9;

enum class ChordStatus { ok, equal_images, short_chord, violated };

struct ChordCheck {
    ChordStatus status = ChordStatus::ok;
    WitnessKind kind = WitnessKind::off_chord;
    double residual = 0.0;
};

// Image of t x + (1-t) y against the open chord ]f(x), f(y)[.
ChordCheck check_chord(const Oracle& o, const Vec& x, const Vec& y, const Vec& fx,
                       const Vec& fy, double t, const CertifyConfig& cfg) {
    const Vec fm = o.eval(convex_combine(x, y, t));
    const double scale = scale_of(fx, fy);
    const double gap = (fy - fx).norm();
    ChordCheck out;
    if (gap <= cfg.tol.eq * scale) {
        // ]a,a[ = {a}
        out.residual = (fm - fx).norm();
        out.status = out.residual > cfg.tol.collinear * scale ? ChordStatus::violated
                                                               : ChordStatus::equal_images;
        return out;
    }
    if (gap <= cfg.degenerate_band * scale) {
        out.status = ChordStatus::short_chord;
        return out;
    }
    const auto proj = project_onto_line(fx, fy, fm, cfg.tol);
    if (proj.residual > cfg.tol.collinear * std::max(1.0, gap)) {
        out.status = ChordStatus::violated;
        out.residual = proj.residual;
        return out;
    }
    const double lo = cfg.interior_delta;
    const double hi = 1.0 - cfg.interior_delta;
    if (!(proj.coordinate >= lo && proj.coordinate <= hi)) {
        out.status = ChordStatus::violated;
        out.kind = WitnessKind::outside_open;
        out.residual = std::max(lo - proj.coordinate, proj.coordinate - hi);
        if (!std::isfinite(out.residual)) out.residual = 1.0;
    }
    return out;
}

double inverse_residual(const Oracle& o, const Vec& x, const Vec& y, const Vec& fx,
                        const Vec& fy, double t, const Tolerances& tol) {
    return std::abs(std::log(compute_alpha(o, x, y, fx, fy, t, tol).alpha) +
                    std::log(compute_alpha(o, y, x, fy, fx, 1.0 / t, tol).alpha));
}

double multiplicative_residual(const Oracle& o, const Vec& x, const Vec& y, const Vec& z,
                               const Vec& fx, const Vec& fy, const Vec& fz, double s, double t,
                               const Tolerances& tol) {
    return std::abs(std::log(compute_alpha(o, x, y, fx, fy, s * t, tol).alpha) -
                    std::log(compute_alpha(o, x, z, fx, fz, s, tol).alpha) -
                    std::log(compute_alpha(o, z, y, fz, fy, t, tol).alpha));
}

double exponent_residual(const ExponentEstimate& e) {
    return std::max(e.max_log_residual, std::abs(e.c_hat - 1.0));
}

struct TrialOutcome {
    bool skipped = false;
    std::optional<Witness> witness;
    std::optional<double> inverse;
    std::optional<double> ceva;
    std::optional<ExponentEstimate> estimate;
};

struct ChordProbe {
    const Vec* a;
    const Vec* b;
    const Vec* fa;
    const Vec* fb;
    double t;
};

TrialOutcome run_trial(const Oracle& o, const CertifyConfig& cfg, std::size_t index,
                       bool range_noncollinear) {
    Rng rng(cfg.seed, index);
    const Vec x = o.region.sample(rng);
    const Vec y = o.region.sample(rng);
    const Vec z = o.region.sample(rng);
    const double t_chord = rng.uniform(0.01, 0.99);
    const double t_inv = rng.log_uniform(0.125, 8.0);
    const double s_mul = rng.log_uniform(0.25, 4.0);
    const double t_mul = rng.log_uniform(0.25, 4.0);

    TrialOutcome out;
    const auto trial = static_cast<std::int64_t>(index);
    const Vec fx = o.eval(x);
    const Vec fy = o.eval(y);

    // Runs chord checks; records the first violation. Returns false when the
    // trial must stop.
    auto chords_ok = [&](std::initializer_list<ChordProbe> probes, bool& equal) {
        for (const auto& p : probes) {
            const auto c = check_chord(o, *p.a, *p.b, *p.fa, *p.fb, p.t, cfg);
            switch (c.status) {
                case ChordStatus::violated:
                    out.witness = Witness{c.kind, trial, {*p.a, *p.b}, {p.t}, c.residual};
                    return false;
                case ChordStatus::short_chord:
                    out.skipped = true;
                    return false;
                case ChordStatus::equal_images:
                    equal = true;
                    break;
                case ChordStatus::ok:
                    break;
            }
        }
        return true;
    };
    auto probe = [](double tau) { return 1.0 / (1.0 + tau); };

    bool equal = false;
    if (!chords_ok({{&x, &y, &fx, &fy, t_chord}, {&x, &y, &fx, &fy, 0.5}}, equal)) return out;
    if (equal) return out;

    // Inverse law on (x, y).
    bool unused = false;
    if (!chords_ok({{&x, &y, &fx, &fy, probe(t_inv)}, {&y, &x, &fy, &fx, probe(1.0 / t_inv)}},
                   unused)) {
        return out;
    }
    const double inv = inverse_residual(o, x, y, fx, fy, t_inv, cfg.tol);
    out.inverse = inv;
    if (inv > cfg.law_tol) {
        out.witness = Witness{WitnessKind::inverse_law, trial, {x, y}, {t_inv}, inv};
        return out;
    }

    // The multiplicative and power laws rest on a non-collinear range; maps
    // onto a line are only bound by monotonicity.
    if (!range_noncollinear) return out;

    // Multiplicative law on (x, y, z) when the three images are well separated.
    const Vec fz = o.eval(z);
    const double band = cfg.degenerate_band;
    const bool separated = (fz - fx).norm() > band * scale_of(fx, fz) &&
                           (fz - fy).norm() > band * scale_of(fy, fz);
    if (separated) {
        if (!chords_ok({{&x, &y, &fx, &fy, probe(s_mul * t_mul)},
                        {&x, &z, &fx, &fz, probe(s_mul)},
                        {&z, &y, &fz, &fy, probe(t_mul)}},
                       unused)) {
            return out;
        }
        const double mul = multiplicative_residual(o, x, y, z, fx, fy, fz, s_mul, t_mul, cfg.tol);
        out.ceva = mul;
        if (mul > cfg.law_tol) {
            out.witness =
                Witness{WitnessKind::multiplicative_law, trial, {x, y, z}, {s_mul, t_mul}, mul};
            return out;
        }
    }

    // Periodic power-law check.
    const auto every = static_cast<std::size_t>(std::max(1, cfg.exponent_every));
    if (index % every == 0 &&
        index / every < static_cast<std::size_t>(std::max(0, cfg.max_exponent_estimates))) {
        const auto grid = default_exponent_grid();
        for (double tau : grid) {
            if (!chords_ok({{&x, &y, &fx, &fy, probe(tau)}}, unused)) return out;
        }
        const auto est = estimate_exponent(o, x, y, grid, cfg.tol);
        out.estimate = est;
        const double r = exponent_residual(est);
        if (r > cfg.exponent_tol) {
            out.witness = Witness{WitnessKind::exponent, trial, {x, y}, grid, r};
        }
    }
    return out;
}

}  // namespace

CertReport certify(const Oracle& oracle, const CertifyConfig& cfg) {
    if (cfg.trials < 1) fail(ErrorKind::InvalidArgument, "certify needs trials >= 1");
    cfg.tol.validate();
    oracle.region.validate();
    if (oracle.region.dim() != oracle.in_dim) {
        fail(ErrorKind::DimensionMismatch, "oracle region dimension differs from input");
    }
    const Oracle o = guarded(oracle);
    const unsigned threads = cfg.threads ? cfg.threads : default_thread_count();

    CertReport report;
    report.trials = cfg.trials;
    try {
        select_base_triple(o, kRangeScanTriples, mix64(cfg.seed) ^ kRangeScanStream, cfg.tol);
        report.range_noncollinear = true;
    } catch (const Error& e) {
        if (e.kind() != ErrorKind::CollinearRange) throw;
        report.range_noncollinear = false;
    }

    std::vector<TrialOutcome> outcomes(static_cast<std::size_t>(cfg.trials));
    parallel_for(outcomes.size(), threads, [&](std::size_t i) {
        outcomes[i] = run_trial(o, cfg, i, report.range_noncollinear);
    });

    // Fixed-order reduction.
    for (auto& t : outcomes) {
        if (t.skipped) ++report.skipped;
        if (t.inverse) report.inverse_max_log_residual = std::max(report.inverse_max_log_residual, *t.inverse);
        if (t.ceva) report.ceva_max_log_residual = std::max(report.ceva_max_log_residual, *t.ceva);
        if (t.estimate) report.c_estimates.push_back(*t.estimate);
        if (t.witness) {
            ++report.violations;
            if (static_cast<int>(report.witnesses.size()) < cfg.max_witnesses) {
                report.witnesses.push_back(std::move(*t.witness));
            }
        }
    }
    if (report.violations > 0) {
        report.verdict = Verdict::violated;
        if (report.witnesses.empty()) {
            // max_witnesses <= 0 still has to expose evidence
            for (auto& t : outcomes) {
                if (t.witness) {
                    report.witnesses.push_back(std::move(*t.witness));
                    break;
                }
            }
        }
    } else if (report.skipped > cfg.inconclusive_fraction * cfg.trials) {
        report.verdict = Verdict::inconclusive;
    } else {
        report.verdict = Verdict::pass;
    }
    return report;
}

double reverify_witness(const Oracle& oracle, const Witness& w, const CertifyConfig& cfg) {
    const Oracle o = guarded(oracle);
    auto need = [&](std::size_t points, std::size_t params) {
        if (w.points.size() != points || w.t_values.size() < params) {
            fail(ErrorKind::InvalidArgument, "witness has the wrong number of points or values");
        }
    };
    switch (w.kind) {
        case WitnessKind::off_chord:
        case WitnessKind::outside_open: {
            need(2, 1);
            const Vec fx = o.eval(w.points[0]);
            const Vec fy = o.eval(w.points[1]);
            return check_chord(o, w.points[0], w.points[1], fx, fy, w.t_values[0], cfg).residual;
        }
        case WitnessKind::inverse_law: {
            need(2, 1);
            return inverse_residual(o, w.points[0], w.points[1], o.eval(w.points[0]),
                                    o.eval(w.points[1]), w.t_values[0], cfg.tol);
        }
        case WitnessKind::multiplicative_law: {
            need(3, 2);
            return multiplicative_residual(o, w.points[0], w.points[1], w.points[2],
                                           o.eval(w.points[0]), o.eval(w.points[1]),
                                           o.eval(w.points[2]), w.t_values[0], w.t_values[1],
                                           cfg.tol);
        }
        case WitnessKind::exponent: {
            need(2, 5);
            return exponent_residual(
                estimate_exponent(o, w.points[0], w.points[1], w.t_values, cfg.tol));
        }
    }
    return 0.0;
}

}  // namespace cevarep
