#pragma once

// Randomized certification of black-box maps.
//
// Each trial draws points from the oracle's region and tests
//   (i)   f(t x + (1-t) y) lies on the open chord ]f(x), f(y)[ (or equals
//         f(x) when f(x) = f(y)),
//   (ii)  the inverse law of alpha,
//   (iii) the multiplicative law of alpha,
//   (iv)  (periodically) that alpha follows t^c with c = 1.
// Only the inclusion f(]x,y[) within ]f(x),f(y)[ is testable from finitely
// many evaluations; surjectivity onto the chord is not certified here.

#include "cevarep/alpha.hpp"
#include "cevarep/geom.hpp"
#include "cevarep/oracle.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace cevarep {

enum class Verdict { pass, violated, inconclusive };

enum class WitnessKind { off_chord, outside_open, inverse_law, multiplicative_law, exponent };

std::string_view to_string(Verdict v) noexcept;
std::string_view to_string(WitnessKind k) noexcept;

struct Witness {
    WitnessKind kind = WitnessKind::off_chord;
    std::int64_t trial = 0;
    std::vector<Vec> points;
    std::vector<double> t_values;
    double residual = 0.0;
};

struct CertifyConfig {
    int trials = 1000;
    std::uint64_t seed = 0;
    Tolerances tol{};
    double law_tol = 1e-7;          // log-scale tolerance for the alpha laws
    double exponent_tol = 1e-6;
    double interior_delta = 1e-12;  // strict interior: coordinate in [delta, 1 - delta]
    /// Chords with |f(x) - f(y)| in (tol.eq, degenerate_band] * scale are too
    /// short to test reliably; such trials count as skipped.
    double degenerate_band = 1e-7;
    int exponent_every = 50;
    int max_exponent_estimates = 20;
    int max_witnesses = 16;
    double inconclusive_fraction = 0.5;
    unsigned threads = 0;  // 0: default_thread_count()
};

struct CertReport {
    Verdict verdict = Verdict::inconclusive;
    int trials = 0;
    int skipped = 0;
    int violations = 0;  // trials with a witness; witnesses holds the first few
    /// Whether a scan of random triples found non-collinear images. When false
    /// only the chord test and the inverse law apply.
    bool range_noncollinear = false;
    std::vector<Witness> witnesses;
    std::vector<ExponentEstimate> c_estimates;
    double ceva_max_log_residual = 0.0;
    double inverse_max_log_residual = 0.0;
};

/// Deterministic per (cfg.seed, trial index) regardless of thread count.
/// Throws OracleFailure when the oracle fails inside its own region.
CertReport certify(const Oracle& o, const CertifyConfig& cfg = {});

/// Recomputes a witness residual from its stored points and parameters only.
double reverify_witness(const Oracle& o, const Witness& w, const CertifyConfig& cfg = {});

struct ZooParams {
    Eigen::Index n = 2;
    Eigen::Index m = 2;
    std::uint64_t seed = 0;
    double spread = 1.0;
    std::string variant;  // embedded_monotone: "affine" (default) or "exp"
};

/// Builtin fixtures: identity, constant, random_affine, random_fracaffine,
/// scalar_moebius, embedded_monotone, parabola_bend, cubic_coords.
Oracle zoo(std::string_view name, const ZooParams& params = {});

std::vector<std::string> zoo_names();

}  // namespace cevarep
