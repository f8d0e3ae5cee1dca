#pragma once

// Recovery of a fractional-affine representation from oracle access.
//
// Pipeline: pick a base triple with non-collinear images; confirm that the
// alpha functions of the base pairs follow t^c with c = 1; tabulate the
// denominator function phi(x) = alpha_{x0,x}(1) and phi(x) f(x) over the
// sampling region; fit both as affine functions (they are affine for every
// map that sends open segments into open segments); assemble
// f = (phi f) / phi and validate on held-out points.

#include "cevarep/alpha.hpp"
#include "cevarep/fracaffine.hpp"
#include "cevarep/geom.hpp"
#include "cevarep/oracle.hpp"

#include <array>
#include <cstdint>
#include <optional>
#include <vector>

namespace cevarep {

struct BaseTriple {
    Vec x0, y0, z0;
    Vec fx0, fy0, fz0;
    double image_noncollinearity = 0.0;
};

struct PhiEntry {
    Vec x;
    double phi = 0.0;
    Vec phif;  // phi(x) * f(x)
};

struct PhiTable {
    std::vector<PhiEntry> entries;
};

struct ExponentCheck {
    double c_hat = 0.0;  // mean slope over the three base pairs
    std::array<ExponentEstimate, 3> per_pair;
};

struct ExtractConfig {
    std::uint64_t seed = 0;
    int base_trials = 100;
    /// Total points drawn for fitting plus validation; 0 selects
    /// max(40, 8 (n + 2)). 70% fit, 30% held out.
    int sample_count = 0;
    int consistency_tuples = 20;
    double exponent_tol = 1e-6;
    double condition_cap = kDefaultConditionCap;
    Tolerances tol{};
    unsigned threads = 0;  // 0: default_thread_count()
};

struct ExtractResult {
    std::optional<FracAffineMap> map;  // always set on success
    double c_hat = 0.0;
    std::array<ExponentEstimate, 3> exponent_estimates{};
    double fit_residual_phi = 0.0;
    double fit_residual_phif = 0.0;
    double fit_condition = 0.0;
    double validation_sup_error = 0.0;
    double three_point_residual = 0.0;
    double phi_jensen_residual = 0.0;
    int fit_points = 0;
    int validation_points = 0;
    BaseTriple base;
};

/// Best of `trials` random triples by image non-collinearity. Throws
/// CollinearRange when even the best triple has collinear images.
BaseTriple select_base_triple(const Oracle& o, int trials, std::uint64_t seed,
                              const Tolerances& tol = {});

/// phi(x) = alpha_{x0,x}(1) when f(x) != f(x0), otherwise
/// alpha_{x0,y0}(1) alpha_{y0,x}(1). phi(x0) is exactly 1.
double compute_phi(const Oracle& o, const BaseTriple& base, const Vec& x,
                   const Tolerances& tol = {});
double compute_phi(const Oracle& o, const BaseTriple& base, const Vec& x, const Vec& fx,
                   const Tolerances& tol = {});

/// x0 followed by `sample_count` region samples, each with phi and phi f.
PhiTable build_phi_table(const Oracle& o, const BaseTriple& base, int sample_count,
                         std::uint64_t seed, const Tolerances& tol = {},
                         unsigned threads = 1);

/// Exponent estimates on (x0,y0), (x0,z0), (z0,y0). Throws ExponentMismatch
/// unless |c - 1| <= exponent_tol and each power-law residual <= exponent_tol.
ExponentCheck verify_exponent_one(const Oracle& o, const BaseTriple& base,
                                  double exponent_tol, const Tolerances& tol = {});

ExtractResult extract_representation(const Oracle& o, const ExtractConfig& cfg = {});

}  // namespace cevarep
