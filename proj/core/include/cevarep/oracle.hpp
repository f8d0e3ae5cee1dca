#pragma once

#include "cevarep/geom.hpp"
#include "cevarep/random.hpp"

#include <functional>
#include <string>

namespace cevarep {

/// Axis-aligned sampling box [lo, hi].
struct Box {
    Vec lo;
    Vec hi;

    static Box cube(Eigen::Index dim, double lo, double hi);
    static Box around(const Vec& center, double half_width);

    Eigen::Index dim() const { return lo.size(); }
    Vec center() const { return 0.5 * (lo + hi); }
    bool contains(const Vec& x) const;
    Vec sample(Rng& rng) const;
    /// Throws InvalidArgument unless lo <= hi componentwise and all finite.
    void validate() const;
};

/// Black-box map D -> R^m. `eval` must be reentrant and free of side effects;
/// it may throw Error(OutOfDomain). `in_domain` is the membership test.
struct Oracle {
    std::string name;
    Eigen::Index in_dim = 0;
    Eigen::Index out_dim = 0;
    std::function<Vec(const Vec&)> eval;
    std::function<bool(const Vec&)> in_domain;
    Box region;

    Vec operator()(const Vec& x) const { return eval(x); }
};

/// Wraps eval so that OutOfDomain errors and non-finite outputs surface as
/// OracleFailure; used by pipelines that only query points inside the region.
Oracle guarded(const Oracle& o);

}  // namespace cevarep
