#include "cevarep/certify.hpp"
#include "cevarep/error.hpp"
#include "cevarep/fracaffine.hpp"
#include "cevarep/random.hpp"

#include <cmath>
#include <string>

namespace cevarep {

namespace {

Oracle make_oracle(std::string name, Eigen::Index n, Eigen::Index m, Box region,
                   std::function<Vec(const Vec&)> eval) {
    Oracle o;
    o.name = std::move(name);
    o.in_dim = n;
    o.out_dim = m;
    o.region = std::move(region);
    o.eval = std::move(eval);
    o.in_domain = [n](const Vec& x) { return x.size() == n && x.allFinite(); };
    return o;
}

Oracle from_map(std::string name, const FracAffineMap& f, const Box& region) {
    Oracle o = as_oracle(f, region);
    o.name = std::move(name);
    return o;
}

}  // namespace

std::vector<std::string> zoo_names() {
    return {"identity",       "constant",           "random_affine", "random_fracaffine",
            "scalar_moebius", "embedded_monotone", "parabola_bend", "cubic_coords"};
}

Oracle zoo(std::string_view name, const ZooParams& p) {
    if (p.n < 1 || p.m < 1) fail(ErrorKind::InvalidArgument, "zoo dimensions must be positive");

    if (name == "identity") {
        return from_map("identity", FracAffineMap::identity(p.n), Box::cube(p.n, -1.0, 1.0));
    }
    if (name == "constant") {
        Rng rng(p.seed);
        Vec value(p.m);
        for (Eigen::Index i = 0; i < p.m; ++i) value[i] = rng.uniform(-1.0, 1.0);
        return make_oracle("constant", p.n, p.m, Box::cube(p.n, -1.0, 1.0),
                           [value](const Vec&) { return value; });
    }
    if (name == "random_affine") {
        const auto g = random_fracaffine(p.n, p.m, p.seed, p.spread);
        return from_map("random_affine", FracAffineMap::affine(g.top()), Box::cube(p.n, -1.0, 1.0));
    }
    if (name == "random_fracaffine") {
        const auto f = random_fracaffine(p.n, p.m, p.seed, p.spread);
        return from_map("random_fracaffine", f, safe_region(f));
    }
    if (name == "scalar_moebius") {
        // (2x + 1) / (x + 2) on x > -2
        const FracAffineMap f(AffineMap{Mat::Constant(1, 1, 2.0), Vec::Constant(1, 1.0)},
                              AffineFunctional{Vec::Constant(1, 1.0), 2.0}, Vec::Zero(1));
        return from_map("scalar_moebius", f, Box::cube(1, -1.0, 1.0));
    }
    if (name == "embedded_monotone") {
        // x -> (x, g(x)); the range is collinear exactly when g is affine
        if (p.variant.empty() || p.variant == "affine") {
            return make_oracle("embedded_monotone", 1, 2, Box::cube(1, -1.0, 1.0), [](const Vec& x) {
                Vec out(2);
                out << x[0], 2.0 * x[0] + 1.0;
                return out;
            });
        }
        if (p.variant == "exp") {
            return make_oracle("embedded_monotone", 1, 2, Box::cube(1, -1.0, 1.0), [](const Vec& x) {
                Vec out(2);
                out << x[0], std::exp(x[0]);
                return out;
            });
        }
        fail(ErrorKind::UnknownName, "unknown embedded_monotone variant '" + p.variant + "'");
    }
    if (name == "parabola_bend") {
        return make_oracle("parabola_bend", 2, 2, Box::cube(2, -1.0, 1.0), [](const Vec& x) {
            if (x.size() != 2) fail(ErrorKind::DimensionMismatch, "parabola_bend expects 2 inputs");
            Vec out(2);
            out << x[0], x[1] + x[0] * x[0];
            return out;
        });
    }
    if (name == "cubic_coords") {
        return make_oracle("cubic_coords", 2, 2, Box::cube(2, 0.5, 2.0), [](const Vec& x) {
            if (x.size() != 2) fail(ErrorKind::DimensionMismatch, "cubic_coords expects 2 inputs");
            Vec out(2);
            out << x[0] * x[0] * x[0], x[1] * x[1] * x[1];
            return out;
        });
    }
    fail(ErrorKind::UnknownName, "unknown zoo map '" + std::string(name) + "'");
}

}  // namespace cevarep
