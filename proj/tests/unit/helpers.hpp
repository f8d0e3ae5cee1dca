#pragma once

#include "cevarep/error.hpp"
#include "cevarep/geom.hpp"
#include "cevarep/oracle.hpp"
#include "cevarep/random.hpp"

#include <doctest.h>

#include <functional>
#include <initializer_list>
#include <string>

namespace testing {

using cevarep::Vec;

inline Vec vec(std::initializer_list<double> v) {
    Vec out(static_cast<Eigen::Index>(v.size()));
    Eigen::Index i = 0;
    for (double x : v) out[i++] = x;
    return out;
}

inline Vec random_vec(cevarep::Rng& rng, Eigen::Index n, double lo = -1.0, double hi = 1.0) {
    Vec v(n);
    for (Eigen::Index i = 0; i < n; ++i) v[i] = rng.uniform(lo, hi);
    return v;
}

inline cevarep::Mat random_mat(cevarep::Rng& rng, Eigen::Index rows, Eigen::Index cols,
                               double lo = -1.0, double hi = 1.0) {
    cevarep::Mat m(rows, cols);
    for (Eigen::Index i = 0; i < rows; ++i)
        for (Eigen::Index j = 0; j < cols; ++j) m(i, j) = rng.uniform(lo, hi);
    return m;
}

inline cevarep::Oracle function_oracle(Eigen::Index n, Eigen::Index m, cevarep::Box region,
                                       std::function<Vec(const Vec&)> fn) {
    cevarep::Oracle o;
    o.name = "test";
    o.in_dim = n;
    o.out_dim = m;
    o.region = std::move(region);
    o.eval = std::move(fn);
    o.in_domain = [n](const Vec& x) { return x.size() == n; };
    return o;
}

inline double max_abs_diff(const Vec& a, const Vec& b) { return (a - b).cwiseAbs().maxCoeff(); }

}  // namespace testing

// Asserts that `expr` throws cevarep::Error of the given kind.
#define CHECK_ERROR_KIND(expr, expected_kind)                                          \
    do {                                                                               \
        bool threw_ = false;                                                           \
        try {                                                                          \
            (void)(expr);                                                              \
        } catch (const cevarep::Error& e_) {                                           \
            threw_ = true;                                                             \
            CHECK_MESSAGE(e_.kind() == (expected_kind), "got ", std::string(cevarep::to_string(e_.kind())), \
                          ": ", std::string(e_.what()));                                            \
        }                                                                              \
        CHECK_MESSAGE(threw_, "expected ", std::string(cevarep::to_string(expected_kind)));         \
    } while (false)
