#include "cevarep/json_io.hpp"

#include <json.hpp>

#include <cmath>

namespace cevarep {

namespace {

using json = nlohmann::ordered_json;

json vec_json(const Vec& v) {
    json out = json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(v[i]);
    return out;
}

// Non-finite diagnostics are written as null.
json scalar_json(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

[[noreturn]] void schema(const std::string& what) {
    fail(ErrorKind::InvalidArgument, "map JSON: " + what);
}

const json& field(const json& j, const char* key) {
    const auto it = j.find(key);
    if (it == j.end()) schema(std::string("missing field '") + key + "'");
    return *it;
}

double number(const json& j, const char* what) {
    if (!j.is_number()) schema(std::string(what) + " must be a number");
    return j.get<double>();
}

Eigen::Index dim(const json& j, const char* key) {
    const json& v = field(j, key);
    if (!v.is_number_integer() || v.get<long long>() < 1) {
        schema(std::string("'") + key + "' must be a positive integer");
    }
    return static_cast<Eigen::Index>(v.get<long long>());
}

Vec vec_from(const json& j, Eigen::Index size, const char* what) {
    if (!j.is_array() || static_cast<Eigen::Index>(j.size()) != size) {
        schema(std::string(what) + " must be an array of length " + std::to_string(size));
    }
    Vec out(size);
    for (Eigen::Index i = 0; i < size; ++i) out[i] = number(j[static_cast<std::size_t>(i)], what);
    return out;
}

json parse(std::string_view text) {
    try {
        return json::parse(text.begin(), text.end());
    } catch (const json::parse_error& e) {
        fail(ErrorKind::SyntaxError, std::string("invalid JSON: ") + e.what());
    }
}

std::string dump(const json& j, int indent) { return j.dump(indent < 0 ? -1 : indent); }

json witness_json(const Witness& w) {
    json pts = json::array();
    for (const auto& p : w.points) pts.push_back(vec_json(p));
    return {{"kind", to_string(w.kind)},
            {"trial", w.trial},
            {"points", pts},
            {"t_values", w.t_values},
            {"residual", scalar_json(w.residual)}};
}

json estimate_json(const ExponentEstimate& e) {
    return {{"c_hat", scalar_json(e.c_hat)},
            {"intercept", scalar_json(e.intercept)},
            {"max_log_residual", scalar_json(e.max_log_residual)},
            {"sample_count", e.sample_count}};
}

}  // namespace

std::string map_to_json(const FracAffineMap& f, int indent) {
    json A = json::array();
    for (Eigen::Index i = 0; i < f.out_dim(); ++i) {
        A.push_back(vec_json(f.top().matrix.row(i).transpose()));
    }
    const json j = {{"n", f.in_dim()},
                    {"m", f.out_dim()},
                    {"A", A},
                    {"a", vec_json(f.top().offset)},
                    {"B", vec_json(f.bottom().row)},
                    {"b", f.bottom().offset},
                    {"anchor", vec_json(f.anchor())}};
    return dump(j, indent);
}

FracAffineMap map_from_json(std::string_view text) {
    const json j = parse(text);
    if (!j.is_object()) schema("expected an object");
    const Eigen::Index n = dim(j, "n");
    const Eigen::Index m = dim(j, "m");
    const json& A = field(j, "A");
    if (!A.is_array() || static_cast<Eigen::Index>(A.size()) != m) {
        schema("'A' must have m rows");
    }
    Mat matrix(m, n);
    for (Eigen::Index i = 0; i < m; ++i) {
        matrix.row(i) = vec_from(A[static_cast<std::size_t>(i)], n, "row of 'A'").transpose();
    }
    const Vec a = vec_from(field(j, "a"), m, "'a'");
    const Vec B = vec_from(field(j, "B"), n, "'B'");
    const double b = number(field(j, "b"), "'b'");
    // Older files may omit the anchor; the origin is the natural default.
    const Vec anchor = j.contains("anchor") ? vec_from(j["anchor"], n, "'anchor'") : Vec::Zero(n);
    return FracAffineMap(AffineMap{matrix, a}, AffineFunctional{B, b}, anchor);
}

std::string witness_to_json(const Witness& w, int indent) { return dump(witness_json(w), indent); }

Witness witness_from_json(std::string_view text) {
    const json j = parse(text);
    if (!j.is_object()) schema("witness must be an object");
    Witness w;
    const json& kind_field = field(j, "kind");
    const json& trial_field = field(j, "trial");
    if (!kind_field.is_string()) schema("witness kind must be a string");
    if (!trial_field.is_number_integer()) schema("witness trial must be an integer");
    const auto kind = kind_field.get<std::string>();
    bool known = false;
    for (auto k : {WitnessKind::off_chord, WitnessKind::outside_open, WitnessKind::inverse_law,
                   WitnessKind::multiplicative_law, WitnessKind::exponent}) {
        if (to_string(k) == kind) {
            w.kind = k;
            known = true;
        }
    }
    if (!known) schema("unknown witness kind '" + kind + "'");
    w.trial = trial_field.get<std::int64_t>();
    if (!field(j, "points").is_array() || !field(j, "t_values").is_array()) {
        schema("witness points and t_values must be arrays");
    }
    for (const auto& p : field(j, "points")) {
        if (!p.is_array()) schema("witness points must be arrays");
        w.points.push_back(vec_from(p, static_cast<Eigen::Index>(p.size()), "witness point"));
    }
    for (const auto& t : field(j, "t_values")) w.t_values.push_back(number(t, "t value"));
    const json& r = field(j, "residual");
    w.residual = r.is_null() ? std::nan("") : number(r, "residual");
    return w;
}

std::string report_to_json(const CertReport& r, int indent) {
    json witnesses = json::array();
    for (const auto& w : r.witnesses) witnesses.push_back(witness_json(w));
    json estimates = json::array();
    for (const auto& e : r.c_estimates) estimates.push_back(estimate_json(e));
    const json j = {{"verdict", to_string(r.verdict)},
                    {"trials", r.trials},
                    {"skipped", r.skipped},
                    {"violations", r.violations},
                    {"range_noncollinear", r.range_noncollinear},
                    {"tested_direction", "inclusion"},
                    {"witnesses", witnesses},
                    {"c_estimates", estimates},
                    {"ceva_max_log_residual", scalar_json(r.ceva_max_log_residual)},
                    {"inverse_max_log_residual", scalar_json(r.inverse_max_log_residual)}};
    return dump(j, indent);
}

std::string extract_to_json(const ExtractResult& r, int indent) {
    json estimates = json::array();
    for (const auto& e : r.exponent_estimates) estimates.push_back(estimate_json(e));
    json j = {{"map", r.map ? json::parse(map_to_json(*r.map)) : json(nullptr)},
              {"c_hat", scalar_json(r.c_hat)},
              {"exponent_estimates", estimates},
              {"fit_residual_phi", scalar_json(r.fit_residual_phi)},
              {"fit_residual_phif", scalar_json(r.fit_residual_phif)},
              {"fit_condition", scalar_json(r.fit_condition)},
              {"validation_sup_error", scalar_json(r.validation_sup_error)},
              {"three_point_residual", scalar_json(r.three_point_residual)},
              {"phi_jensen_residual", scalar_json(r.phi_jensen_residual)},
              {"fit_points", r.fit_points},
              {"validation_points", r.validation_points},
              {"base",
               {{"x0", vec_json(r.base.x0)},
                {"y0", vec_json(r.base.y0)},
                {"z0", vec_json(r.base.z0)},
                {"image_noncollinearity", scalar_json(r.base.image_noncollinearity)}}}};
    return dump(j, indent);
}

std::string error_to_json(const Error& e, int indent) {
    json body = {{"kind", to_string(e.kind())}, {"message", e.what()}};
    if (const auto* pe = dynamic_cast<const ParseError*>(&e)) {
        body["line"] = pe->line();
        body["column"] = pe->column();
    }
    return dump(json{{"error", body}}, indent);
}

}  // namespace cevarep
