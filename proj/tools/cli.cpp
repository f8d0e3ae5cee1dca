#include "cli.hpp"

#include "cevarep/ceva.hpp"
#include "cevarep/certify.hpp"
#include "cevarep/error.hpp"
#include "cevarep/extract.hpp"
#include "cevarep/fracaffine.hpp"
#include "cevarep/json_io.hpp"
#include "cevarep/mapdsl.hpp"
#include "cevarep/version.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <charconv>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

namespace cevarep::cli {

namespace {

using json = nlohmann::ordered_json;

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) fail(ErrorKind::IoError, "cannot read '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) fail(ErrorKind::IoError, "cannot write '" + path + "'");
    out << text;
    if (!out) fail(ErrorKind::IoError, "write to '" + path + "' failed");
}

double parse_double(std::string_view s) {
    while (!s.empty() && s.front() == ' ') s.remove_prefix(1);
    while (!s.empty() && s.back() == ' ') s.remove_suffix(1);
    if (!s.empty() && s.front() == '+') s.remove_prefix(1);
    double v = 0.0;
    const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    if (s.empty() || res.ec != std::errc() || res.ptr != s.data() + s.size() || !std::isfinite(v)) {
        fail(ErrorKind::InvalidArgument, "not a number: '" + std::string(s) + "'");
    }
    return v;
}

std::vector<std::string_view> split(std::string_view s, char sep) {
    std::vector<std::string_view> parts;
    std::size_t start = 0;
    for (;;) {
        const auto pos = s.find(sep, start);
        parts.push_back(s.substr(start, pos - start));
        if (pos == std::string_view::npos) return parts;
        start = pos + 1;
    }
}

Vec parse_vec(std::string_view s) {
    const auto parts = split(s, ',');
    Vec v(static_cast<Eigen::Index>(parts.size()));
    for (std::size_t i = 0; i < parts.size(); ++i) v[static_cast<Eigen::Index>(i)] = parse_double(parts[i]);
    return v;
}

json vec_json(const Vec& v) {
    json out = json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(v[i]);
    return out;
}

void emit(std::ostream& out, const json& doc) { out << doc.dump(2) << '\n'; }

json header(const std::string& command) {
    return {{"tool_version", std::string(kToolVersion)}, {"command", command}};
}

// Where certify and extract get their oracle from.
struct SourceFlags {
    std::string map_path;
    std::string src;
    std::string zoo_name;
    std::string config_path;
    Eigen::Index zoo_n = 2;
    Eigen::Index zoo_m = 2;
    std::uint64_t zoo_seed = 0;
    std::string zoo_variant;
};

struct Resolved {
    Oracle oracle;
    json description;
};

void add_source_flags(CLI::App& cmd, SourceFlags& s) {
    auto* g = cmd.add_option_group("source", "exactly one map source");
    g->add_option("--map", s.map_path, "serialized fractional-affine map (JSON file)");
    g->add_option("--src", s.src, "map DSL text, or @FILE to read it from a file");
    g->add_option("--zoo", s.zoo_name, "builtin fixture name");
    g->add_option("--config", s.config_path, "JSON config with \"map_src\" and optional defaults");
    g->require_option(1);
    cmd.add_option("--zoo-n", s.zoo_n, "input dimension for --zoo")->check(CLI::PositiveNumber);
    cmd.add_option("--zoo-m", s.zoo_m, "output dimension for --zoo")->check(CLI::PositiveNumber);
    cmd.add_option("--zoo-seed", s.zoo_seed, "seed for random --zoo fixtures");
    cmd.add_option("--variant", s.zoo_variant, "fixture variant (embedded_monotone: affine|exp)");
}

Resolved oracle_from_dsl(const std::string& text, json description) {
    return {compile(parse_map_spec(text)), std::move(description)};
}

Resolved resolve(const SourceFlags& s, const json& config) {
    if (!s.map_path.empty()) {
        const auto f = map_from_json(read_file(s.map_path));
        return {as_oracle(f, safe_region(f)), {{"kind", "map"}, {"path", s.map_path}}};
    }
    if (!s.src.empty()) {
        if (s.src.front() == '@') {
            const auto path = s.src.substr(1);
            return oracle_from_dsl(read_file(path), {{"kind", "src"}, {"path", path}});
        }
        return oracle_from_dsl(s.src, {{"kind", "src"}, {"text", s.src}});
    }
    if (!s.zoo_name.empty()) {
        ZooParams p;
        p.n = s.zoo_n;
        p.m = s.zoo_m;
        p.seed = s.zoo_seed;
        p.variant = s.zoo_variant;
        json d = {{"kind", "zoo"}, {"name", s.zoo_name}, {"n", p.n}, {"m", p.m}, {"seed", p.seed}};
        if (!p.variant.empty()) d["variant"] = p.variant;
        return {zoo(s.zoo_name, p), d};
    }
    const auto it = config.find("map_src");
    if (it == config.end() || !it->is_string()) {
        fail(ErrorKind::InvalidArgument, "config needs a string \"map_src\"");
    }
    return oracle_from_dsl(it->get<std::string>(), {{"kind", "config"}, {"path", s.config_path}});
}

json load_config(const SourceFlags& s) {
    if (s.config_path.empty()) return json::object();
    try {
        json j = json::parse(read_file(s.config_path));
        if (!j.is_object()) fail(ErrorKind::InvalidArgument, "config must be a JSON object");
        return j;
    } catch (const json::parse_error& e) {
        fail(ErrorKind::SyntaxError, std::string("config: ") + e.what());
    }
}

// Flag given on the command line wins over the config file, which wins over
// the built-in default.
template <class T>
void apply(const CLI::App& cmd, const char* flag, const json& config, const char* key, T& value) {
    if (cmd.count(flag) > 0) return;
    const auto it = config.find(key);
    if (it == config.end()) return;
    try {
        value = it->get<T>();
    } catch (const json::exception&) {
        fail(ErrorKind::InvalidArgument, std::string("config field '") + key + "' has the wrong type");
    }
}

struct Options {
    // gen
    Eigen::Index n = 2;
    Eigen::Index m = 2;
    double spread = 1.0;
    // shared
    std::uint64_t seed = 0;
    std::string out_path;
    int trials = 1000;
    double tol_collinear = Tolerances{}.collinear;
    double tol_fit = Tolerances{}.fit;
    // eval
    std::string point;
    // extract
    int samples = 0;
    int base_trials = 100;
    // ceva
    std::string vertices;
    std::string weights;
    SourceFlags source;
};

int cmd_gen(const Options& o, std::ostream& out) {
    const auto f = random_fracaffine(o.n, o.m, o.seed, o.spread);
    const auto text = map_to_json(f, 2) + "\n";
    if (o.out_path.empty()) {
        out << text;
        return kPass;
    }
    write_file(o.out_path, text);
    json doc = header("gen");
    doc["seed"] = o.seed;
    doc["n"] = o.n;
    doc["m"] = o.m;
    doc["out"] = o.out_path;
    emit(out, doc);
    return kPass;
}

int cmd_eval(const Options& o, std::ostream& out) {
    const Vec x = parse_vec(o.point);
    Vec y;
    if (!o.source.map_path.empty()) {
        const auto f = map_from_json(read_file(o.source.map_path));
        if (x.size() != f.in_dim()) {
            fail(ErrorKind::DimensionMismatch, "point has dimension " + std::to_string(x.size()) +
                                                   ", map expects " + std::to_string(f.in_dim()));
        }
        y = f.eval(x);
    } else {
        const auto src = o.source.src.front() == '@' ? read_file(o.source.src.substr(1)) : o.source.src;
        const Oracle oracle = compile(parse_map_spec(src));
        if (x.size() != oracle.in_dim) fail(ErrorKind::DimensionMismatch, "point dimension differs from n");
        y = oracle.eval(x);
    }
    out << vec_json(y).dump() << '\n';
    return kPass;
}

Tolerances tolerances(const Options& o) {
    Tolerances tol;
    tol.collinear = o.tol_collinear;
    tol.fit = o.tol_fit;
    tol.validate();
    return tol;
}

int cmd_certify(const CLI::App& cmd, Options o, std::ostream& out) {
    const json config = load_config(o.source);
    apply(cmd, "--seed", config, "seed", o.seed);
    apply(cmd, "--trials", config, "trials", o.trials);
    apply(cmd, "--tol-collinear", config, "tol_collinear", o.tol_collinear);
    apply(cmd, "--tol-fit", config, "tol_fit", o.tol_fit);
    const auto src = resolve(o.source, config);

    CertifyConfig cfg;
    cfg.seed = o.seed;
    cfg.trials = o.trials;
    cfg.tol = tolerances(o);
    const auto report = certify(src.oracle, cfg);

    json doc = header("certify");
    doc["seed"] = o.seed;
    doc["trials"] = o.trials;
    doc["source"] = src.description;
    doc["report"] = json::parse(report_to_json(report));
    if (!o.out_path.empty()) write_file(o.out_path, doc.dump(2) + "\n");
    emit(out, doc);
    switch (report.verdict) {
        case Verdict::pass: return kPass;
        case Verdict::violated: return kViolated;
        case Verdict::inconclusive: return kRefused;
    }
    return kError;
}

int cmd_extract(const CLI::App& cmd, Options o, std::ostream& out) {
    const json config = load_config(o.source);
    apply(cmd, "--seed", config, "seed", o.seed);
    apply(cmd, "--samples", config, "samples", o.samples);
    apply(cmd, "--base-trials", config, "base_trials", o.base_trials);
    apply(cmd, "--tol-collinear", config, "tol_collinear", o.tol_collinear);
    apply(cmd, "--tol-fit", config, "tol_fit", o.tol_fit);
    const auto src = resolve(o.source, config);

    ExtractConfig cfg;
    cfg.seed = o.seed;
    cfg.sample_count = o.samples;
    cfg.base_trials = o.base_trials;
    cfg.tol = tolerances(o);
    const auto result = extract_representation(src.oracle, cfg);

    json doc = header("extract");
    doc["seed"] = o.seed;
    doc["trials"] = o.base_trials;
    doc["source"] = src.description;
    doc["result"] = json::parse(extract_to_json(result));
    if (!o.out_path.empty()) write_file(o.out_path, doc.dump(2) + "\n");
    emit(out, doc);
    return kPass;
}

int cmd_ceva(const Options& o, std::ostream& out) {
    const auto parts = split(o.vertices, ';');
    if (parts.size() != 3) fail(ErrorKind::InvalidArgument, "--vertices needs three points 'x;y;z'");
    const Vec x = parse_vec(parts[0]);
    const Vec y = parse_vec(parts[1]);
    const Vec z = parse_vec(parts[2]);
    const Vec wv = parse_vec(o.weights);
    if (wv.size() != 6) fail(ErrorKind::InvalidArgument, "--weights needs six values tx,ty,tz,sx,sy,sz");
    const CevaWeights w{wv[0], wv[1], wv[2], wv[3], wv[4], wv[5]};

    json doc = header("ceva");
    doc["vertices"] = {vec_json(x), vec_json(y), vec_json(z)};
    doc["weights"] = {w.t_x, w.t_y, w.t_z, w.s_x, w.s_y, w.s_z};
    try {
        const Vec p = ceva_point(x, y, z, w);
        const auto bary = ceva_barycentric(w);
        doc["point"] = vec_json(p);
        doc["barycentric"] = bary;
        emit(out, doc);
        return kPass;
    } catch (const Error& e) {
        if (e.kind() != ErrorKind::ConditionViolated) throw;
        doc["violation"] = {{"kind", to_string(e.kind())},
                            {"log_imbalance", w.log_imbalance()},
                            {"message", e.what()}};
        emit(out, doc);
        return kViolated;
    }
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Fractional-affine maps: certification, extraction and Ceva utilities", "cevarep"};
    app.require_subcommand(1);
    app.set_version_flag("--version", std::string(kToolVersion));
    Options o;

    auto* gen = app.add_subcommand("gen", "write a random fractional-affine map as JSON");
    gen->add_option("-n", o.n, "input dimension")->check(CLI::Range(1, 4096));
    gen->add_option("-m", o.m, "output dimension")->check(CLI::Range(1, 4096));
    gen->add_option("--seed", o.seed, "generator seed");
    gen->add_option("--spread", o.spread, "coefficient scale")->check(CLI::PositiveNumber);
    gen->add_option("-o,--out", o.out_path, "output file (stdout when omitted)");

    auto* ev = app.add_subcommand("eval", "evaluate a map at one point");
    {
        auto* g = ev->add_option_group("source", "exactly one map source");
        g->add_option("--map", o.source.map_path, "serialized map (JSON file)");
        g->add_option("--src", o.source.src, "map DSL text, or @FILE");
        g->require_option(1);
    }
    ev->add_option("--point", o.point, "comma-separated coordinates")->required();

    auto* cert = app.add_subcommand("certify", "test a map for segment preservation");
    add_source_flags(*cert, o.source);
    cert->add_option("--trials", o.trials, "number of random trials")->check(CLI::PositiveNumber);
    cert->add_option("--seed", o.seed, "random seed");
    cert->add_option("--tol-collinear", o.tol_collinear, "relative collinearity tolerance");
    cert->add_option("--tol-fit", o.tol_fit, "fit tolerance");
    cert->add_option("--out", o.out_path, "also write the report to this file");

    auto* ext = app.add_subcommand("extract", "recover (A x + a) / (<B, x> + b) from a black box");
    add_source_flags(*ext, o.source);
    ext->add_option("--seed", o.seed, "random seed");
    ext->add_option("--samples", o.samples, "points drawn for fit and validation (0: automatic)")
        ->check(CLI::NonNegativeNumber);
    ext->add_option("--base-trials", o.base_trials, "random triples tried for the base")
        ->check(CLI::PositiveNumber);
    ext->add_option("--tol-collinear", o.tol_collinear, "relative collinearity tolerance");
    ext->add_option("--tol-fit", o.tol_fit, "fit and validation tolerance");
    ext->add_option("--out", o.out_path, "also write the result to this file");

    auto* cv = app.add_subcommand("ceva", "intersection point of three cevians");
    cv->add_option("--vertices", o.vertices, "three points 'x1,x2;y1,y2;z1,z2'")->required();
    cv->add_option("--weights", o.weights, "tx,ty,tz,sx,sy,sz")->required();

    std::vector<const char*> argv{"cevarep"};
    for (const auto& a : args) argv.push_back(a.c_str());
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::ParseError& e) {
        // Help and --version are successes; CLI11 prints them to `out`.
        if (e.get_exit_code() == 0) {
            app.exit(e, out, err);
            return kPass;
        }
        err << "usage error: " << e.what() << '\n';
        emit(out, json{{"error", {{"kind", "UsageError"}, {"message", e.what()}}}});
        return kError;
    }

    try {
        if (gen->parsed()) return cmd_gen(o, out);
        if (ev->parsed()) return cmd_eval(o, out);
        if (cert->parsed()) return cmd_certify(*cert, o, out);
        if (ext->parsed()) return cmd_extract(*ext, o, out);
        if (cv->parsed()) return cmd_ceva(o, out);
    } catch (const Error& e) {
        if (e.kind() == ErrorKind::CollinearRange) {
            err << "refused: " << e.what() << '\n';
            out << error_to_json(e, 2) << '\n';
            return kRefused;
        }
        err << "error: " << e.what() << '\n';
        out << error_to_json(e, 2) << '\n';
        return kError;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        emit(out, json{{"error", {{"kind", "InternalError"}, {"message", e.what()}}}});
        return kError;
    }
    return kError;
}

}  // namespace cevarep::cli
