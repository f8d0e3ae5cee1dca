#include "cevarep/error.hpp"
#include "cevarep/oracle.hpp"
#include "cevarep/parallel.hpp"
#include "cevarep/random.hpp"

#include <atomic>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

namespace cevarep {

std::string_view to_string(ErrorKind kind) noexcept {
    switch (kind) {
        case ErrorKind::InvalidArgument: return "InvalidArgument";
        case ErrorKind::DimensionMismatch: return "DimensionMismatch";
        case ErrorKind::NotOnLine: return "NotOnLine";
        case ErrorKind::DegenerateEndpoints: return "DegenerateEndpoints";
        case ErrorKind::RankDeficient: return "RankDeficient";
        case ErrorKind::OutOfDomain: return "OutOfDomain";
        case ErrorKind::EmptyDomain: return "EmptyDomain";
        case ErrorKind::RegionEscapesDomain: return "RegionEscapesDomain";
        case ErrorKind::CollinearVertices: return "CollinearVertices";
        case ErrorKind::ConditionViolated: return "ConditionViolated";
        case ErrorKind::EqualImages: return "EqualImages";
        case ErrorKind::NotOnOpenSegment: return "NotOnOpenSegment";
        case ErrorKind::DegenerateGrid: return "DegenerateGrid";
        case ErrorKind::CollinearRange: return "CollinearRange";
        case ErrorKind::BothBranchesDegenerate: return "BothBranchesDegenerate";
        case ErrorKind::ExponentMismatch: return "ExponentMismatch";
        case ErrorKind::ValidationFailed: return "ValidationFailed";
        case ErrorKind::PositivityViolated: return "PositivityViolated";
        case ErrorKind::OracleFailure: return "OracleFailure";
        case ErrorKind::UnknownName: return "UnknownName";
        case ErrorKind::SyntaxError: return "SyntaxError";
        case ErrorKind::UnknownIdentifier: return "UnknownIdentifier";
        case ErrorKind::ArityError: return "ArityError";
        case ErrorKind::IoError: return "IoError";
    }
    return "Unknown";
}

double Rng::log_uniform(double lo, double hi) {
    return std::exp(uniform(std::log(lo), std::log(hi)));
}

Box Box::cube(Eigen::Index dim, double lo, double hi) {
    return {Vec::Constant(dim, lo), Vec::Constant(dim, hi)};
}

Box Box::around(const Vec& center, double half_width) {
    return {center.array() - half_width, center.array() + half_width};
}

bool Box::contains(const Vec& x) const {
    return x.size() == dim() && (x.array() >= lo.array()).all() && (x.array() <= hi.array()).all();
}

Vec Box::sample(Rng& rng) const {
    Vec x(dim());
    for (Eigen::Index i = 0; i < dim(); ++i) x[i] = rng.uniform(lo[i], hi[i]);
    return x;
}

void Box::validate() const {
    if (lo.size() != hi.size() || lo.size() < 1) {
        fail(ErrorKind::DimensionMismatch, "box corners must share a positive dimension");
    }
    if (!lo.allFinite() || !hi.allFinite() || !(lo.array() <= hi.array()).all()) {
        fail(ErrorKind::InvalidArgument, "box corners must be finite with lo <= hi");
    }
}

Oracle guarded(const Oracle& o) {
    Oracle g = o;
    g.eval = [inner = o.eval](const Vec& x) -> Vec {
        Vec fx;
        try {
            fx = inner(x);
        } catch (const Error& e) {
            if (e.kind() != ErrorKind::OutOfDomain) throw;
            fail(ErrorKind::OracleFailure,
                 std::string("oracle failed inside its sampling region: ") + e.what());
        }
        if (!fx.allFinite()) fail(ErrorKind::OracleFailure, "oracle returned a non-finite value");
        return fx;
    };
    return g;
}

unsigned default_thread_count() {
    if (const char* env = std::getenv("CEVAREP_THREADS")) {
        char* end = nullptr;
        const long v = std::strtol(env, &end, 10);
        if (end != env && *end == '\0' && v > 0) return static_cast<unsigned>(v);
    }
    return std::max(1u, std::thread::hardware_concurrency());
}

void parallel_for(std::size_t count, unsigned threads,
                  const std::function<void(std::size_t)>& body) {
    const auto workers = static_cast<std::size_t>(std::max(1u, threads));
    if (workers == 1 || count < 2) {
        for (std::size_t i = 0; i < count; ++i) body(i);
        return;
    }
    // Indices are handed out in increasing order and in-flight bodies always
    // finish, so the smallest failing index is reported regardless of timing.
    std::atomic<std::size_t> next{0};
    std::exception_ptr first_error;
    std::size_t first_index = count;
    std::mutex error_mutex;
    auto run = [&] {
        for (std::size_t i = next++; i < count; i = next++) {
            try {
                body(i);
            } catch (...) {
                std::lock_guard lock(error_mutex);
                if (i < first_index) {
                    first_index = i;
                    first_error = std::current_exception();
                }
                next = count;
            }
        }
    };
    std::vector<std::jthread> pool;
    const auto spawn = std::min(workers, count) - 1;
    pool.reserve(spawn);
    for (std::size_t w = 0; w < spawn; ++w) pool.emplace_back(run);
    run();
    pool.clear();
    if (first_error) std::rethrow_exception(first_error);
}

}  // namespace cevarep
