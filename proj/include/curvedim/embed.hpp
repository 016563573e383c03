#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "curvedim/frechet.hpp"
#include "curvedim/geometry.hpp"
#include "curvedim/parallel.hpp"

namespace curvedim {

// Dense linear map R^d -> R^d', row-major matrix. Gaussian maps are sampled
// deterministically from the seed; identity maps are used when no dimension
// reduction is possible.
struct LinearMap {
    std::size_t rows = 0;  // d'
    std::size_t cols = 0;  // d
    std::uint64_t seed = 0;
    std::string scheme = "gaussian";
    std::vector<double> m;  // rows * cols, row-major

    Point apply(const Point& p) const {
        if (p.size() != cols) throw DimensionMismatch("LinearMap::apply: dimension mismatch");
        Point out(rows, 0.0);
        for (std::size_t r = 0; r < rows; ++r) {
            const double* row = &m[r * cols];
            double s = 0.0;
            for (std::size_t c = 0; c < cols; ++c) s += row[c] * p[c];
            out[r] = s;
        }
        return out;
    }

    static LinearMap identity(std::size_t d) {
        LinearMap f;
        f.rows = f.cols = d;
        f.scheme = "identity";
        f.m.assign(d * d, 0.0);
        for (std::size_t i = 0; i < d; ++i) f.m[i * d + i] = 1.0;
        return f;
    }
};

// Target dimension of the standard Gaussian JL bound: pairwise guarantee
// holds with probability >= 1 - n^(-beta).
inline int target_dimension(double eps, std::size_t n_points, double beta = 2.0) {
    if (!(eps > 0.0 && eps < 1.0)) throw ParamOutOfRange("target_dimension: eps must be in (0,1)");
    if (n_points < 2) throw ParamOutOfRange("target_dimension: need at least 2 points");
    if (beta < 1.0) throw ParamOutOfRange("target_dimension: beta must be >= 1");
    const double denom = eps * eps / 2.0 - eps * eps * eps / 3.0;
    return static_cast<int>(std::ceil((4.0 + 2.0 * beta) * std::log(static_cast<double>(n_points)) / denom));
}

namespace detail {

// Deterministic standard normals: Box-Muller over mt19937_64, so sampling is
// reproducible independent of the standard library's normal_distribution.
class GaussianStream {
  public:
    explicit GaussianStream(std::uint64_t seed) : rng_(seed) {}

    double next() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        double u1 = 0.0;
        do {
            u1 = uniform01();
        } while (u1 <= 0.0);
        const double u2 = uniform01();
        const double mag = std::sqrt(-2.0 * std::log(u1));
        spare_ = mag * std::sin(2.0 * M_PI * u2);
        have_spare_ = true;
        return mag * std::cos(2.0 * M_PI * u2);
    }

  private:
    double uniform01() { return static_cast<double>(rng_() >> 11) * 0x1.0p-53; }

    std::mt19937_64 rng_;
    double spare_ = 0.0;
    bool have_spare_ = false;
};

}  // namespace detail

// Gaussian map with i.i.d. N(0, 1/d') entries, deterministic given the seed.
inline LinearMap sample_map(std::size_t d, std::size_t d_prime, std::uint64_t seed) {
    if (d < 1 || d_prime < 1) throw ParamOutOfRange("sample_map: dimensions must be positive");
    LinearMap f;
    f.rows = d_prime;
    f.cols = d;
    f.seed = seed;
    f.scheme = "gaussian";
    f.m.resize(d_prime * d);
    detail::GaussianStream g(seed);
    const double scale = 1.0 / std::sqrt(static_cast<double>(d_prime));
    for (double& x : f.m) x = scale * g.next();
    return f;
}

// Vertex-wise image of the curve. Vertex count is preserved; images of
// non-collinear triples may become collinear and repeated vertices may
// appear, so the result is not re-normalized.
inline Curve apply_map(const LinearMap& f, const Curve& c) {
    std::vector<Point> v;
    v.reserve(c.size());
    for (const Point& p : c.vertices()) v.push_back(f.apply(p));
    return Curve::unchecked(std::move(v), c.id());
}

namespace detail {

inline void push_unique(std::vector<Point>& pts, Point p) { pts.push_back(std::move(p)); }

inline void dedup_points(std::vector<Point>& pts) {
    std::sort(pts.begin(), pts.end());
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
}

}  // namespace detail

// Point set whose (1 +/- eps)-embedding guarantees non-contraction of curve
// distances: the origin, both unit directions of every edge-supporting line,
// and the residual x - (t + <x,u>u) of every vertex x against every such
// line, where t is the projection of the origin onto the line.
inline std::vector<Point> augmentation_lower(const std::vector<Curve>& curves) {
    if (curves.empty()) throw ParamOutOfRange("augmentation_lower: need at least one curve");
    const std::size_t d = curves.front().dim();
    for (const Curve& c : curves)
        if (c.dim() != d) throw DimensionMismatch("augmentation_lower: dimension mismatch");

    std::vector<Point> pts;
    pts.push_back(Point(d, 0.0));

    // Edge-supporting lines as (t, u) with <t,u> = 0, |u| = 1.
    std::vector<std::pair<Point, Point>> lines;
    for (const Curve& c : curves) {
        for (std::size_t e = 0; e + 1 < c.size(); ++e) {
            const Point dir = sub(c.vertex(e + 1), c.vertex(e));
            const double len = norm(dir);
            if (len == 0.0) continue;  // zero-length edge, no direction
            const Point u = scaled(dir, 1.0 / len);
            const Point& a = c.vertex(e);
            const Point t = sub(a, scaled(u, dot(a, u)));
            lines.emplace_back(t, u);
            pts.push_back(u);
            pts.push_back(scaled(u, -1.0));
        }
    }
    for (const Curve& c : curves) {
        for (const Point& x : c.vertices()) {
            for (const auto& [t, u] : lines) {
                pts.push_back(sub(x, add(t, scaled(u, dot(x, u)))));
            }
        }
    }
    detail::dedup_points(pts);
    return pts;
}

// Matching witnesses that pin the non-expansion guarantee: the P3..P6
// witness points of a realizing monotone sequence at r = d_F(a,b) (+1e-9
// slack), together with the weak-Frechet witnesses at r = d_wF(a,b). All
// points lie on edges of a or b.
inline std::vector<Point> augmentation_upper(const Curve& a, const Curve& b) {
    require_same_dim(a, b, "augmentation_upper");
    std::vector<Point> pts;
    auto collect = [&pts](const RealizingSequence& rs) {
        for (const PredicateWitness& w : rs.witnesses)
            for (const Point& p : w.points) pts.push_back(p);
    };
    collect(extract_realizing_sequence(a, b, frechet_distance(a, b) + 1e-9));
    collect(extract_weak_realizing_sequence(a, b, weak_frechet_distance(a, b) + 1e-9));
    detail::dedup_points(pts);
    return pts;
}

struct CertFailure {
    std::size_t i = 0;
    std::size_t j = 0;
    double ratio = 0.0;
};

// Result of checking the (1 +/- eps)-embedding property over all point
// pairs. max_contraction is the smallest distance ratio seen,
// max_expansion the largest. The stored failure list is capped; the count is
// exact.
struct CertReport {
    double epsilon = 0.0;
    double max_expansion = 0.0;
    double max_contraction = std::numeric_limits<double>::infinity();
    std::size_t pair_count = 0;
    std::size_t failure_count = 0;
    std::vector<CertFailure> failures;  // first kMaxStoredFailures only
    bool passed = false;

    static constexpr std::size_t kMaxStoredFailures = 64;
};

// Checks (1-eps)|p-q| <= |f(p)-f(q)| <= (1+eps)|p-q| over all pairs
// (coincident points skipped). The pair loop runs in fixed-size chunks so
// results are identical for any worker count.
inline CertReport certify_embedding(const LinearMap& f, const std::vector<Point>& pts, double eps,
                                    int workers = 1) {
    const std::size_t n = pts.size();
    const std::size_t d = f.cols, dp = f.rows;
    for (const Point& p : pts)
        if (p.size() != d) throw DimensionMismatch("certify_embedding: point dimension mismatch");

    std::vector<double> orig(n * d), img(n * dp);
    parallel_chunks(n, 256, workers, [&](std::size_t, std::size_t lo, std::size_t hi) {
        for (std::size_t i = lo; i < hi; ++i) {
            std::copy(pts[i].begin(), pts[i].end(), orig.begin() + static_cast<std::ptrdiff_t>(i * d));
            const Point y = f.apply(pts[i]);
            std::copy(y.begin(), y.end(), img.begin() + static_cast<std::ptrdiff_t>(i * dp));
        }
    });

    struct ChunkStats {
        double max_ratio = 0.0;
        double min_ratio = std::numeric_limits<double>::infinity();
        std::size_t pairs = 0;
        std::size_t fail_count = 0;
        std::vector<CertFailure> failures;
    };
    // Chunks over rows i; each row pairs i with all j > i.
    const std::size_t row_chunk = 16;
    const std::size_t n_chunks = n == 0 ? 0 : (n + row_chunk - 1) / row_chunk;
    std::vector<ChunkStats> stats(n_chunks);
    const double lo_bound = 1.0 - eps, hi_bound = 1.0 + eps;

    parallel_chunks(n, row_chunk, workers, [&](std::size_t chunk, std::size_t lo, std::size_t hi) {
        ChunkStats& st = stats[chunk];
        for (std::size_t i = lo; i < hi; ++i) {
            const double* pi = &orig[i * d];
            const double* fi = &img[i * dp];
            for (std::size_t j = i + 1; j < n; ++j) {
                const double* pj = &orig[j * d];
                double s0 = 0.0;
                for (std::size_t k = 0; k < d; ++k) {
                    const double t = pi[k] - pj[k];
                    s0 += t * t;
                }
                if (s0 == 0.0) continue;
                const double* fj = &img[j * dp];
                double s1 = 0.0;
                for (std::size_t k = 0; k < dp; ++k) {
                    const double t = fi[k] - fj[k];
                    s1 += t * t;
                }
                const double ratio = std::sqrt(s1 / s0);
                ++st.pairs;
                st.max_ratio = std::max(st.max_ratio, ratio);
                st.min_ratio = std::min(st.min_ratio, ratio);
                if (ratio < lo_bound || ratio > hi_bound) {
                    ++st.fail_count;
                    if (st.failures.size() < CertReport::kMaxStoredFailures)
                        st.failures.push_back(CertFailure{i, j, ratio});
                }
            }
        }
    });

    CertReport rep;
    rep.epsilon = eps;
    for (const ChunkStats& st : stats) {  // merge in chunk order: deterministic
        rep.pair_count += st.pairs;
        rep.failure_count += st.fail_count;
        rep.max_expansion = std::max(rep.max_expansion, st.max_ratio);
        rep.max_contraction = std::min(rep.max_contraction, st.min_ratio);
        for (const CertFailure& fl : st.failures)
            if (rep.failures.size() < CertReport::kMaxStoredFailures) rep.failures.push_back(fl);
    }
    if (rep.pair_count == 0) {
        rep.max_expansion = 1.0;
        rep.max_contraction = 1.0;
    }
    rep.passed = rep.failure_count == 0;
    return rep;
}

struct InnerProductViolation {
    std::size_t i = 0;
    std::size_t j = 0;
    double deviation = 0.0;  // amount outside the allowed band, in units of |p||q|
};

struct InnerProductReport {
    double epsilon = 0.0;
    std::size_t pair_count = 0;
    std::vector<InnerProductViolation> violations;
    double worst_upper = -std::numeric_limits<double>::infinity();  // max (<fp,fq> - <p,q>)/(|p||q|)
    double worst_lower = std::numeric_limits<double>::infinity();   // min of the same
    bool passed = false;
};

// Inner-product concentration: for a certified (1 +/- eps)-embedding on
// pts U {0} U normalized pts, asserts
//   <p,q> - 16 eps |p||q| <= <f(p),f(q)> <= <p,q> + 14 eps |p||q|.
inline InnerProductReport certify_inner_products(const LinearMap& f, const std::vector<Point>& pts,
                                                 double eps) {
    if (pts.empty()) throw ParamOutOfRange("certify_inner_products: empty point set");
    const std::size_t d = pts.front().size();
    std::vector<Point> base = pts;
    base.push_back(Point(d, 0.0));
    for (const Point& p : pts) {
        const double np = norm(p);
        if (np > 0.0) base.push_back(scaled(p, 1.0 / np));
    }
    detail::dedup_points(base);
    const CertReport cert = certify_embedding(f, base, eps);
    if (!cert.passed)
        throw PreconditionFailed("certify_inner_products: point-level certificate failed");

    InnerProductReport rep;
    rep.epsilon = eps;
    std::vector<Point> imgs;
    imgs.reserve(pts.size());
    for (const Point& p : pts) imgs.push_back(f.apply(p));
    for (std::size_t i = 0; i < pts.size(); ++i) {
        for (std::size_t j = i; j < pts.size(); ++j) {
            const double scale = norm(pts[i]) * norm(pts[j]);
            if (scale == 0.0) continue;
            ++rep.pair_count;
            const double ip = dot(pts[i], pts[j]);
            const double fip = dot(imgs[i], imgs[j]);
            const double dev = (fip - ip) / scale;
            rep.worst_upper = std::max(rep.worst_upper, dev);
            rep.worst_lower = std::min(rep.worst_lower, dev);
            if (dev > 14.0 * eps || dev < -16.0 * eps) {
                const double excess = dev > 0.0 ? dev - 14.0 * eps : -16.0 * eps - dev;
                rep.violations.push_back(InnerProductViolation{i, j, excess});
            }
        }
    }
    rep.passed = rep.violations.empty();
    return rep;
}

// Point-to-line non-contraction: for f a certified (1 +/- eps/16)-embedding
// of {0, u, -u, x - (t + <x,u>u)}, verifies
//   |f(x) - f(t + lambda u)| >= (1 - 3 eps) |x - (t + lambda u)|
// at every requested lambda plus the projection parameter <x,u> and its two
// geometrically critical neighbors <x,u> +/- |x - (t + <x,u>u)|.
inline bool certify_point_line(const LinearMap& f, const Point& x, const Point& t, const Point& u,
                               double eps, const std::vector<double>& lambdas) {
    if (std::abs(norm(u) - 1.0) > 1e-9) throw PreconditionFailed("certify_point_line: u must be unit");
    if (std::abs(dot(u, t)) > 1e-9) throw PreconditionFailed("certify_point_line: t must satisfy <u,t> = 0");
    const double proj = dot(x, u);
    const Point residual = sub(x, add(t, scaled(u, proj)));
    std::vector<Point> four{Point(x.size(), 0.0), u, scaled(u, -1.0), residual};
    detail::dedup_points(four);
    if (!certify_embedding(f, four, eps / 16.0).passed)
        throw PreconditionFailed("certify_point_line: 4-point certificate failed");

    // |f(x) - f(t + lambda u)|^2 is a quadratic in lambda with coefficients
    // from f(x) - f(t) and f(u); same for the original distance.
    const Point fx = f.apply(x), ft = f.apply(t), fu = f.apply(u);
    const Point fa = sub(fx, ft);
    const double A2 = squared_norm(fa), AB = dot(fa, fu), B2 = squared_norm(fu);
    const Point xa = sub(x, t);
    const double a2 = squared_norm(xa), ab = dot(xa, u);

    const double bound = 1.0 - 3.0 * eps;
    auto holds_at = [&](double lambda) {
        const double lhs2 = A2 - 2.0 * lambda * AB + lambda * lambda * B2;
        const double rhs2 = a2 - 2.0 * lambda * ab + lambda * lambda;
        return std::sqrt(std::max(0.0, lhs2)) >= bound * std::sqrt(std::max(0.0, rhs2)) - kTangencySlack;
    };
    const double res = norm(residual);
    if (!holds_at(proj) || !holds_at(proj + res) || !holds_at(proj - res)) return false;
    for (double lambda : lambdas)
        if (!holds_at(lambda)) return false;
    return true;
}

// JSON wire format for maps; doubles are emitted with shortest round-trip
// precision, so load(save(f)) is bit-exact.
inline nlohmann::json map_to_json(const LinearMap& f) {
    nlohmann::json j;
    j["scheme"] = f.scheme;
    j["seed"] = f.seed;
    j["d"] = f.cols;
    j["d_prime"] = f.rows;
    j["matrix"] = f.m;  // row-major
    return j;
}

inline LinearMap map_from_json(const nlohmann::json& j) {
    LinearMap f;
    f.scheme = j.at("scheme").get<std::string>();
    f.seed = j.at("seed").get<std::uint64_t>();
    f.cols = j.at("d").get<std::size_t>();
    f.rows = j.at("d_prime").get<std::size_t>();
    f.m = j.at("matrix").get<std::vector<double>>();
    if (f.m.size() != f.rows * f.cols) throw ParseError("map_from_json: matrix size mismatch");
    return f;
}

struct RetriesExhausted : Error {
    CertReport last_report;

    explicit RetriesExhausted(CertReport rep)
        : Error("embed_curve_set: certification failed after max retries"), last_report(std::move(rep)) {}
};

enum class CertifyMode { off, lower, full };

struct EmbeddingJob {
    std::vector<Curve> curves;
    double epsilon = 0.0;
    double epsilon_point = 0.0;  // epsilon / 48, the strictest internal budget
    double beta = 2.0;
    int target_dim = 0;          // uncapped JL dimension for epsilon_point
    std::vector<Point> augmented_points;
};

// Assembles the certified point set and the JL dimension for a curve set.
// The full mode adds the pairwise upper-bound witnesses, which requires
// Frechet computations in the original dimension.
inline EmbeddingJob make_embedding_job(std::vector<Curve> curves, double eps, CertifyMode mode,
                                       double beta = 2.0) {
    if (!(eps > 0.0 && eps < 1.0)) throw ParamOutOfRange("make_embedding_job: eps must be in (0,1)");
    if (curves.size() < 2) throw ParamOutOfRange("make_embedding_job: need at least 2 curves");
    EmbeddingJob job;
    job.epsilon = eps;
    job.epsilon_point = eps / 48.0;
    job.beta = beta;
    std::vector<Point> pts;
    for (const Curve& c : curves)
        for (const Point& p : c.vertices()) pts.push_back(p);
    for (Point& p : augmentation_lower(curves)) pts.push_back(std::move(p));
    if (mode == CertifyMode::full) {
        for (std::size_t i = 0; i < curves.size(); ++i)
            for (std::size_t j = i + 1; j < curves.size(); ++j)
                for (Point& p : augmentation_upper(curves[i], curves[j])) pts.push_back(std::move(p));
    }
    detail::dedup_points(pts);
    job.target_dim = target_dimension(job.epsilon_point, pts.size(), beta);
    job.augmented_points = std::move(pts);
    job.curves = std::move(curves);
    return job;
}

struct EmbedResult {
    LinearMap map;
    std::vector<Curve> curves;
    std::optional<CertReport> report;
    int target_dim = 0;      // uncapped JL dimension
    std::size_t d_prime = 0; // actual embedding dimension (capped at d)
    bool no_reduction = false;
    int attempts = 0;
};

struct CertifiedMap {
    LinearMap map;
    CertReport report;
    int attempts = 0;
};

// Samples gaussian maps with consecutive seeds until one certifies on the
// point set; throws RetriesExhausted (carrying the last report) after
// max_retries + 1 attempts.
inline CertifiedMap sample_certified_map(std::size_t d, std::size_t d_prime, std::uint64_t seed,
                                         const std::vector<Point>& pts, double eps, int max_retries,
                                         int workers = 1) {
    CertReport last;
    for (int attempt = 0; attempt <= max_retries; ++attempt) {
        LinearMap f = sample_map(d, d_prime, seed + static_cast<std::uint64_t>(attempt));
        last = certify_embedding(f, pts, eps, workers);
        if (last.passed) return CertifiedMap{std::move(f), std::move(last), attempt + 1};
    }
    throw RetriesExhausted(std::move(last));
}

// Full embedding pipeline: build the augmented point set, sample a map for
// the eps/48 budget, apply it, and (optionally) certify, resampling with
// incremented seeds on failure. When the JL bound does not beat the ambient
// dimension the identity map is used and reported as "no reduction".
inline EmbedResult embed_curve_set(const std::vector<Curve>& curves, double eps, std::uint64_t seed,
                                   CertifyMode mode, double beta = 2.0, int max_retries = 16,
                                   int workers = 1) {
    EmbeddingJob job = make_embedding_job(curves, eps, mode, beta);
    const std::size_t d = job.curves.front().dim();

    EmbedResult res;
    res.target_dim = job.target_dim;
    res.no_reduction = static_cast<std::size_t>(job.target_dim) >= d;
    res.d_prime = res.no_reduction ? d : static_cast<std::size_t>(job.target_dim);
    res.attempts = 1;

    if (res.no_reduction) {
        res.map = LinearMap::identity(d);
        if (mode != CertifyMode::off)
            res.report = certify_embedding(res.map, job.augmented_points, job.epsilon_point, workers);
    } else if (mode == CertifyMode::off) {
        res.map = sample_map(d, res.d_prime, seed);
    } else {
        CertifiedMap cm = sample_certified_map(d, res.d_prime, seed, job.augmented_points,
                                               job.epsilon_point, max_retries, workers);
        res.map = std::move(cm.map);
        res.report = std::move(cm.report);
        res.attempts = cm.attempts;
    }

    res.curves.reserve(job.curves.size());
    for (const Curve& c : job.curves) res.curves.push_back(apply_map(res.map, c));
    return res;
}

}  // namespace curvedim
