#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "curvedim/errors.hpp"

namespace curvedim {

using Point = std::vector<double>;

// Absolute slack used for all tangency / boundary decisions. Predicates are
// closed conditions; a single symmetric slack keeps every decision monotone
// in the radius.
inline constexpr double kTangencySlack = 1e-12;

inline double dot(const Point& p, const Point& q) {
    double s = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i) s += p[i] * q[i];
    return s;
}

inline double squared_norm(const Point& p) { return dot(p, p); }

inline double norm(const Point& p) { return std::sqrt(squared_norm(p)); }

inline double squared_dist(const Point& p, const Point& q) {
    double s = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i) {
        const double t = p[i] - q[i];
        s += t * t;
    }
    return s;
}

inline double dist(const Point& p, const Point& q) { return std::sqrt(squared_dist(p, q)); }

inline Point sub(const Point& p, const Point& q) {
    Point r(p.size());
    for (std::size_t i = 0; i < p.size(); ++i) r[i] = p[i] - q[i];
    return r;
}

inline Point add(const Point& p, const Point& q) {
    Point r(p.size());
    for (std::size_t i = 0; i < p.size(); ++i) r[i] = p[i] + q[i];
    return r;
}

inline Point scaled(const Point& p, double s) {
    Point r(p.size());
    for (std::size_t i = 0; i < p.size(); ++i) r[i] = s * p[i];
    return r;
}

inline bool all_finite(const Point& p) {
    for (double x : p)
        if (!std::isfinite(x)) return false;
    return true;
}

struct Segment {
    Point a;
    Point b;
};

// Point (1-lambda)*a + lambda*b on the line supporting the segment; lambda
// outside [0,1] addresses the supporting line.
inline Point point_on_segment(const Segment& s, double lambda) {
    Point r(s.a.size());
    for (std::size_t i = 0; i < s.a.size(); ++i) r[i] = (1.0 - lambda) * s.a[i] + lambda * s.b[i];
    return r;
}

// Closed sub-interval of [0,1], or empty. Used for free-space cell boundary
// pieces.
struct Interval {
    double lo = 0.0;
    double hi = 0.0;
    bool empty = true;

    static Interval closed(double lo, double hi) { return Interval{lo, hi, false}; }
    static Interval none() { return Interval{}; }

    bool contains(double x) const { return !empty && lo <= x && x <= hi; }
};

class Curve {
  public:
    Curve() = default;

    // Constructs without validation or normalization. Needed for images of
    // curves under linear maps, which may contain repeated vertices.
    static Curve unchecked(std::vector<Point> vertices, std::string id) {
        Curve c;
        c.vertices_ = std::move(vertices);
        c.id_ = std::move(id);
        return c;
    }

    std::size_t size() const { return vertices_.size(); }
    std::size_t dim() const { return vertices_.empty() ? 0 : vertices_.front().size(); }
    std::size_t edge_count() const { return vertices_.size() - 1; }

    const Point& vertex(std::size_t i) const { return vertices_[i]; }
    const Point& front() const { return vertices_.front(); }
    const Point& back() const { return vertices_.back(); }
    const std::vector<Point>& vertices() const { return vertices_; }

    Segment edge(std::size_t i) const { return Segment{vertices_[i], vertices_[i + 1]}; }

    const std::string& id() const { return id_; }

    // True if some edge has zero length (possible only for unchecked curves,
    // e.g. images under rank-deficient maps).
    bool degenerate() const {
        for (std::size_t i = 0; i + 1 < vertices_.size(); ++i)
            if (vertices_[i] == vertices_[i + 1]) return true;
        return false;
    }

    double arclength() const {
        double s = 0.0;
        for (std::size_t i = 0; i + 1 < vertices_.size(); ++i) s += dist(vertices_[i], vertices_[i + 1]);
        return s;
    }

  private:
    std::vector<Point> vertices_;
    std::string id_;
};

inline double bounding_box_diameter(const std::vector<Point>& pts) {
    if (pts.empty()) return 0.0;
    const std::size_t d = pts.front().size();
    double s = 0.0;
    for (std::size_t k = 0; k < d; ++k) {
        double lo = pts.front()[k], hi = lo;
        for (const Point& p : pts) {
            lo = std::min(lo, p[k]);
            hi = std::max(hi, p[k]);
        }
        s += (hi - lo) * (hi - lo);
    }
    return std::sqrt(s);
}

// Distance from p to the closed segment s; projection clamped to [0,1].
// Zero-length segments are treated as their single point.
inline double point_segment_distance(const Point& p, const Segment& s) {
    if (p.size() != s.a.size() || s.a.size() != s.b.size())
        throw DimensionMismatch("point_segment_distance: dimension mismatch");
    const Point d = sub(s.b, s.a);
    const double a2 = squared_norm(d);
    if (a2 == 0.0) return dist(p, s.a);
    double t = dot(sub(p, s.a), d) / a2;
    t = std::clamp(t, 0.0, 1.0);
    return dist(p, point_on_segment(s, t));
}

// {lambda in R : |center - s(lambda)| <= r} on the supporting line, or
// nullopt when the line misses the ball (beyond the tangency slack).
// Zero-length segments yield the full line when their point is in the ball.
inline std::optional<std::pair<double, double>> ball_line_intersection(const Segment& s, const Point& center,
                                                                       double r) {
    const Point d = sub(s.b, s.a);
    const Point e = sub(s.a, center);
    const double a2 = squared_norm(d);
    if (a2 == 0.0) {
        if (norm(e) <= r + kTangencySlack)
            return std::make_pair(-std::numeric_limits<double>::infinity(),
                                  std::numeric_limits<double>::infinity());
        return std::nullopt;
    }
    const double b = dot(e, d);
    const double center_lambda = -b / a2;
    // residual vector instead of c - b*b/a2: the scalar form cancels
    // catastrophically when the center lies near the line
    double dmin2 = 0.0;
    for (std::size_t i = 0; i < d.size(); ++i) {
        const double t = e[i] + center_lambda * d[i];
        dmin2 += t * t;
    }
    const double dmin = std::sqrt(dmin2);
    if (dmin > r + kTangencySlack) return std::nullopt;
    const double w = std::sqrt(std::max(0.0, r * r - dmin2) / a2);
    return std::make_pair(center_lambda - w, center_lambda + w);
}

// {lambda in [0,1] : |center - s(lambda)| <= r}, a closed interval or empty.
// The ball is closed, and endpoints inside the ball are included exactly, so
// adjacent free-space boundaries agree on shared corners.
inline Interval ball_segment_intersection(const Segment& s, const Point& center, double r) {
    if (r < 0.0) return Interval::none();
    const double a2 = squared_dist(s.a, s.b);
    const bool a_in = dist(s.a, center) <= r + kTangencySlack;
    const bool b_in = dist(s.b, center) <= r + kTangencySlack;
    if (a2 == 0.0) return a_in ? Interval::closed(0.0, 1.0) : Interval::none();

    auto line = ball_line_intersection(s, center, r);
    if (!line) return Interval::none();
    double lo = std::clamp(line->first, 0.0, 1.0);
    double hi = std::clamp(line->second, 0.0, 1.0);
    if (a_in) lo = 0.0;
    if (b_in) hi = 1.0;
    if (!a_in && !b_in && (line->second < 0.0 || line->first > 1.0)) return Interval::none();
    if (lo > hi) return Interval::none();
    return Interval::closed(lo, hi);
}

// Builds a polygonal curve. Consecutive duplicate points are always removed;
// with normalize set, interior vertices closer than tol_collinear to the
// segment joining their neighbors are removed as well (the traced image is
// unchanged). tol_collinear = 1e-12 * bounding box diameter.
inline Curve make_curve(std::vector<Point> pts, bool normalize = false, std::string id = "") {
    if (pts.empty()) throw DegenerateCurve("make_curve: no points");
    const std::size_t d = pts.front().size();
    if (d == 0) throw DimensionMismatch("make_curve: zero-dimensional point");
    for (const Point& p : pts) {
        if (p.size() != d) throw DimensionMismatch("make_curve: mixed dimensions");
        if (!all_finite(p)) throw ParamOutOfRange("make_curve: non-finite coordinate");
    }

    auto dedup = [](std::vector<Point>& v) {
        v.erase(std::unique(v.begin(), v.end()), v.end());
    };
    dedup(pts);
    if (pts.size() < 2) throw DegenerateCurve("make_curve: fewer than 2 distinct points");

    if (normalize) {
        const double tol = 1e-12 * bounding_box_diameter(pts);
        bool changed = true;
        while (changed) {
            changed = false;
            for (std::size_t i = 1; i + 1 < pts.size(); ++i) {
                if (point_segment_distance(pts[i], Segment{pts[i - 1], pts[i + 1]}) < tol) {
                    pts.erase(pts.begin() + static_cast<std::ptrdiff_t>(i));
                    changed = true;
                    break;
                }
            }
            if (changed) dedup(pts);
        }
        if (pts.size() < 2) throw DegenerateCurve("make_curve: normalization collapsed curve");
    }

    return Curve::unchecked(std::move(pts), std::move(id));
}

// Sub-curve on vertices i..j (1-based, inclusive).
inline Curve subcurve(const Curve& c, std::size_t i, std::size_t j) {
    if (i < 1 || i >= j || j > c.size()) throw IndexError("subcurve: need 1 <= i < j <= |c|");
    std::vector<Point> v(c.vertices().begin() + static_cast<std::ptrdiff_t>(i - 1),
                         c.vertices().begin() + static_cast<std::ptrdiff_t>(j));
    return Curve::unchecked(std::move(v), c.id());
}

}  // namespace curvedim
