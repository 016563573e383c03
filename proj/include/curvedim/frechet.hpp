#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdlib>
#include <deque>
#include <string>
#include <utility>
#include <vector>

#include "curvedim/geometry.hpp"

namespace curvedim {

// Free-space boundary intervals at radius r for a pair of curves a, b.
// left(i, j): feasible part of the vertical grid line at a-vertex i across
// b-edge j (the left boundary of cell (i, j), right boundary of (i-1, j)).
// bottom(i, j): feasible part of the horizontal line at b-vertex j across
// a-edge i. Indices are 0-based.
struct FreeSpaceDiagram {
    double radius = 0.0;
    std::size_t na = 0;
    std::size_t nb = 0;
    std::vector<Interval> left_;    // na * (nb-1)
    std::vector<Interval> bottom_;  // (na-1) * nb

    const Interval& left(std::size_t i, std::size_t j) const { return left_[i * (nb - 1) + j]; }
    const Interval& bottom(std::size_t i, std::size_t j) const { return bottom_[i * nb + j]; }
    Interval& left(std::size_t i, std::size_t j) { return left_[i * (nb - 1) + j]; }
    Interval& bottom(std::size_t i, std::size_t j) { return bottom_[i * nb + j]; }
};

inline void require_same_dim(const Curve& a, const Curve& b, const char* where) {
    if (a.dim() != b.dim()) throw DimensionMismatch(std::string(where) + ": dimension mismatch");
}

inline FreeSpaceDiagram build_free_space(const Curve& a, const Curve& b, double r) {
    require_same_dim(a, b, "build_free_space");
    FreeSpaceDiagram fs;
    fs.radius = r;
    fs.na = a.size();
    fs.nb = b.size();
    fs.left_.resize(fs.na * (fs.nb - 1));
    fs.bottom_.resize((fs.na - 1) * fs.nb);
    for (std::size_t i = 0; i < fs.na; ++i)
        for (std::size_t j = 0; j + 1 < fs.nb; ++j)
            fs.left(i, j) = ball_segment_intersection(b.edge(j), a.vertex(i), r);
    for (std::size_t i = 0; i + 1 < fs.na; ++i)
        for (std::size_t j = 0; j < fs.nb; ++j)
            fs.bottom(i, j) = ball_segment_intersection(a.edge(i), b.vertex(j), r);
    return fs;
}

namespace detail {

inline bool within_radius(const Point& p, const Point& q, double r) {
    return dist(p, q) <= r + kTangencySlack;
}

inline Interval clip_low(const Interval& iv, double lo) {
    if (iv.empty) return Interval::none();
    const double l = std::max(iv.lo, lo);
    if (l > iv.hi) return Interval::none();
    return Interval::closed(l, iv.hi);
}

// Monotone reachability tables over the free space (Alt-Godau). lr/br mirror
// the shape of fs.left_/fs.bottom_ and hold the reachable sub-intervals.
struct Reachability {
    FreeSpaceDiagram fs;
    std::vector<Interval> lr;
    std::vector<Interval> br;
    bool start_ok = false;
    bool end_ok = false;
    bool reachable = false;

    const Interval& LR(std::size_t i, std::size_t j) const { return lr[i * (fs.nb - 1) + j]; }
    const Interval& BR(std::size_t i, std::size_t j) const { return br[i * fs.nb + j]; }
    Interval& LR(std::size_t i, std::size_t j) { return lr[i * (fs.nb - 1) + j]; }
    Interval& BR(std::size_t i, std::size_t j) { return br[i * fs.nb + j]; }
};

inline Reachability compute_reachability(const Curve& a, const Curve& b, double r) {
    Reachability t;
    t.fs = build_free_space(a, b, r);
    const std::size_t na = t.fs.na, nb = t.fs.nb;
    t.lr.assign(na * (nb - 1), Interval::none());
    t.br.assign((na - 1) * nb, Interval::none());
    t.start_ok = within_radius(a.front(), b.front(), r);
    t.end_ok = within_radius(a.back(), b.back(), r);
    if (!t.start_ok) return t;

    // Diagram edges: slide up the left side and right along the bottom.
    if (t.fs.left(0, 0).contains(0.0)) t.LR(0, 0) = Interval::closed(0.0, t.fs.left(0, 0).hi);
    for (std::size_t j = 1; j + 1 < nb; ++j) {
        if (!t.LR(0, j - 1).empty && t.LR(0, j - 1).hi == 1.0 && t.fs.left(0, j).contains(0.0))
            t.LR(0, j) = Interval::closed(0.0, t.fs.left(0, j).hi);
    }
    if (t.fs.bottom(0, 0).contains(0.0)) t.BR(0, 0) = Interval::closed(0.0, t.fs.bottom(0, 0).hi);
    for (std::size_t i = 1; i + 1 < na; ++i) {
        if (!t.BR(i - 1, 0).empty && t.BR(i - 1, 0).hi == 1.0 && t.fs.bottom(i, 0).contains(0.0))
            t.BR(i, 0) = Interval::closed(0.0, t.fs.bottom(i, 0).hi);
    }

    // Cell sweep. Entering through the bottom frees the whole exit interval;
    // entering through the left clips it from below.
    for (std::size_t i = 0; i + 1 < na; ++i) {
        for (std::size_t j = 0; j + 1 < nb; ++j) {
            const Interval in_l = t.LR(i, j);
            const Interval in_b = t.BR(i, j);
            const Interval right = t.fs.left(i + 1, j);
            const Interval top = t.fs.bottom(i, j + 1);
            if (!in_b.empty)
                t.LR(i + 1, j) = right;
            else if (!in_l.empty)
                t.LR(i + 1, j) = clip_low(right, in_l.lo);
            if (!in_l.empty)
                t.BR(i, j + 1) = top;
            else if (!in_b.empty)
                t.BR(i, j + 1) = clip_low(top, in_b.lo);
        }
    }

    const Interval end_right = t.LR(na - 1, nb - 2);
    const Interval end_top = t.BR(na - 2, nb - 1);
    t.reachable = t.end_ok && ((!end_right.empty && end_right.hi == 1.0) ||
                               (!end_top.empty && end_top.hi == 1.0));
    return t;
}

}  // namespace detail

// True iff the continuous Frechet distance of a and b is at most r.
inline bool decide_frechet(const Curve& a, const Curve& b, double r) {
    if (r < 0.0) return false;
    return detail::compute_reachability(a, b, r).reachable;
}

// True iff the weak Frechet distance is at most r: connectivity of the free
// space from the start corner to the end corner, with the non-monotone
// neighbor relation over cells.
inline bool decide_weak_frechet(const Curve& a, const Curve& b, double r) {
    if (r < 0.0) return false;
    require_same_dim(a, b, "decide_weak_frechet");
    if (!detail::within_radius(a.front(), b.front(), r)) return false;
    if (!detail::within_radius(a.back(), b.back(), r)) return false;
    const FreeSpaceDiagram fs = build_free_space(a, b, r);
    const std::size_t ca = fs.na - 1, cb = fs.nb - 1;
    std::vector<char> seen(ca * cb, 0);
    std::deque<std::pair<std::size_t, std::size_t>> queue;
    seen[0] = 1;
    queue.emplace_back(0, 0);
    while (!queue.empty()) {
        auto [i, j] = queue.front();
        queue.pop_front();
        if (i == ca - 1 && j == cb - 1) return true;
        auto visit = [&](std::size_t ni, std::size_t nj) {
            if (!seen[ni * cb + nj]) {
                seen[ni * cb + nj] = 1;
                queue.emplace_back(ni, nj);
            }
        };
        if (i + 1 < ca && !fs.left(i + 1, j).empty) visit(i + 1, j);
        if (i > 0 && !fs.left(i, j).empty) visit(i - 1, j);
        if (j + 1 < cb && !fs.bottom(i, j + 1).empty) visit(i, j + 1);
        if (j > 0 && !fs.bottom(i, j).empty) visit(i, j - 1);
    }
    return false;
}

// Alt-Godau critical values: endpoint distances, vertex-to-edge distances
// both ways, and passage values where the bisector of two vertices of one
// curve meets an edge of the other. Sorted, deduplicated within 1e-12; the
// continuous Frechet distance is always contained.
inline std::vector<double> critical_values(const Curve& a, const Curve& b) {
    require_same_dim(a, b, "critical_values");
    std::vector<double> vals;
    vals.push_back(dist(a.front(), b.front()));
    vals.push_back(dist(a.back(), b.back()));
    auto vertex_edge = [&vals](const Curve& x, const Curve& y) {
        for (std::size_t i = 0; i < x.size(); ++i)
            for (std::size_t j = 0; j + 1 < y.size(); ++j)
                vals.push_back(point_segment_distance(x.vertex(i), y.edge(j)));
    };
    vertex_edge(a, b);
    vertex_edge(b, a);
    auto passages = [&vals](const Curve& edge_curve, const Curve& vertex_curve) {
        for (std::size_t e = 0; e + 1 < edge_curve.size(); ++e) {
            const Segment seg = edge_curve.edge(e);
            const Point d = sub(seg.b, seg.a);
            for (std::size_t u = 0; u < vertex_curve.size(); ++u) {
                for (std::size_t w = u + 1; w < vertex_curve.size(); ++w) {
                    const Point n = sub(vertex_curve.vertex(w), vertex_curve.vertex(u));
                    const double denom = dot(d, n);
                    if (denom == 0.0) continue;
                    const Point mid = scaled(add(vertex_curve.vertex(u), vertex_curve.vertex(w)), 0.5);
                    const double lambda = dot(sub(mid, seg.a), n) / denom;
                    if (lambda < 0.0 || lambda > 1.0) continue;
                    vals.push_back(dist(vertex_curve.vertex(u), point_on_segment(seg, lambda)));
                }
            }
        }
    };
    passages(a, b);
    passages(b, a);
    std::sort(vals.begin(), vals.end());
    std::vector<double> out;
    for (double v : vals)
        if (out.empty() || v - out.back() > 1e-12) out.push_back(v);
    return out;
}

namespace detail {

template <typename Decide>
double smallest_feasible_critical_value(const Curve& a, const Curve& b, Decide&& decide) {
    const std::vector<double> vals = critical_values(a, b);
    std::size_t lo = 0, hi = vals.size() - 1;
    // decide(vals.back()) is true: the distance itself is a critical value.
    while (lo < hi) {
        const std::size_t mid = lo + (hi - lo) / 2;
        if (decide(vals[mid]))
            hi = mid;
        else
            lo = mid + 1;
    }
    return vals[lo];
}

}  // namespace detail

inline double frechet_distance(const Curve& a, const Curve& b) {
    return detail::smallest_feasible_critical_value(
        a, b, [&](double r) { return decide_frechet(a, b, r); });
}

inline double weak_frechet_distance(const Curve& a, const Curve& b) {
    return detail::smallest_feasible_critical_value(
        a, b, [&](double r) { return decide_weak_frechet(a, b, r); });
}

// Discrete Frechet distance: min over monotone couplings of the vertex
// sequences of the max paired distance. Standard dynamic program.
inline double discrete_frechet(const Curve& a, const Curve& b) {
    require_same_dim(a, b, "discrete_frechet");
    const std::size_t na = a.size(), nb = b.size();
    std::vector<double> prev(nb), cur(nb);
    for (std::size_t i = 0; i < na; ++i) {
        for (std::size_t j = 0; j < nb; ++j) {
            const double d = dist(a.vertex(i), b.vertex(j));
            if (i == 0 && j == 0)
                cur[j] = d;
            else if (i == 0)
                cur[j] = std::max(cur[j - 1], d);
            else if (j == 0)
                cur[j] = std::max(prev[j], d);
            else
                cur[j] = std::max(std::min({cur[j - 1], prev[j], prev[j - 1]}), d);
        }
        std::swap(prev, cur);
    }
    return prev[nb - 1];
}

// ---------------------------------------------------------------------------
// Predicates P1..P6 and valid sequences.
// ---------------------------------------------------------------------------

enum class PredicateKind { P1, P2, P3, P4, P5, P6 };

// Indices are 1-based, matching the usual statement of the predicates:
//  P1/P2: no indices.
//  P3 (i, j): edge i of the first curve vs vertex j of the second.
//  P4 (i, j): vertex i of the first curve vs edge j of the second.
//  P5 (i, j, k): vertices i, k of the second curve matched in order on the
//    line supporting edge j of the first curve.
//  P6 (i, j, k): vertices j, k of the first curve matched in order on the
//    line supporting edge i of the second curve.
struct PredicateId {
    PredicateKind kind = PredicateKind::P1;
    std::array<std::size_t, 3> idx{0, 0, 0};

    static PredicateId p1() { return PredicateId{PredicateKind::P1, {0, 0, 0}}; }
    static PredicateId p2() { return PredicateId{PredicateKind::P2, {0, 0, 0}}; }
    static PredicateId p3(std::size_t i, std::size_t j) { return PredicateId{PredicateKind::P3, {i, j, 0}}; }
    static PredicateId p4(std::size_t i, std::size_t j) { return PredicateId{PredicateKind::P4, {i, j, 0}}; }
    static PredicateId p5(std::size_t i, std::size_t j, std::size_t k) {
        return PredicateId{PredicateKind::P5, {i, j, k}};
    }
    static PredicateId p6(std::size_t i, std::size_t j, std::size_t k) {
        return PredicateId{PredicateKind::P6, {i, j, k}};
    }
};

namespace detail {

// Order condition shared by P5/P6: vertices lo_v then hi_v matched in order
// on the line supporting seg. Both line intervals nonempty and
// lo(first) <= hi(second).
inline bool ordered_on_line(const Segment& seg, const Point& lo_v, const Point& hi_v, double r) {
    const auto i1 = ball_line_intersection(seg, lo_v, r);
    if (!i1) return false;
    const auto i2 = ball_line_intersection(seg, hi_v, r);
    if (!i2) return false;
    return i1->first <= i2->second;
}

}  // namespace detail

inline bool eval_predicate(const PredicateId& id, const Curve& a, const Curve& b, double r) {
    require_same_dim(a, b, "eval_predicate");
    const std::size_t na = a.size(), nb = b.size();
    auto in = [](std::size_t v, std::size_t lo, std::size_t hi) { return lo <= v && v <= hi; };
    switch (id.kind) {
        case PredicateKind::P1:
            return detail::within_radius(a.front(), b.front(), r);
        case PredicateKind::P2:
            return detail::within_radius(a.back(), b.back(), r);
        case PredicateKind::P3: {
            if (!in(id.idx[0], 1, na - 1) || !in(id.idx[1], 1, nb)) throw BadIndices("P3 indices");
            return !ball_segment_intersection(a.edge(id.idx[0] - 1), b.vertex(id.idx[1] - 1), r).empty;
        }
        case PredicateKind::P4: {
            if (!in(id.idx[0], 1, na) || !in(id.idx[1], 1, nb - 1)) throw BadIndices("P4 indices");
            return !ball_segment_intersection(b.edge(id.idx[1] - 1), a.vertex(id.idx[0] - 1), r).empty;
        }
        case PredicateKind::P5: {
            if (!in(id.idx[0], 1, nb) || !in(id.idx[1], 1, na - 1) || !in(id.idx[2], 1, nb))
                throw BadIndices("P5 indices");
            return detail::ordered_on_line(a.edge(id.idx[1] - 1), b.vertex(id.idx[0] - 1),
                                           b.vertex(id.idx[2] - 1), r);
        }
        case PredicateKind::P6: {
            if (!in(id.idx[0], 1, nb - 1) || !in(id.idx[1], 1, na) || !in(id.idx[2], 1, na))
                throw BadIndices("P6 indices");
            return detail::ordered_on_line(b.edge(id.idx[0] - 1), a.vertex(id.idx[1] - 1),
                                           a.vertex(id.idx[2] - 1), r);
        }
    }
    std::abort();
}

// Walk over free-space cells, 1-based cell indices. Starts at (1,1), ends at
// (|a|-1, |b|-1), unit steps, no repeated cell.
struct ValidSequence {
    std::vector<std::pair<std::size_t, std::size_t>> cells;
};

inline void validate_sequence(const ValidSequence& seq, std::size_t na, std::size_t nb, bool monotone) {
    const auto& c = seq.cells;
    if (c.empty()) throw InvalidSequence("empty sequence");
    if (c.front() != std::make_pair<std::size_t, std::size_t>(1, 1)) throw InvalidSequence("must start at (1,1)");
    if (c.back() != std::make_pair(na - 1, nb - 1)) throw InvalidSequence("must end at (|a|-1,|b|-1)");
    for (const auto& [i, j] : c)
        if (i < 1 || i > na - 1 || j < 1 || j > nb - 1) throw InvalidSequence("cell out of range");
    for (std::size_t l = 1; l < c.size(); ++l) {
        const long di = static_cast<long>(c[l].first) - static_cast<long>(c[l - 1].first);
        const long dj = static_cast<long>(c[l].second) - static_cast<long>(c[l - 1].second);
        const bool up_right = (di == 0 && dj == 1) || (di == 1 && dj == 0);
        const bool down_left = (di == 0 && dj == -1) || (di == -1 && dj == 0);
        if (!(up_right || (!monotone && down_left))) throw InvalidSequence("invalid step");
    }
    auto sorted = c;
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
        throw InvalidSequence("repeated cell");
}

// Conjunction P1 ^ P2 ^ Psi (monotone: with P5/P6 order predicates) over the
// sequence. Boundary predicates are taken per crossing between consecutive
// cells; order predicates over all same-row / same-column cell pairs of the
// sequence. Satisfiable over some (monotone) valid sequence iff the weak
// (resp. continuous) Frechet distance is at most r.
inline bool eval_predicate_system(const Curve& a, const Curve& b, double r, const ValidSequence& seq,
                                  bool monotone) {
    require_same_dim(a, b, "eval_predicate_system");
    validate_sequence(seq, a.size(), b.size(), monotone);
    if (!eval_predicate(PredicateId::p1(), a, b, r)) return false;
    if (!eval_predicate(PredicateId::p2(), a, b, r)) return false;

    const auto& c = seq.cells;
    for (std::size_t l = 1; l < c.size(); ++l) {
        const auto [i0, j0] = c[l - 1];
        const auto [i1, j1] = c[l];
        if (i0 == i1) {  // vertical crossing at b-vertex max(j0, j1)
            if (!eval_predicate(PredicateId::p3(i0, std::max(j0, j1)), a, b, r)) return false;
        } else {  // horizontal crossing at a-vertex max(i0, i1)
            if (!eval_predicate(PredicateId::p4(std::max(i0, i1), j0), a, b, r)) return false;
        }
    }
    if (!monotone) return true;

    for (std::size_t l = 0; l < c.size(); ++l) {
        for (std::size_t m = 0; m < c.size(); ++m) {
            if (l == m) continue;
            // (i, j-1) and (i, k) both in F with j < k: order of b-vertices
            // j, k on a-edge i.
            if (c[l].first == c[m].first && c[l].second + 1 < c[m].second) {
                if (!eval_predicate(PredicateId::p5(c[l].second + 1, c[l].first, c[m].second), a, b, r))
                    return false;
            }
            // (i-1, j) and (k, j) both in F with i < k: order of a-vertices
            // i, k on b-edge j.
            if (c[l].second == c[m].second && c[l].first + 1 < c[m].first) {
                if (!eval_predicate(PredicateId::p6(c[l].second, c[l].first + 1, c[m].first), a, b, r))
                    return false;
            }
        }
    }
    return true;
}

struct PredicateWitness {
    PredicateId id;
    std::vector<Point> points;  // 1 point for P3/P4, 2 (ordered) for P5/P6, 2 for P1/P2
};

struct RealizingSequence {
    ValidSequence seq;
    std::vector<PredicateWitness> witnesses;
};

namespace detail {

inline std::vector<std::pair<std::size_t, std::size_t>> backtrack_cells(const Reachability& t) {
    const std::size_t na = t.fs.na, nb = t.fs.nb;
    std::vector<std::pair<std::size_t, std::size_t>> path;
    std::size_t i = na - 2, j = nb - 2;
    path.emplace_back(i, j);
    while (!(i == 0 && j == 0)) {
        if (i == 0)
            --j;
        else if (j == 0)
            --i;
        else if (!t.BR(i, j).empty)
            --j;
        else
            --i;
        path.emplace_back(i, j);
    }
    std::reverse(path.begin(), path.end());
    return path;
}

}  // namespace detail

// Extracts a monotone valid sequence realizing decide_frechet(a, b, r), plus
// concrete witness points: one per crossed boundary (P3/P4, lo endpoint of
// the feasible interval) and an ordered pair per P5/P6 constraint. All
// witnesses lie on edges of a or b and satisfy their predicate at radius r.
inline RealizingSequence extract_realizing_sequence(const Curve& a, const Curve& b, double r) {
    const detail::Reachability t = detail::compute_reachability(a, b, r);
    if (!t.reachable) throw Infeasible("extract_realizing_sequence: decision is false at this radius");
    const auto cells0 = detail::backtrack_cells(t);

    RealizingSequence out;
    for (const auto& [i, j] : cells0) out.seq.cells.emplace_back(i + 1, j + 1);

    out.witnesses.push_back({PredicateId::p1(), {a.front(), b.front()}});
    out.witnesses.push_back({PredicateId::p2(), {a.back(), b.back()}});

    for (std::size_t l = 1; l < cells0.size(); ++l) {
        const auto [i0, j0] = cells0[l - 1];
        const auto [i1, j1] = cells0[l];
        if (i0 == i1) {
            const std::size_t vj = std::max(j0, j1);  // crossed b-vertex, 0-based
            const Interval iv = t.fs.bottom(i0, vj);
            out.witnesses.push_back(
                {PredicateId::p3(i0 + 1, vj + 1), {point_on_segment(a.edge(i0), iv.lo)}});
        } else {
            const std::size_t vi = std::max(i0, i1);  // crossed a-vertex
            const Interval iv = t.fs.left(vi, j0);
            out.witnesses.push_back(
                {PredicateId::p4(vi + 1, j0 + 1), {point_on_segment(b.edge(j0), iv.lo)}});
        }
    }

    for (std::size_t l = 0; l < cells0.size(); ++l) {
        for (std::size_t m = 0; m < cells0.size(); ++m) {
            if (cells0[l].first == cells0[m].first && cells0[l].second + 1 < cells0[m].second) {
                const std::size_t e = cells0[l].first;
                const std::size_t v1 = cells0[l].second + 1, v2 = cells0[m].second;
                const Interval i1 = ball_segment_intersection(a.edge(e), b.vertex(v1), r);
                const Interval i2 = ball_segment_intersection(a.edge(e), b.vertex(v2), r);
                const double t1 = i1.lo, t2 = std::max(i2.lo, t1);
                out.witnesses.push_back({PredicateId::p5(v1 + 1, e + 1, v2 + 1),
                                         {point_on_segment(a.edge(e), t1), point_on_segment(a.edge(e), t2)}});
            }
            if (cells0[l].second == cells0[m].second && cells0[l].first + 1 < cells0[m].first) {
                const std::size_t e = cells0[l].second;
                const std::size_t v1 = cells0[l].first + 1, v2 = cells0[m].first;
                const Interval i1 = ball_segment_intersection(b.edge(e), a.vertex(v1), r);
                const Interval i2 = ball_segment_intersection(b.edge(e), a.vertex(v2), r);
                const double t1 = i1.lo, t2 = std::max(i2.lo, t1);
                out.witnesses.push_back({PredicateId::p6(e + 1, v1 + 1, v2 + 1),
                                         {point_on_segment(b.edge(e), t1), point_on_segment(b.edge(e), t2)}});
            }
        }
    }
    return out;
}

// Weak-Frechet analog: a (possibly non-monotone) valid sequence from the
// connectivity search, with P3/P4 witnesses per crossed boundary.
inline RealizingSequence extract_weak_realizing_sequence(const Curve& a, const Curve& b, double r) {
    require_same_dim(a, b, "extract_weak_realizing_sequence");
    if (!detail::within_radius(a.front(), b.front(), r) || !detail::within_radius(a.back(), b.back(), r))
        throw Infeasible("extract_weak_realizing_sequence: endpoint predicate fails");
    const FreeSpaceDiagram fs = build_free_space(a, b, r);
    const std::size_t ca = fs.na - 1, cb = fs.nb - 1;
    std::vector<std::int64_t> parent(ca * cb, -2);
    std::deque<std::size_t> queue;
    parent[0] = -1;
    queue.push_back(0);
    while (!queue.empty()) {
        const std::size_t cur = queue.front();
        queue.pop_front();
        if (cur == ca * cb - 1) break;
        const std::size_t i = cur / cb, j = cur % cb;
        auto visit = [&](std::size_t ni, std::size_t nj) {
            const std::size_t id = ni * cb + nj;
            if (parent[id] == -2) {
                parent[id] = static_cast<std::int64_t>(cur);
                queue.push_back(id);
            }
        };
        if (i + 1 < ca && !fs.left(i + 1, j).empty) visit(i + 1, j);
        if (i > 0 && !fs.left(i, j).empty) visit(i - 1, j);
        if (j + 1 < cb && !fs.bottom(i, j + 1).empty) visit(i, j + 1);
        if (j > 0 && !fs.bottom(i, j).empty) visit(i, j - 1);
    }
    if (parent[ca * cb - 1] == -2) throw Infeasible("extract_weak_realizing_sequence: not connected");

    std::vector<std::pair<std::size_t, std::size_t>> cells0;
    for (std::int64_t cur = static_cast<std::int64_t>(ca * cb - 1); cur != -1;
         cur = parent[static_cast<std::size_t>(cur)])
        cells0.emplace_back(static_cast<std::size_t>(cur) / cb, static_cast<std::size_t>(cur) % cb);
    std::reverse(cells0.begin(), cells0.end());

    RealizingSequence out;
    for (const auto& [i, j] : cells0) out.seq.cells.emplace_back(i + 1, j + 1);
    out.witnesses.push_back({PredicateId::p1(), {a.front(), b.front()}});
    out.witnesses.push_back({PredicateId::p2(), {a.back(), b.back()}});
    for (std::size_t l = 1; l < cells0.size(); ++l) {
        const auto [i0, j0] = cells0[l - 1];
        const auto [i1, j1] = cells0[l];
        if (i0 == i1) {
            const std::size_t vj = std::max(j0, j1);
            const Interval iv = fs.bottom(i0, vj);
            out.witnesses.push_back(
                {PredicateId::p3(i0 + 1, vj + 1), {point_on_segment(a.edge(i0), iv.lo)}});
        } else {
            const std::size_t vi = std::max(i0, i1);
            const Interval iv = fs.left(vi, j0);
            out.witnesses.push_back(
                {PredicateId::p4(vi + 1, j0 + 1), {point_on_segment(b.edge(j0), iv.lo)}});
        }
    }
    return out;
}

}  // namespace curvedim
