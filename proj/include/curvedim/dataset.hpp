#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "curvedim/geometry.hpp"

namespace curvedim {

struct Dataset {
    std::vector<Curve> curves;  // sorted by id
    std::string source_path;
    std::size_t dimension = 0;
};

enum class DatasetFormat { jsonl, csv };

namespace detail {

inline Dataset finalize_dataset(std::vector<Curve> curves, std::string source) {
    if (curves.empty()) throw ParseError("dataset: no curves");
    std::sort(curves.begin(), curves.end(),
              [](const Curve& a, const Curve& b) { return a.id() < b.id(); });
    for (std::size_t i = 1; i < curves.size(); ++i)
        if (curves[i].id() == curves[i - 1].id())
            throw ParseError("dataset: duplicate curve id '" + curves[i].id() + "'");
    const std::size_t d = curves.front().dim();
    for (const Curve& c : curves)
        if (c.dim() != d) throw DimensionMismatch("dataset: mixed curve dimensions");
    Dataset ds;
    ds.curves = std::move(curves);
    ds.source_path = std::move(source);
    ds.dimension = d;
    return ds;
}

}  // namespace detail

// jsonl: one record per line, {"id": ..., "vertices": [[...], ...]}.
inline Dataset load_dataset_jsonl(std::istream& in, const std::string& source) {
    std::vector<Curve> curves;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        nlohmann::json rec;
        try {
            rec = nlohmann::json::parse(line);
        } catch (const nlohmann::json::exception& e) {
            throw ParseError(source + ":" + std::to_string(lineno) + ": " + e.what());
        }
        if (!rec.contains("id") || !rec.contains("vertices"))
            throw ParseError(source + ":" + std::to_string(lineno) + ": missing id or vertices");
        std::vector<Point> pts;
        std::size_t d = 0;
        for (const auto& v : rec["vertices"]) {
            Point p;
            for (const auto& x : v) p.push_back(x.get<double>());
            if (d == 0) d = p.size();
            if (p.size() != d)
                throw ParseError(source + ":" + std::to_string(lineno) + ": ragged coordinate arrays");
            pts.push_back(std::move(p));
        }
        try {
            curves.push_back(make_curve(std::move(pts), false, rec["id"].get<std::string>()));
        } catch (const Error& e) {
            throw ParseError(source + ":" + std::to_string(lineno) + ": " + e.what());
        }
    }
    return detail::finalize_dataset(std::move(curves), source);
}

// csv: header id,vertex_index,x0..x{d-1}; rows grouped by id, assembled in
// vertex_index order.
inline Dataset load_dataset_csv(std::istream& in, const std::string& source) {
    std::string line;
    if (!std::getline(in, line)) throw ParseError(source + ":1: empty file");
    std::size_t lineno = 1;

    auto split = [](const std::string& s) {
        std::vector<std::string> out;
        std::stringstream ss(s);
        std::string field;
        while (std::getline(ss, field, ',')) out.push_back(field);
        return out;
    };
    const auto header = split(line);
    if (header.size() < 3 || header[0] != "id" || header[1] != "vertex_index")
        throw ParseError(source + ":1: expected header id,vertex_index,x0,...");
    const std::size_t d = header.size() - 2;

    std::map<std::string, std::map<long, Point>> rows;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        const auto fields = split(line);
        if (fields.size() != d + 2)
            throw ParseError(source + ":" + std::to_string(lineno) + ": wrong column count");
        Point p(d);
        long idx = 0;
        try {
            idx = std::stol(fields[1]);
            for (std::size_t k = 0; k < d; ++k) p[k] = std::stod(fields[2 + k]);
        } catch (const std::exception&) {
            throw ParseError(source + ":" + std::to_string(lineno) + ": bad number");
        }
        if (!rows[fields[0]].emplace(idx, std::move(p)).second)
            throw ParseError(source + ":" + std::to_string(lineno) + ": duplicate vertex_index");
    }
    std::vector<Curve> curves;
    for (auto& [id, by_index] : rows) {
        std::vector<Point> pts;
        pts.reserve(by_index.size());
        for (auto& [idx, p] : by_index) pts.push_back(std::move(p));
        try {
            curves.push_back(make_curve(std::move(pts), false, id));
        } catch (const Error& e) {
            throw ParseError(source + ": curve '" + id + "': " + e.what());
        }
    }
    return detail::finalize_dataset(std::move(curves), source);
}

inline Dataset load_dataset(const std::string& path, DatasetFormat format) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open " + path);
    return format == DatasetFormat::jsonl ? load_dataset_jsonl(in, path) : load_dataset_csv(in, path);
}

inline nlohmann::json curve_to_json(const Curve& c) {
    nlohmann::json rec;
    rec["id"] = c.id();
    rec["vertices"] = c.vertices();
    return rec;
}

inline void save_dataset_jsonl(const std::vector<Curve>& curves, std::ostream& out) {
    for (const Curve& c : curves) out << curve_to_json(c).dump() << "\n";
}

enum class Family { zigzag, random_walk, spike, perturbed_copies };

struct GenParams {
    std::size_t n = 0;          // number of curves
    std::size_t m = 0;          // vertices per curve
    std::size_t d = 0;          // ambient dimension
    double amplitude = 1.0;
    double separation = 10.0;   // perturbed_copies: spacing between groups
    std::size_t k_groups = 2;   // perturbed_copies: number of groups
};

namespace detail {

inline std::string indexed_id(std::size_t i) {
    char buf[16];
    std::snprintf(buf, sizeof buf, "c%04zu", i);
    return buf;
}

inline Point random_unit(std::mt19937_64& rng, std::size_t d) {
    std::normal_distribution<double> g(0.0, 1.0);
    Point u(d);
    double n2 = 0.0;
    do {
        for (double& x : u) x = g(rng);
        n2 = squared_norm(u);
    } while (n2 == 0.0);
    return scaled(u, 1.0 / std::sqrt(n2));
}

// Vector sampled uniformly from the closed ball of the given radius.
inline Point random_in_ball(std::mt19937_64& rng, std::size_t d, double radius) {
    std::uniform_real_distribution<double> u01(0.0, 1.0);
    const Point u = random_unit(rng, d);
    const double r = radius * std::pow(u01(rng), 1.0 / static_cast<double>(d));
    return scaled(u, r);
}

}  // namespace detail

// Deterministic synthetic families. perturbed_copies yields k_groups widely
// separated groups whose members are vertex-wise perturbations of a group
// prototype by at most amplitude/2, so within-group Frechet distances are at
// most amplitude.
inline Dataset generate(Family family, const GenParams& params, std::uint64_t seed) {
    if (params.n < 1) throw ParamOutOfRange("generate: n must be >= 1");
    if (params.m < 2) throw ParamOutOfRange("generate: m must be >= 2");
    if (params.d < 1) throw ParamOutOfRange("generate: d must be >= 1");
    if (params.amplitude <= 0.0) throw ParamOutOfRange("generate: amplitude must be positive");
    if (family == Family::perturbed_copies && params.k_groups < 1)
        throw ParamOutOfRange("generate: k_groups must be >= 1");

    std::mt19937_64 rng(seed);
    std::normal_distribution<double> g(0.0, 1.0);
    std::uniform_real_distribution<double> u01(0.0, 1.0);
    std::vector<Curve> curves;

    switch (family) {
        case Family::zigzag: {
            for (std::size_t i = 0; i < params.n; ++i) {
                Point start(params.d);
                for (double& x : start) x = g(rng);
                const Point along = detail::random_unit(rng, params.d);
                Point across = detail::random_unit(rng, params.d);
                // orthogonalize the zig direction against the baseline
                across = sub(across, scaled(along, dot(across, along)));
                const double an = norm(across);
                if (an > 0.0) across = scaled(across, 1.0 / an);
                std::vector<Point> pts;
                for (std::size_t t = 0; t < params.m; ++t) {
                    const double sway = (t % 2 == 0 ? 1.0 : -1.0) * params.amplitude;
                    pts.push_back(
                        add(add(start, scaled(along, static_cast<double>(t))), scaled(across, sway)));
                }
                curves.push_back(make_curve(std::move(pts), false, detail::indexed_id(i)));
            }
            break;
        }
        case Family::random_walk: {
            for (std::size_t i = 0; i < params.n; ++i) {
                std::vector<Point> pts;
                Point cur(params.d);
                for (double& x : cur) x = g(rng);
                pts.push_back(cur);
                for (std::size_t t = 1; t < params.m; ++t) {
                    Point step(params.d);
                    for (double& x : step) x = params.amplitude * g(rng);
                    cur = add(cur, step);
                    pts.push_back(cur);
                }
                curves.push_back(make_curve(std::move(pts), false, detail::indexed_id(i)));
            }
            break;
        }
        case Family::spike: {
            // baseline along the first axis with alternating interior spikes
            for (std::size_t i = 0; i < params.n; ++i) {
                const Point across = detail::random_unit(rng, params.d);
                std::vector<Point> pts;
                for (std::size_t t = 0; t < params.m; ++t) {
                    Point p(params.d, 0.0);
                    p[0] = static_cast<double>(t);
                    if (t > 0 && t + 1 < params.m && t % 2 == 1) {
                        const double h = params.amplitude * (0.5 + 0.5 * u01(rng));
                        for (std::size_t kk = 0; kk < params.d; ++kk) p[kk] += h * across[kk];
                    }
                    pts.push_back(std::move(p));
                }
                curves.push_back(make_curve(std::move(pts), false, detail::indexed_id(i)));
            }
            break;
        }
        case Family::perturbed_copies: {
            std::vector<std::vector<Point>> prototypes;
            for (std::size_t gi = 0; gi < params.k_groups; ++gi) {
                std::vector<Point> proto;
                Point cur(params.d, 0.0);
                cur[0] = params.separation * static_cast<double>(gi);
                proto.push_back(cur);
                for (std::size_t t = 1; t < params.m; ++t) {
                    Point step(params.d);
                    for (double& x : step) x = g(rng);
                    cur = add(cur, step);
                    proto.push_back(cur);
                }
                prototypes.push_back(std::move(proto));
            }
            for (std::size_t i = 0; i < params.n; ++i) {
                const auto& proto = prototypes[i % params.k_groups];
                std::vector<Point> pts;
                for (const Point& p : proto)
                    pts.push_back(add(p, detail::random_in_ball(rng, params.d, params.amplitude / 2.0)));
                curves.push_back(make_curve(std::move(pts), false, detail::indexed_id(i)));
            }
            break;
        }
    }
    return detail::finalize_dataset(std::move(curves), "generated");
}

}  // namespace curvedim
