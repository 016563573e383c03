// Command-line frontend: dataset generation, embedding, distance matrices,
// distortion verification, simplification and clustering, with reproducible
// seeds and machine-readable JSON reports.
//
// Exit codes: 0 all checks passed, 1 a check failed, 2 usage or input error.

#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "curvedim/curvedim.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace curvedim;

namespace {

struct CommonOpts {
    std::string input;
    std::string format = "jsonl";
    std::string out;
    int workers = 1;
};

Dataset load_input(const CommonOpts& c) {
    return load_dataset(c.input, c.format == "csv" ? DatasetFormat::csv : DatasetFormat::jsonl);
}

void write_text(const fs::path& path, const std::string& text) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw ParseError("cannot write " + path.string());
    f << text;
}

// Reports are pure functions of inputs and flags; wall-clock timing goes to
// stderr only so reruns stay byte-identical.
void finish(const CommonOpts& c, json& report, bool passed,
            std::chrono::steady_clock::time_point started) {
    report["passed"] = passed;
    fs::create_directories(c.out);
    write_text(fs::path(c.out) / "report.json", report.dump(2) + "\n");
    const auto ms =
        std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() - started);
    std::cerr << report["command"].get<std::string>() << ": " << (passed ? "pass" : "FAIL") << " ("
              << ms.count() << " ms), report at " << (fs::path(c.out) / "report.json").string() << "\n";
}

json cert_to_json(const CertReport& r) {
    return json{{"passed", r.passed},
                {"epsilon", r.epsilon},
                {"pair_count", r.pair_count},
                {"failure_count", r.failure_count},
                {"max_expansion", r.max_expansion},
                {"max_contraction", r.max_contraction}};
}

CertifyMode parse_certify(const std::string& s) {
    if (s == "off") return CertifyMode::off;
    if (s == "lower") return CertifyMode::lower;
    if (s == "full") return CertifyMode::full;
    throw ParamOutOfRange("unknown certify mode: " + s);
}

std::vector<std::vector<double>> pairwise_matrix(const std::vector<Curve>& curves,
                                                 const std::string& metric, int workers) {
    const std::size_t n = curves.size();
    std::vector<std::vector<double>> mat(n, std::vector<double>(n, 0.0));
    std::vector<std::pair<std::size_t, std::size_t>> pairs;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) pairs.emplace_back(i, j);
    parallel_chunks(pairs.size(), 4, workers, [&](std::size_t, std::size_t lo, std::size_t hi) {
        for (std::size_t k = lo; k < hi; ++k) {
            const auto [i, j] = pairs[k];
            double d = 0.0;
            if (metric == "discrete")
                d = discrete_frechet(curves[i], curves[j]);
            else if (metric == "weak")
                d = weak_frechet_distance(curves[i], curves[j]);
            else
                d = frechet_distance(curves[i], curves[j]);
            mat[i][j] = mat[j][i] = d;
        }
    });
    return mat;
}

int cmd_generate(const CommonOpts& c, const std::string& family, const GenParams& params,
                 std::uint64_t seed) {
    const auto started = std::chrono::steady_clock::now();
    Family fam;
    if (family == "zigzag")
        fam = Family::zigzag;
    else if (family == "random_walk")
        fam = Family::random_walk;
    else if (family == "spike")
        fam = Family::spike;
    else if (family == "perturbed_copies")
        fam = Family::perturbed_copies;
    else
        throw ParamOutOfRange("unknown family: " + family);

    const Dataset ds = generate(fam, params, seed);
    fs::create_directories(c.out);
    std::ostringstream body;
    save_dataset_jsonl(ds.curves, body);
    write_text(fs::path(c.out) / "dataset.jsonl", body.str());

    json report;
    report["command"] = "generate";
    report["params"] = {{"family", family},
                        {"n", params.n},
                        {"m", params.m},
                        {"d", params.d},
                        {"amplitude", params.amplitude},
                        {"separation", params.separation},
                        {"groups", params.k_groups},
                        {"seed", seed}};
    report["results"] = {{"curves", ds.curves.size()}, {"dimension", ds.dimension}};
    finish(c, report, true, started);
    return 0;
}

int cmd_embed(const CommonOpts& c, double eps, std::uint64_t seed, double beta,
              const std::string& certify) {
    const auto started = std::chrono::steady_clock::now();
    const Dataset ds = load_input(c);
    const CertifyMode mode = parse_certify(certify);

    bool pass = true;
    json report;
    report["command"] = "embed";
    report["params"] = {{"input", c.input},     {"format", c.format},
                        {"eps", eps},           {"seed", seed},
                        {"beta", beta},         {"certify", certify},
                        {"n", ds.curves.size()},
                        {"d", ds.dimension}};
    try {
        const EmbedResult res = embed_curve_set(ds.curves, eps, seed, mode, beta, 16, c.workers);
        fs::create_directories(c.out);
        std::ostringstream body;
        save_dataset_jsonl(res.curves, body);
        write_text(fs::path(c.out) / "embedded.jsonl", body.str());
        write_text(fs::path(c.out) / "map.json", map_to_json(res.map).dump(2) + "\n");
        report["results"] = {{"d_prime", res.d_prime},
                             {"target_dim", res.target_dim},
                             {"no_reduction", res.no_reduction},
                             {"attempts", res.attempts}};
        if (res.report) {
            report["results"]["certificate"] = cert_to_json(*res.report);
            pass = res.report->passed;
        }
    } catch (const RetriesExhausted& e) {
        report["results"] = {{"certificate", cert_to_json(e.last_report)}, {"retries_exhausted", true}};
        pass = false;
    }
    finish(c, report, pass, started);
    return pass ? 0 : 1;
}

int cmd_dist(const CommonOpts& c, const std::string& metric) {
    const auto started = std::chrono::steady_clock::now();
    const Dataset ds = load_input(c);
    json report;
    report["command"] = "dist";
    report["params"] = {{"input", c.input}, {"format", c.format}, {"metric", metric}};
    std::vector<std::string> ids;
    for (const Curve& cu : ds.curves) ids.push_back(cu.id());
    report["results"] = {{"ids", ids}, {"matrix", pairwise_matrix(ds.curves, metric, c.workers)}};
    finish(c, report, true, started);
    return 0;
}

int cmd_verify(const CommonOpts& c, double eps, std::uint64_t seed, double beta,
               const std::string& certify, bool oracle) {
    const auto started = std::chrono::steady_clock::now();
    const Dataset ds = load_input(c);
    const CertifyMode mode = parse_certify(certify);

    json report;
    report["command"] = "verify";
    report["params"] = {{"input", c.input}, {"format", c.format}, {"eps", eps},
                        {"seed", seed},     {"beta", beta},       {"certify", certify},
                        {"oracle", oracle}};

    bool cert_ok = true;
    json results;
    std::vector<Curve> embedded;
    try {
        const EmbedResult res = embed_curve_set(ds.curves, eps, seed, mode, beta, 16, c.workers);
        embedded = res.curves;
        results["d_prime"] = res.d_prime;
        results["no_reduction"] = res.no_reduction;
        if (res.report) {
            results["certificate"] = cert_to_json(*res.report);
            cert_ok = res.report->passed;
        }
    } catch (const RetriesExhausted& e) {
        results["certificate"] = cert_to_json(e.last_report);
        results["retries_exhausted"] = true;
        report["results"] = results;
        finish(c, report, false, started);
        return 1;
    }

    const auto before = pairwise_matrix(ds.curves, "continuous", c.workers);
    const auto after = pairwise_matrix(embedded, "continuous", c.workers);
    double max_distortion = 0.0;
    for (std::size_t i = 0; i < before.size(); ++i)
        for (std::size_t j = i + 1; j < before.size(); ++j)
            if (before[i][j] > 0.0)
                max_distortion =
                    std::max(max_distortion, std::abs(after[i][j] - before[i][j]) / before[i][j]);
    std::vector<std::string> ids;
    for (const Curve& cu : ds.curves) ids.push_back(cu.id());
    results["ids"] = ids;
    results["before"] = before;
    results["after"] = after;
    results["max_distortion"] = max_distortion;

    bool oracle_ok = true;
    if (oracle) {
        std::size_t band_checked = 0, discrete_checked = 0;
        for (std::size_t i = 0; i < ds.curves.size() && oracle_ok; ++i) {
            for (std::size_t j = i + 1; j < ds.curves.size() && oracle_ok; ++j) {
                const auto band = oracle::resampled_frechet_band(ds.curves[i], ds.curves[j], 0.01);
                oracle_ok = band.lower - 1e-9 <= before[i][j] && before[i][j] <= band.upper + 1e-9;
                ++band_checked;
                if (ds.curves[i].size() + ds.curves[j].size() <= 14) {
                    oracle_ok = oracle_ok &&
                                discrete_frechet(ds.curves[i], ds.curves[j]) ==
                                    oracle::brute_discrete_frechet(ds.curves[i], ds.curves[j]);
                    ++discrete_checked;
                }
            }
        }
        results["oracle"] = {{"band_checked", band_checked},
                             {"discrete_checked", discrete_checked},
                             {"ok", oracle_ok}};
    }

    const bool pass = cert_ok && max_distortion <= eps && oracle_ok;
    report["results"] = results;
    finish(c, report, pass, started);
    return pass ? 0 : 1;
}

int cmd_simplify(const CommonOpts& c, std::size_t ell) {
    const auto started = std::chrono::steady_clock::now();
    const Dataset ds = load_input(c);
    json report;
    report["command"] = "simplify";
    report["params"] = {{"input", c.input}, {"format", c.format}, {"ell", ell}};

    std::vector<SimplificationResult> results(ds.curves.size());
    parallel_chunks(ds.curves.size(), 1, c.workers, [&](std::size_t, std::size_t lo, std::size_t hi) {
        for (std::size_t i = lo; i < hi; ++i) results[i] = simplify_curve(ds.curves[i], ell);
    });

    std::vector<Curve> simplified;
    json per_curve = json::array();
    for (std::size_t i = 0; i < results.size(); ++i) {
        simplified.push_back(results[i].curve);
        per_curve.push_back({{"id", ds.curves[i].id()},
                             {"indices", results[i].indices},
                             {"cost", results[i].cost},
                             {"error", results[i].error}});
    }
    fs::create_directories(c.out);
    std::ostringstream body;
    save_dataset_jsonl(simplified, body);
    write_text(fs::path(c.out) / "simplified.jsonl", body.str());
    report["results"] = {{"curves", per_curve}};
    finish(c, report, true, started);
    return 0;
}

int cmd_cluster(const CommonOpts& c, const std::string& objective, std::size_t k, std::size_t ell,
                const std::string& median_mode, bool oracle) {
    const auto started = std::chrono::steady_clock::now();
    const Dataset ds = load_input(c);
    json report;
    report["command"] = "cluster";
    report["params"] = {{"input", c.input}, {"format", c.format},      {"objective", objective},
                        {"k", k},           {"ell", ell},              {"median_mode", median_mode},
                        {"oracle", oracle}};

    bool pass = true;
    json results;
    if (objective == "center") {
        const ClusteringResult res = kl_center(ds.curves, k, ell, c.workers);
        json centers = json::array();
        for (const Curve& ctr : res.centers) centers.push_back(curve_to_json(ctr));
        results["centers"] = centers;
        results["assignment"] = res.assignment;
        results["cost"] = res.cost;
        if (oracle) {
            const double recomputed = clustering_cost(ds.curves, res.centers, Objective::center);
            results["oracle"] = {{"recomputed_cost", recomputed}};
            pass = std::abs(recomputed - res.cost) <= 1e-9;
        }
    } else {
        const MedianMode mode =
            median_mode == "exhaustive" ? MedianMode::exhaustive : MedianMode::local_search;
        const double cost = kl_median_cost(ds.curves, k, ell, mode, c.workers);
        results["cost"] = cost;
        if (oracle && mode == MedianMode::local_search) {
            const double ex = kl_median_cost(ds.curves, k, ell, MedianMode::exhaustive, c.workers);
            results["oracle"] = {{"exhaustive_cost", ex}};
            pass = cost >= ex - 1e-12;
        }
    }
    report["results"] = results;
    finish(c, report, pass, started);
    return pass ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"curve dimensionality reduction with Frechet guarantees"};
    app.require_subcommand(1);

    CommonOpts common;
    auto add_common = [&common](CLI::App* sub, bool needs_input = true) {
        if (needs_input) {
            sub->add_option("--input", common.input, "input dataset path")->required();
            sub->add_option("--format", common.format, "jsonl or csv")
                ->check(CLI::IsMember({"jsonl", "csv"}));
        }
        sub->add_option("--out", common.out, "output directory")->required();
        sub->add_option("--workers", common.workers, "parallel workers")->check(CLI::Range(1, 64));
    };

    // generate
    auto* gen = app.add_subcommand("generate", "emit a synthetic dataset");
    std::string family = "random_walk";
    GenParams gp;
    std::uint64_t seed = 0;
    gen->add_option("--family", family, "zigzag|random_walk|spike|perturbed_copies")->required();
    gen->add_option("--n", gp.n, "number of curves")->required();
    gen->add_option("--m", gp.m, "vertices per curve")->required();
    gen->add_option("--d", gp.d, "ambient dimension")->required();
    gen->add_option("--amplitude", gp.amplitude, "family amplitude");
    gen->add_option("--separation", gp.separation, "group separation (perturbed_copies)");
    gen->add_option("--groups", gp.k_groups, "number of groups (perturbed_copies)");
    gen->add_option("--seed", seed, "generator seed")->required();
    add_common(gen, false);

    // embed
    auto* emb = app.add_subcommand("embed", "embed a dataset with a random linear map");
    double eps = 0.2, beta = 2.0;
    std::string certify = "lower";
    emb->add_option("--eps", eps, "target distortion in (0,1)")->required();
    emb->add_option("--seed", seed, "map seed")->required();
    emb->add_option("--beta", beta, "success exponent");
    emb->add_option("--certify", certify, "off|lower|full")->check(CLI::IsMember({"off", "lower", "full"}));
    add_common(emb);

    // dist
    auto* dst = app.add_subcommand("dist", "pairwise Frechet distance matrix");
    std::string metric = "continuous";
    dst->add_option("--metric", metric, "discrete|weak|continuous")
        ->check(CLI::IsMember({"discrete", "weak", "continuous"}));
    add_common(dst);

    // verify
    auto* ver = app.add_subcommand("verify", "embed and compare distances before vs after");
    bool oracle = false;
    ver->add_option("--eps", eps, "target distortion in (0,1)")->required();
    ver->add_option("--seed", seed, "map seed")->required();
    ver->add_option("--beta", beta, "success exponent");
    ver->add_option("--certify", certify, "off|lower|full")->check(CLI::IsMember({"off", "lower", "full"}));
    ver->add_flag("--oracle", oracle, "cross-check with brute-force oracles");
    add_common(ver);

    // simplify
    auto* simp = app.add_subcommand("simplify", "vertex-restricted ell-simplification");
    std::size_t ell = 2, k = 1;
    simp->add_option("--ell", ell, "max vertices per simplified curve")->required();
    add_common(simp);

    // cluster
    auto* clu = app.add_subcommand("cluster", "(k,ell)-center / median clustering");
    std::string objective = "center", median_mode = "exhaustive";
    clu->add_option("--objective", objective, "center|median")
        ->check(CLI::IsMember({"center", "median"}));
    clu->add_option("--k", k, "number of centers")->required();
    clu->add_option("--ell", ell, "center complexity bound")->required();
    clu->add_option("--median-mode", median_mode, "exhaustive|local_search")
        ->check(CLI::IsMember({"exhaustive", "local_search"}));
    clu->add_flag("--oracle", oracle, "cross-check costs");
    add_common(clu);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (gen->parsed()) return cmd_generate(common, family, gp, seed);
        if (emb->parsed()) return cmd_embed(common, eps, seed, beta, certify);
        if (dst->parsed()) return cmd_dist(common, metric);
        if (ver->parsed()) return cmd_verify(common, eps, seed, beta, certify, oracle);
        if (simp->parsed()) return cmd_simplify(common, ell);
        if (clu->parsed()) return cmd_cluster(common, objective, k, ell, median_mode, oracle);
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 2;
}
