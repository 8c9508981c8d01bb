#include "bfbm/cli_runner.hpp"

#include <cmath>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "bfbm/branching_hs.hpp"
#include "bfbm/constants.hpp"
#include "bfbm/extremes.hpp"
#include "bfbm/gamma.hpp"
#include "bfbm/gaussian_bfbm.hpp"
#include "bfbm/identities.hpp"
#include "bfbm/io.hpp"
#include "bfbm/linear_hs.hpp"
#include "bfbm/prediction.hpp"
#include "bfbm/renewal.hpp"
#include "bfbm/tree.hpp"

namespace bfbm {
namespace {

using ojson = nlohmann::ordered_json;
using ConfigList = std::vector<std::pair<std::string, std::string>>;

// Writes to the given path, or to stdout when the path is empty. Binary mode
// keeps line endings at exactly '\n'.
class Sink {
public:
    explicit Sink(const std::string& path) {
        if (!path.empty()) {
            file_.open(path, std::ios::binary);
            if (!file_) throw std::runtime_error("cannot open output file: " + path);
        }
    }
    std::ostream& os() { return file_.is_open() ? file_ : std::cout; }

private:
    std::ofstream file_;
};

std::string read_text_file(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw std::runtime_error("cannot open file: " + path);
    std::ostringstream ss;
    ss << is.rdbuf();
    return ss.str();
}

HurstParams resolve_hurst(bool h_set, double H, bool a_set, double alpha) {
    if (h_set == a_set)
        throw CLI::ValidationError("exactly one of --H / --alpha must be given");
    return h_set ? make_hurst_params(H) : hurst_from_alpha(alpha);
}

ConfigList base_config(const HurstParams& p) {
    return {{"H", format_double(p.H)}, {"alpha", format_double(p.alpha)}};
}

ojson config_json(const ConfigList& cfg) {
    ojson j = ojson::object();
    for (const auto& [k, v] : cfg) j[k] = v;
    return j;
}

ojson json_envelope(const std::string& subcommand, const ConfigList& cfg) {
    ojson j;
    j["tool"] = "bfbm";
    j["version"] = kVersion;
    j["subcommand"] = subcommand;
    j["config"] = config_json(cfg);
    return j;
}

void write_json(const std::string& path, const ojson& j) {
    Sink sink(path);
    sink.os() << j.dump(2) << '\n';
}

TreeKind parse_tree_kind(const std::string& s) {
    if (s == "yule") return TreeKind::yule;
    if (s == "binary") return TreeKind::binary;
    throw CLI::ValidationError("tree kind must be yule or binary");
}

std::int32_t integral_horizon(double T) {
    double r = std::round(T);
    if (std::abs(T - r) > 1e-9)
        throw CLI::ValidationError("binary trees need an integer horizon T");
    return static_cast<std::int32_t>(r);
}

// Closed-form part of the squared walk scaling, i.e. c3 with the 1/sum(q^2)
// factor dropped. Dividing the raw walk by sqrt(unit_c3 * n^{2a+1}) yields
// values measured in units of (sum_l q_l^2)^{-1/2}, the convention used for
// the discrete-walk CSV output; it needs no renewal table.
double unit_c3(double a) {
    double g1a = gamma_fn(1.0 - a);
    return gamma_fn(1.0 - 2.0 * a) /
           (gamma_fn(a) * g1a * g1a * g1a * a * (2.0 * a + 1.0));
}

// ---------------------------------------------------------------- renewal

struct RenewalOpts {
    double H = 0.0, alpha = 0.0;
    std::int64_t n_max = 10000;
    std::string out;
};

int run_renewal(const HurstParams& p, const RenewalOpts& o) {
    RenewalTable tbl = build_renewal_table(p.alpha, o.n_max);
    ConfigList cfg = base_config(p);
    cfg.emplace_back("n_max", std::to_string(o.n_max));
    {
        std::ofstream os(o.out, std::ios::binary);
        if (!os) throw std::runtime_error("cannot open output file: " + o.out);
        write_header(os, "renewal", cfg);
        os << "n,q\n";
        for (std::int64_t i = 0; i <= tbl.max_index(); ++i)
            os << i << ',' << format_double(tbl.q[static_cast<std::size_t>(i)]) << '\n';
    }
    ojson j = json_envelope("renewal", cfg);
    j["alpha"] = p.alpha;
    j["q2_sum"] = tbl.q2_sum;
    j["c1"] = tbl.c1;
    j["c2"] = tbl.c2;
    j["c3"] = tbl.c3;
    write_json(o.out + ".json", j);
    return 0;
}

// -------------------------------------------------------- simulate-linear

struct SimLinearOpts {
    double H = 0.0, alpha = 0.0;
    std::int64_t n = 0;
    std::int64_t steps = 0;    // 0: defaults to n (the walk spans one unit)
    std::int64_t window = 0;   // 0: defaults to 10 n
    std::int64_t table_n = 20000;
    std::int64_t replicas = 1;
    std::uint64_t seed = 0;
    std::string out;
};

int run_simulate_linear(const HurstParams& p, const SimLinearOpts& o) {
    if (o.n < 1) throw CLI::ValidationError("--n must be >= 1");
    std::int64_t steps = o.steps > 0 ? o.steps : o.n;
    std::int64_t window = o.window > 0 ? o.window : 10 * o.n;
    RenewalTable tbl = build_renewal_table(p.alpha, o.table_n);

    ConfigList cfg = base_config(p);
    cfg.emplace_back("n", std::to_string(o.n));
    cfg.emplace_back("steps_per_unit", std::to_string(steps));
    cfg.emplace_back("window_past", std::to_string(window));
    cfg.emplace_back("table_n", std::to_string(o.table_n));
    cfg.emplace_back("replicas", std::to_string(o.replicas));
    cfg.emplace_back("seed", std::to_string(o.seed));

    Sink sink(o.out);
    std::ostream& os = sink.os();
    write_header(os, "simulate-linear", cfg);
    os << "replica,t,S_n_t\n";
    UrnConfig ucfg;
    ucfg.alpha = p.alpha;
    ucfg.n_total = o.n;
    ucfg.window_past = window;
    ucfg.steps_per_unit = steps;
    ucfg.seed = o.seed;
    double inv_scale = 1.0 / scaling_c(tbl.c3, steps, p.alpha);
    for (std::int64_t r = 0; r < o.replicas; ++r) {
        LinearRealization real = simulate_linear(ucfg, static_cast<std::uint64_t>(r));
        for (std::int64_t j = 0; j <= o.n; ++j) {
            double t = static_cast<double>(j) / static_cast<double>(steps);
            double v = static_cast<double>(real.walk[static_cast<std::size_t>(j)]) * inv_scale;
            os << r << ',' << format_double(t) << ',' << format_double(v) << '\n';
        }
    }
    return 0;
}

// ------------------------------------------------------------ sample-tree

struct SampleTreeOpts {
    std::string kind = "yule";
    double T = 0.0;
    std::uint64_t seed = 0;
    bool seed_set = false;
    std::string out;
};

int run_sample_tree(const SampleTreeOpts& o) {
    if (o.T < 0.0) throw CLI::ValidationError("--T must be >= 0");
    TreeTopology tree;
    if (o.kind == "yule") {
        if (!o.seed_set) throw CLI::RequiredError("--seed (yule trees are stochastic)");
        tree = sample_yule(o.T, o.seed, 0);
    } else {
        tree = binary_tree(integral_horizon(o.T));
    }
    ConfigList cfg;
    cfg.emplace_back("kind", o.kind);
    cfg.emplace_back("T", format_double(o.T));
    if (o.kind == "yule") cfg.emplace_back("seed", std::to_string(o.seed));
    Sink sink(o.out);
    write_header(sink.os(), "sample-tree", cfg);
    sink.os() << tree_to_csv(tree);
    return 0;
}

// ------------------------------------------------- simulate-bfbm-discrete

struct SimDiscreteOpts {
    double H = 0.0, alpha = 0.0;
    std::int64_t steps = 0;
    std::string tree = "yule";
    double T = 0.0;
    std::int64_t window = 0;  // 0: defaults to 10 * floor(steps * T)
    std::uint64_t seed = 0;
    std::string out;
};

int run_simulate_discrete(const HurstParams& p, const SimDiscreteOpts& o) {
    if (o.steps < 1) throw CLI::ValidationError("--steps-per-unit must be >= 1");
    if (o.T <= 0.0) throw CLI::ValidationError("--T must be > 0");
    TreeTopology tree = o.tree == "yule" ? sample_yule(o.T, o.seed, 0)
                                         : binary_tree(integral_horizon(o.T));
    std::int64_t total = static_cast<std::int64_t>(
        std::floor(o.T * static_cast<double>(o.steps)));
    std::int64_t window = o.window > 0 ? o.window : 10 * std::max<std::int64_t>(total, 1);

    ConfigList cfg = base_config(p);
    cfg.emplace_back("steps_per_unit", std::to_string(o.steps));
    cfg.emplace_back("tree", o.tree);
    cfg.emplace_back("T", format_double(o.T));
    cfg.emplace_back("window_past", std::to_string(window));
    cfg.emplace_back("seed", std::to_string(o.seed));
    cfg.emplace_back("value_unit", "(sum_l q_l^2)^(-1/2)");

    TreeUrnConfig ucfg;
    ucfg.alpha = p.alpha;
    ucfg.steps_per_unit = o.steps;
    ucfg.window_past = window;
    ucfg.seed = o.seed;
    TreeUrnRealization real = simulate_tree_urn(tree, ucfg, 0);
    double inv_scale = 1.0 / scaling_c(unit_c3(p.alpha), o.steps, p.alpha);

    Sink sink(o.out);
    std::ostream& os = sink.os();
    write_header(os, "simulate-bfbm-discrete", cfg);
    os << "branch_id,t,value\n";
    for (std::size_t b = 0; b < tree.branches.size(); ++b) {
        auto id = static_cast<std::int32_t>(b);
        const EdgeSegment& seg = real.segments[b];
        std::int64_t j0 = tree.branches[b].parent < 0 ? 0 : seg.first;
        for (std::int64_t j = j0; j <= seg.last; ++j) {
            double t = static_cast<double>(j) / static_cast<double>(o.steps);
            double v = static_cast<double>(real.walk_at(id, j)) * inv_scale;
            os << id << ',' << format_double(t) << ',' << format_double(v) << '\n';
        }
    }
    return 0;
}

// ------------------------------------------------------------ sample-bfbm

struct SampleBfbmOpts {
    double H = 0.0, alpha = 0.0;
    std::string method = "cholesky";
    std::string tree = "yule";
    std::string tree_file;
    double T = 0.0;
    double t = 0.0;  // 0: defaults to the tree horizon
    std::int64_t replicas = 100;
    std::uint64_t seed = 0;
    std::int32_t k_levels = 0;  // grem; 0: ceil(t)
    double dt = 0.0;            // whitenoise; 0: t / 64
    double s_past = 200.0;      // whitenoise past truncation
    std::string out;
};

int run_sample_bfbm(const HurstParams& p, const SampleBfbmOpts& o) {
    TreeTopology tree;
    if (!o.tree_file.empty()) {
        tree = tree_from_csv(read_text_file(o.tree_file));
    } else {
        if (o.T <= 0.0) throw CLI::ValidationError("--T must be > 0 (or pass --tree-file)");
        tree = o.tree == "yule" ? sample_yule(o.T, o.seed, 0)
                                : binary_tree(integral_horizon(o.T));
    }
    double t = o.t > 0.0 ? o.t : tree.horizon;
    if (t <= 0.0) throw CLI::ValidationError("--t must be > 0");

    ConfigList cfg = base_config(p);
    cfg.emplace_back("method", o.method);
    if (!o.tree_file.empty()) {
        cfg.emplace_back("tree_file", o.tree_file);
    } else {
        cfg.emplace_back("tree", o.tree);
        cfg.emplace_back("T", format_double(o.T));
    }
    cfg.emplace_back("t", format_double(t));
    cfg.emplace_back("replicas", std::to_string(o.replicas));
    cfg.emplace_back("seed", std::to_string(o.seed));

    EndpointSample es;
    if (o.method == "cholesky") {
        std::vector<EndpointNode> nodes;
        for (std::int32_t leaf : tree.leaves()) nodes.push_back({leaf, t});
        es = sample_cholesky(tree, nodes, p, o.seed, o.replicas);
    } else if (o.method == "whitenoise") {
        double dt = o.dt > 0.0 ? o.dt : t / 64.0;
        cfg.emplace_back("dt", format_double(dt));
        cfg.emplace_back("s_past", format_double(o.s_past));
        WhitenoiseSample ws = sample_whitenoise_tree(tree, dt, t, o.s_past, p, o.seed, o.replicas);
        cfg.emplace_back("variance_deficit", format_double(ws.variance_deficit));
        es = std::move(ws.sample);
    } else if (o.method == "grem") {
        std::int32_t K = o.k_levels > 0
                             ? o.k_levels
                             : std::max<std::int32_t>(1, static_cast<std::int32_t>(
                                                             std::ceil(t - 1e-9)));
        cfg.emplace_back("k_levels", std::to_string(K));
        TreeTopology disc = discretize(tree, K, t, /*left=*/true);
        es = sample_grem_endpoint(disc, K, t, p, o.seed, o.replicas);
    } else {
        throw CLI::ValidationError("--method must be cholesky, whitenoise, or grem");
    }

    Sink sink(o.out);
    std::ostream& os = sink.os();
    write_header(os, "sample-bfbm", cfg);
    os << "replica,branch_id,value\n";
    for (std::size_t r = 0; r < es.values.size(); ++r)
        for (std::size_t i = 0; i < es.nodes.size(); ++i)
            os << r << ',' << es.nodes[i].branch << ',' << format_double(es.values[r][i])
               << '\n';
    return 0;
}

// ------------------------------------------------------------- covariance

struct CovOpts {
    double H = 0.0, alpha = 0.0;
    double t1 = 0.0, t2 = 0.0, s = 0.0;
    std::string mode = "closed";
    double tol = 1e-8;
    std::string out;
};

int run_covariance(const HurstParams& p, const CovOpts& o) {
    double value = 0.0;
    double est_error = 0.0;
    if (o.mode == "closed") {
        if (o.t1 != o.t2)
            throw CLI::ValidationError("mode closed needs equal times --t1 == --t2");
        value = rho_closed(o.t1, o.s, p);
    } else if (o.mode == "kernel") {
        value = rho_kernel_quadrature(o.t1, o.t2, o.s, p, o.tol);
        est_error = o.tol;
    } else if (o.mode == "hs") {
        value = rho_hs_quadrature(o.t1, o.t2, o.s, p, o.tol);
        est_error = o.tol;
    } else {
        throw CLI::ValidationError("--mode must be closed, kernel, or hs");
    }
    ConfigList cfg = base_config(p);
    cfg.emplace_back("t1", format_double(o.t1));
    cfg.emplace_back("t2", format_double(o.t2));
    cfg.emplace_back("s", format_double(o.s));
    cfg.emplace_back("mode", o.mode);
    cfg.emplace_back("tol", format_double(o.tol));
    ojson j = json_envelope("covariance", cfg);
    j["value"] = value;
    j["est_error"] = est_error;
    write_json(o.out, j);
    return 0;
}

// ------------------------------------------------------------ estimate-max

struct MaxOpts {
    double H = 0.0, alpha = 0.0;
    std::string tree = "yule";
    std::vector<double> t_list;
    std::int64_t replicas = 200;
    std::string method = "grem";
    std::int32_t k_levels = 0;
    std::uint64_t seed = 0;
    std::string out;
};

int run_estimate_max(const HurstParams& p, const MaxOpts& o) {
    MaxExperiment ex;
    ex.kind = parse_tree_kind(o.tree);
    ex.t_list = o.t_list;
    ex.replicas = o.replicas;
    ex.method = o.method;
    ex.k_levels = o.k_levels;
    ex.seed = o.seed;
    ex.H = p.H;
    std::vector<MaxResult> results = estimate_max(ex);

    ConfigList cfg = base_config(p);
    std::string tl;
    for (std::size_t i = 0; i < o.t_list.size(); ++i) {
        if (i) tl += ' ';
        tl += format_double(o.t_list[i]);
    }
    cfg.emplace_back("tree", o.tree);
    cfg.emplace_back("t_list", tl);
    cfg.emplace_back("replicas", std::to_string(o.replicas));
    cfg.emplace_back("method", o.method);
    cfg.emplace_back("k_levels", std::to_string(o.k_levels));
    cfg.emplace_back("seed", std::to_string(o.seed));

    {
        std::ofstream os(o.out, std::ios::binary);
        if (!os) throw std::runtime_error("cannot open output file: " + o.out);
        write_header(os, "estimate-max", cfg);
        os << "t,replica,M,ratio\n";
        for (const MaxResult& res : results)
            for (std::size_t i = 0; i < res.samples.size(); ++i)
                os << format_double(res.t) << ',' << i << ',' << format_double(res.samples[i])
                   << ',' << format_double(res.samples[i] / res.speed) << '\n';
    }
    ojson j = json_envelope("estimate-max", cfg);
    ojson arr = ojson::array();
    const char* qname[] = {"p05", "p25", "p50", "p75", "p95"};
    for (const MaxResult& res : results) {
        ojson e;
        e["t"] = res.t;
        e["m_t"] = res.speed;
        e["mean_ratio"] = res.mean_ratio;
        e["sd_ratio"] = res.sd_ratio;
        e["se_ratio"] = res.se_ratio;
        ojson q = ojson::object();
        for (std::size_t k = 0; k < res.quantiles.size() && k < 5; ++k)
            q[qname[k]] = res.quantiles[k];
        e["ratio_quantiles"] = q;
        arr.push_back(e);
    }
    j["results"] = arr;
    write_json(o.out + ".json", j);
    return 0;
}

// ------------------------------------------------------------ predict-check

struct PredictOpts {
    double H = 0.0, alpha = 0.0;
    double t = 1.0;
    double depth = 50.0;
    std::int64_t grid = 1000;
    int levels = 3;
    std::int64_t replicas = 100;
    std::uint64_t seed = 0;
    std::string out;
};

int run_predict_check(const HurstParams& p, const PredictOpts& o) {
    std::vector<PredictionLevel> levels =
        prediction_check(p, o.t, o.depth, o.grid, o.levels, o.replicas, o.seed);
    ConfigList cfg = base_config(p);
    cfg.emplace_back("t", format_double(o.t));
    cfg.emplace_back("depth", format_double(o.depth));
    cfg.emplace_back("grid", std::to_string(o.grid));
    cfg.emplace_back("levels", std::to_string(o.levels));
    cfg.emplace_back("replicas", std::to_string(o.replicas));
    cfg.emplace_back("seed", std::to_string(o.seed));
    ojson j = json_envelope("predict-check", cfg);
    ojson arr = ojson::array();
    for (const PredictionLevel& lv : levels) {
        ojson e;
        e["grid"] = lv.grid;
        e["mean_abs"] = lv.mean_abs;
        e["normalized"] = lv.normalized;
        arr.push_back(e);
    }
    j["levels"] = arr;
    j["discrepancy_threshold"] = 0.05 * std::pow(o.t, p.H);
    write_json(o.out, j);
    return 0;
}

// --------------------------------------------------------- verify-identities

struct IdentOpts {
    double H = 0.0, alpha = 0.0;
    double tol = 1e-4;
    bool sweep = false;
    std::string out;
};

int run_verify_identities(const HurstParams& p, const IdentOpts& o) {
    std::vector<IdentityReport> reports;
    if (!o.sweep) {
        reports.push_back(check_id1(2.0, 1.0, 0.5, p, o.tol));
        reports.push_back(check_id1(2.0, 1.0, 0.0, p, o.tol));
        reports.push_back(check_id1(1.5, 1.0, 0.25, p, o.tol));
        reports.push_back(check_id2(2.0, 1.0, p, o.tol));
        reports.push_back(check_id2(1.0, 0.5, p, o.tol));
        reports.push_back(check_id3(2.0, 0.5, p, 1e4, o.tol));
    } else {
        for (double t1 : {1.0, 2.0})
            for (double t2 : {1.0, 1.5})
                for (double s : {0.0, 0.5})
                    reports.push_back(check_id1(t1, t2, s, p, o.tol));
        for (auto [t, s] : {std::pair{2.0, 1.0}, {2.0, 0.5}, {3.0, 2.0}, {1.5, 0.75}})
            reports.push_back(check_id2(t, s, p, o.tol));
        for (auto [t, s] : {std::pair{2.0, 0.5}, {3.0, 0.5}, {2.0, 0.25}, {1.5, 0.75}})
            reports.push_back(check_id3(t, s, p, 1e4, o.tol));
    }

    ConfigList cfg = base_config(p);
    cfg.emplace_back("tol", format_double(o.tol));
    cfg.emplace_back("sweep", o.sweep ? "true" : "false");
    ojson j = json_envelope("verify-identities", cfg);
    ojson arr = ojson::array();
    bool all_pass = true;
    for (const IdentityReport& r : reports) {
        all_pass = all_pass && r.pass;
        ojson e;
        e["tag"] = r.tag;
        e["params"] = r.params;
        e["lhs"] = r.lhs;
        e["rhs"] = r.rhs;
        e["abs_diff"] = r.abs_diff;
        e["tolerance"] = r.tolerance;
        e["pass"] = r.pass;
        e["status"] = r.status;
        if (r.tag == "id3") e["extrapolation_spread"] = r.extrapolation_spread;
        arr.push_back(e);
    }
    j["reports"] = arr;
    j["all_pass"] = all_pass;
    write_json(o.out, j);
    return all_pass ? 0 : 1;
}

}  // namespace

int run_cli(int argc, char** argv) {
    CLI::App app{"simulation and verification laboratory for branching fractional "
                 "Brownian motion (H > 1/2)"};
    app.require_subcommand(1);
    app.set_config("--config", "", "key = value configuration file; flags take precedence");

    int rc = 0;

    // renewal
    RenewalOpts ren;
    CLI::App* c_ren = app.add_subcommand("renewal", "renewal sequence q_n and urn constants");
    auto* ren_h = c_ren->add_option("--H", ren.H, "Hurst index in (1/2, 1)");
    auto* ren_a = c_ren->add_option("--alpha", ren.alpha, "tail exponent in (0, 1/2)");
    c_ren->add_option("--n-max", ren.n_max, "table length")->check(CLI::PositiveNumber);
    c_ren->add_option("--out", ren.out, "CSV path; a JSON sidecar goes to <out>.json")
        ->required();
    c_ren->callback([&] {
        rc = run_renewal(resolve_hurst(ren_h->count() > 0, ren.H, ren_a->count() > 0, ren.alpha),
                         ren);
    });

    // simulate-linear
    SimLinearOpts lin;
    CLI::App* c_lin =
        app.add_subcommand("simulate-linear", "one-line urn walk, rescaled to fBM units");
    auto* lin_h = c_lin->add_option("--H", lin.H, "Hurst index in (1/2, 1)");
    auto* lin_a = c_lin->add_option("--alpha", lin.alpha, "tail exponent in (0, 1/2)");
    c_lin->add_option("--n", lin.n, "number of sites")->required();
    c_lin->add_option("--steps-per-unit", lin.steps, "sites per unit time (default n)");
    c_lin->add_option("--window", lin.window, "past window (default 10 n)");
    c_lin->add_option("--table-n", lin.table_n, "renewal table length for the scaling constant");
    c_lin->add_option("--replicas", lin.replicas, "independent replicas");
    c_lin->add_option("--seed", lin.seed, "master seed")->required();
    c_lin->add_option("--out", lin.out, "CSV path (default stdout)");
    c_lin->callback([&] {
        rc = run_simulate_linear(
            resolve_hurst(lin_h->count() > 0, lin.H, lin_a->count() > 0, lin.alpha), lin);
    });

    // sample-tree
    SampleTreeOpts st;
    CLI::App* c_st = app.add_subcommand("sample-tree", "draw a time tree and print it as CSV");
    c_st->add_option("--kind", st.kind, "yule | binary")
        ->check(CLI::IsMember({"yule", "binary"}));
    c_st->add_option("--T", st.T, "horizon")->required();
    auto* st_seed = c_st->add_option("--seed", st.seed, "master seed (required for yule)");
    c_st->add_option("--out", st.out, "CSV path (default stdout)");
    c_st->callback([&] {
        st.seed_set = st_seed->count() > 0;
        rc = run_sample_tree(st);
    });

    // simulate-bfbm-discrete
    SimDiscreteOpts dis;
    CLI::App* c_dis = app.add_subcommand(
        "simulate-bfbm-discrete", "tree-indexed urn walk along every branch of a time tree");
    auto* dis_h = c_dis->add_option("--H", dis.H, "Hurst index in (1/2, 1)");
    auto* dis_a = c_dis->add_option("--alpha", dis.alpha, "tail exponent in (0, 1/2)");
    c_dis->add_option("--steps-per-unit", dis.steps, "sites per unit time")->required();
    c_dis->add_option("--tree", dis.tree, "yule | binary")
        ->check(CLI::IsMember({"yule", "binary"}));
    c_dis->add_option("--T", dis.T, "horizon")->required();
    c_dis->add_option("--window", dis.window, "past window (default 10 floor(T steps))");
    c_dis->add_option("--seed", dis.seed, "master seed")->required();
    c_dis->add_option("--out", dis.out, "CSV path (default stdout)");
    c_dis->callback([&] {
        rc = run_simulate_discrete(
            resolve_hurst(dis_h->count() > 0, dis.H, dis_a->count() > 0, dis.alpha), dis);
    });

    // sample-bfbm
    SampleBfbmOpts sb;
    CLI::App* c_sb = app.add_subcommand("sample-bfbm",
                                        "joint Gaussian endpoint samples on a time tree");
    auto* sb_h = c_sb->add_option("--H", sb.H, "Hurst index in (1/2, 1)");
    auto* sb_a = c_sb->add_option("--alpha", sb.alpha, "tail exponent in (0, 1/2)");
    c_sb->add_option("--method", sb.method, "cholesky | whitenoise | grem")
        ->check(CLI::IsMember({"cholesky", "whitenoise", "grem"}));
    c_sb->add_option("--tree", sb.tree, "yule | binary")
        ->check(CLI::IsMember({"yule", "binary"}));
    c_sb->add_option("--tree-file", sb.tree_file, "load the tree from a sample-tree CSV");
    c_sb->add_option("--T", sb.T, "horizon (when not loading a tree file)");
    c_sb->add_option("--t", sb.t, "evaluation time (default: tree horizon)");
    c_sb->add_option("--replicas", sb.replicas, "independent replicas");
    c_sb->add_option("--seed", sb.seed, "master seed")->required();
    c_sb->add_option("--k-levels", sb.k_levels, "grem levels (default ceil(t))");
    c_sb->add_option("--dt", sb.dt, "whitenoise cell width (default t/64)");
    c_sb->add_option("--s-past", sb.s_past, "whitenoise past truncation depth");
    c_sb->add_option("--out", sb.out, "CSV path (default stdout)");
    c_sb->callback([&] {
        rc = run_sample_bfbm(resolve_hurst(sb_h->count() > 0, sb.H, sb_a->count() > 0, sb.alpha),
                             sb);
    });

    // covariance
    CovOpts cov;
    CLI::App* c_cov =
        app.add_subcommand("covariance", "two-branch covariance rho(t1, t2, s), three routes");
    auto* cov_h = c_cov->add_option("--H", cov.H, "Hurst index in (1/2, 1)");
    auto* cov_a = c_cov->add_option("--alpha", cov.alpha, "tail exponent in (0, 1/2)");
    c_cov->add_option("--t1", cov.t1, "first time")->required();
    c_cov->add_option("--t2", cov.t2, "second time")->required();
    c_cov->add_option("--s", cov.s, "split time")->required();
    c_cov->add_option("--mode", cov.mode, "closed | kernel | hs")
        ->check(CLI::IsMember({"closed", "kernel", "hs"}));
    c_cov->add_option("--tol", cov.tol, "quadrature tolerance");
    c_cov->add_option("--out", cov.out, "JSON path (default stdout)");
    c_cov->callback([&] {
        rc = run_covariance(resolve_hurst(cov_h->count() > 0, cov.H, cov_a->count() > 0, cov.alpha),
                            cov);
    });

    // estimate-max
    MaxOpts mx;
    CLI::App* c_mx = app.add_subcommand("estimate-max",
                                        "Monte Carlo of the branch maximum against m(t)");
    auto* mx_h = c_mx->add_option("--H", mx.H, "Hurst index in (1/2, 1)");
    auto* mx_a = c_mx->add_option("--alpha", mx.alpha, "tail exponent in (0, 1/2)");
    c_mx->add_option("--tree", mx.tree, "yule | binary")
        ->check(CLI::IsMember({"yule", "binary"}));
    c_mx->add_option("--t-list", mx.t_list, "evaluation times, comma separated")
        ->required()
        ->delimiter(',');
    c_mx->add_option("--replicas", mx.replicas, "replicas per time");
    c_mx->add_option("--method", mx.method, "grem | cholesky")
        ->check(CLI::IsMember({"grem", "cholesky"}));
    c_mx->add_option("--k-levels", mx.k_levels, "grem levels (default ceil(t))");
    c_mx->add_option("--seed", mx.seed, "master seed")->required();
    c_mx->add_option("--out", mx.out, "CSV path; a JSON summary goes to <out>.json")
        ->required();
    c_mx->callback([&] {
        rc = run_estimate_max(resolve_hurst(mx_h->count() > 0, mx.H, mx_a->count() > 0, mx.alpha),
                              mx);
    });

    // predict-check
    PredictOpts pr;
    CLI::App* c_pr = app.add_subcommand(
        "predict-check", "conditioning oracle vs kernel-weighted increments under refinement");
    auto* pr_h = c_pr->add_option("--H", pr.H, "Hurst index in (1/2, 1)");
    auto* pr_a = c_pr->add_option("--alpha", pr.alpha, "tail exponent in (0, 1/2)");
    c_pr->add_option("--t", pr.t, "prediction time")->required();
    c_pr->add_option("--depth", pr.depth, "observed past depth")->required();
    c_pr->add_option("--grid", pr.grid, "finest past grid size")->required();
    c_pr->add_option("--levels", pr.levels, "number of dyadic levels");
    c_pr->add_option("--replicas", pr.replicas, "path replicas");
    c_pr->add_option("--seed", pr.seed, "master seed")->required();
    c_pr->add_option("--out", pr.out, "JSON path (default stdout)");
    c_pr->callback([&] {
        rc = run_predict_check(resolve_hurst(pr_h->count() > 0, pr.H, pr_a->count() > 0, pr.alpha),
                               pr);
    });

    // verify-identities
    IdentOpts id;
    CLI::App* c_id = app.add_subcommand("verify-identities",
                                        "numerical checks of the covariance identities");
    auto* id_h = c_id->add_option("--H", id.H, "Hurst index in (1/2, 1)");
    auto* id_a = c_id->add_option("--alpha", id.alpha, "tail exponent in (0, 1/2)");
    c_id->add_option("--tol", id.tol, "pass tolerance");
    c_id->add_flag("--sweep", id.sweep, "run the extended parameter grid");
    c_id->add_option("--out", id.out, "JSON path (default stdout)");
    c_id->callback([&] {
        rc = run_verify_identities(
            resolve_hurst(id_h->count() > 0, id.H, id_a->count() > 0, id.alpha), id);
    });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return rc;
}

}  // namespace bfbm
