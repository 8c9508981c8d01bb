#include "bfbm/linear_hs.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "bfbm/parallel.hpp"
#include "bfbm/quadrature.hpp"
#include "bfbm/summation.hpp"
#include "bfbm/union_find.hpp"

namespace bfbm {

namespace {

std::int64_t draw_offset(const OffsetSampler& sampler, const UrnConfig& cfg,
                         std::uint64_t replica, std::int64_t site) {
    if (cfg.forced_offset > 0) return cfg.forced_offset;
    double u = unit_from_key({cfg.seed, replica, kKindOffset, static_cast<std::uint64_t>(site)});
    return sampler.sample(u);
}

int type_from_root(std::uint64_t seed, std::uint64_t replica, std::int64_t root) {
    std::uint64_t h = mix::key_hash({seed, replica, kKindType, static_cast<std::uint64_t>(root)});
    return (h & 1u) ? 1 : -1;
}

}  // namespace

LinearRealization simulate_linear(const UrnConfig& cfg, std::uint64_t replica) {
    if (cfg.n_total < 1) throw std::invalid_argument("simulate_linear: n_total >= 1 required");
    if (cfg.window_past < 0) throw std::invalid_argument("simulate_linear: window_past >= 0 required");
    OffsetSampler sampler(cfg.alpha);

    std::int64_t w = cfg.window_past;
    std::size_t total = static_cast<std::size_t>(w + cfg.n_total + 1);
    UnionFind uf(total);
    std::vector<char> is_root(total, 0);
    is_root[0] = 1;  // site -w has no in-window ancestor
    for (std::int64_t i = -w + 1; i <= cfg.n_total; ++i) {
        std::int64_t p = i - draw_offset(sampler, cfg, replica, i);
        if (p < -w)
            is_root[static_cast<std::size_t>(i + w)] = 1;
        else
            uf.unite(static_cast<std::size_t>(i + w), static_cast<std::size_t>(p + w));
    }

    // every component contains exactly one root site; its identity fixes the type
    LinearRealization out;
    out.cfg = cfg;
    std::vector<std::int64_t> rep_root(total, -1);
    for (std::size_t s = 0; s < total; ++s)
        if (is_root[s]) rep_root[uf.find(s)] = static_cast<std::int64_t>(s) - w;

    out.type.resize(total);
    out.component.resize(total);
    std::vector<std::int32_t> dense(total, -1);
    std::int32_t next_id = 0;
    for (std::size_t s = 0; s < total; ++s) {
        std::size_t r = uf.find(s);
        if (dense[r] < 0) dense[r] = next_id++;
        out.component[s] = dense[r];
        out.type[s] = static_cast<std::int8_t>(type_from_root(cfg.seed, replica, rep_root[r]));
    }
    out.component_total = next_id;

    out.walk.assign(static_cast<std::size_t>(cfg.n_total) + 1, 0);
    for (std::int64_t k = 1; k <= cfg.n_total; ++k)
        out.walk[static_cast<std::size_t>(k)] =
            out.walk[static_cast<std::size_t>(k - 1)] + out.type[static_cast<std::size_t>(k + w)];
    return out;
}

double scaling_c(double c3, std::int64_t steps_per_unit, double alpha) {
    return std::sqrt(c3 * std::pow(static_cast<double>(steps_per_unit), 2.0 * alpha + 1.0));
}

double rescaled_path(const LinearRealization& r, double c3, double t) {
    if (t < 0.0) throw std::invalid_argument("rescaled_path: t >= 0 required");
    double tn = t * static_cast<double>(r.cfg.steps_per_unit);
    std::int64_t lo = static_cast<std::int64_t>(std::floor(tn));
    if (lo > r.cfg.n_total || (lo == r.cfg.n_total && tn > static_cast<double>(lo)))
        throw std::invalid_argument("rescaled_path: t beyond simulated horizon");
    double base = static_cast<double>(r.walk[static_cast<std::size_t>(lo)]);
    double frac = tn - static_cast<double>(lo);
    if (frac > 0.0) base += frac * static_cast<double>(r.type_at(lo + 1));
    return base / scaling_c(c3, r.cfg.steps_per_unit, r.cfg.alpha);
}

LazyUrn::LazyUrn(double alpha, std::int64_t window_past, std::uint64_t seed,
                 std::uint64_t replica)
    : sampler_(alpha), window_(window_past), seed_(seed), replica_(replica) {}

std::int64_t LazyUrn::root_of(std::int64_t site) {
    stack_.clear();
    std::int64_t j = site;
    std::int64_t root;
    bool terminal = false;
    for (;;) {
        const std::int64_t* hit = root_.find(j);
        if (hit) {
            root = *hit;
            break;
        }
        double u = unit_from_key({seed_, replica_, kKindOffset, static_cast<std::uint64_t>(j)});
        std::int64_t p = j - sampler_.sample(u);
        if (p < -window_) {
            root = j;
            terminal = true;
            break;
        }
        stack_.push_back(j);
        j = p;
    }
    if (terminal) root_.insert(j, root);
    for (std::int64_t s : stack_) root_.insert(s, root);
    return root;
}

int LazyUrn::type_at(std::int64_t site) {
    return type_from_root(seed_, replica_, root_of(site));
}

std::vector<double> simulate_sn_endpoints(double alpha, std::int64_t n,
                                          std::int64_t window_past, std::int64_t replicas,
                                          std::uint64_t seed) {
    std::vector<double> out(static_cast<std::size_t>(replicas), 0.0);
    parallel_for(static_cast<std::size_t>(replicas), [&](std::size_t rep) {
        LazyUrn urn(alpha, window_past, seed, rep);
        std::int64_t s = 0;
        for (std::int64_t i = 1; i <= n; ++i) s += urn.type_at(i);
        out[rep] = static_cast<double>(s);
    });
    return out;
}

McProbability branch_coalescence_mc(double alpha, std::int64_t i, std::int64_t j,
                                    std::int64_t s_index, std::int64_t window_past,
                                    std::int64_t trials, std::uint64_t seed) {
    if (i <= s_index || j <= s_index)
        throw std::invalid_argument("branch_coalescence_mc: i, j must exceed s_index");
    OffsetSampler sampler(alpha);
    std::size_t n_chunks = 64;
    std::vector<std::int64_t> hits(n_chunks, 0);
    parallel_for(n_chunks, [&](std::size_t chunk) {
        std::int64_t lo = trials * static_cast<std::int64_t>(chunk) / static_cast<std::int64_t>(n_chunks);
        std::int64_t hi = trials * static_cast<std::int64_t>(chunk + 1) / static_cast<std::int64_t>(n_chunks);
        std::int64_t local = 0;
        for (std::int64_t tr = lo; tr < hi; ++tr) {
            auto descend = [&](std::int64_t pos, RngKind line) -> std::int64_t {
                // walk the branch-local sites down to the shared prefix;
                // returns the trunk entry site or the window floor - 1 if the
                // chain roots before reaching it
                while (pos > s_index) {
                    double u = unit_from_key({seed, static_cast<std::uint64_t>(tr),
                                              static_cast<std::uint64_t>(line),
                                              static_cast<std::uint64_t>(pos)});
                    std::int64_t p = pos - sampler.sample(u);
                    if (p < -window_past) return -window_past - 1;
                    pos = p;
                }
                return pos;
            };
            std::int64_t a = descend(i, kKindLineA);
            if (a < -window_past) continue;
            std::int64_t b = descend(j, kKindLineB);
            if (b < -window_past) continue;
            for (;;) {
                if (a == b) {
                    ++local;
                    break;
                }
                std::int64_t& hi_ref = (a > b) ? a : b;
                double u = unit_from_key({seed, static_cast<std::uint64_t>(tr),
                                          static_cast<std::uint64_t>(kKindTrunk),
                                          static_cast<std::uint64_t>(hi_ref)});
                std::int64_t p = hi_ref - sampler.sample(u);
                if (p < -window_past) break;
                hi_ref = p;
            }
        }
        hits[chunk] = local;
    });
    std::int64_t total = 0;
    for (std::int64_t h : hits) total += h;
    McProbability mc;
    mc.trials = trials;
    mc.p = static_cast<double>(total) / static_cast<double>(trials);
    mc.se = std::sqrt(std::max(mc.p * (1.0 - mc.p), 1e-300) / static_cast<double>(trials));
    return mc;
}

std::vector<double> coalescence_profile(const RenewalTable& tbl, std::int64_t n) {
    if (n >= tbl.max_index())
        throw std::invalid_argument("coalescence_profile: need table larger than n");
    std::vector<double> prof(static_cast<std::size_t>(n) + 1, 0.0);
    for (std::int64_t d = 0; d <= n; ++d) prof[static_cast<std::size_t>(d)] = coalescence_exact(tbl, 0, d);
    return prof;
}

double exact_var_ratio(const RenewalTable& tbl, std::int64_t n) {
    std::vector<double> prof = coalescence_profile(tbl, n - 1);
    NeumaierSum s;
    s.add(static_cast<double>(n));
    for (std::int64_t d = 1; d < n; ++d)
        s.add(2.0 * static_cast<double>(n - d) * prof[static_cast<std::size_t>(d)]);
    double c_n2 = tbl.c3 * std::pow(static_cast<double>(n), 2.0 * tbl.alpha + 1.0);
    return s.value() / c_n2;
}

double exact_split_cov_ratio(const RenewalTable& tbl, std::int64_t n, std::int64_t m) {
    if (!(m >= 0 && m < n))
        throw std::invalid_argument("exact_split_cov_ratio: 0 <= m < n required");
    std::vector<double> prof = coalescence_profile(tbl, n - 1);
    double a = tbl.alpha;

    NeumaierSum t1;
    t1.add(static_cast<double>(m));
    for (std::int64_t d = 1; d < m; ++d)
        t1.add(2.0 * static_cast<double>(m - d) * prof[static_cast<std::size_t>(d)]);

    NeumaierSum t2;
    for (std::int64_t d = 1; d < n; ++d) {
        std::int64_t cnt = std::min(m, n - d) - std::max<std::int64_t>(1, m + 1 - d) + 1;
        if (cnt > 0) t2.add(static_cast<double>(cnt) * prof[static_cast<std::size_t>(d)]);
    }

    // cross-branch block: c2 * sum_r (Q[r+nm] - Q[r])^2 with Q the prefix
    // sums of q, Euler-Maclaurin closing the tail
    std::int64_t nm = n - m;
    std::int64_t nmax = tbl.max_index();
    std::vector<double> pref(static_cast<std::size_t>(nmax) + 1);
    {
        NeumaierSum ps;
        for (std::int64_t l = 0; l <= nmax; ++l) {
            ps.add(tbl.q[static_cast<std::size_t>(l)]);
            pref[static_cast<std::size_t>(l)] = ps.value();
        }
    }
    std::int64_t rmax = nmax - nm;
    NeumaierSum s3;
    for (std::int64_t r = 0; r < rmax; ++r) {
        double diff = pref[static_cast<std::size_t>(r + nm)] - pref[static_cast<std::size_t>(r)];
        s3.add(diff * diff);
    }
    double cq_a = tbl.c_q / a;
    auto phi = [&](double r) {
        double d = std::pow(r + static_cast<double>(nm), a) - std::pow(r, a);
        return d * d;
    };
    auto phi_prime = [&](double r) {
        double d = std::pow(r + static_cast<double>(nm), a) - std::pow(r, a);
        double dp = a * (std::pow(r + static_cast<double>(nm), a - 1.0) - std::pow(r, a - 1.0));
        return 2.0 * d * dp;
    };
    double r0 = static_cast<double>(rmax);
    double raw_scale = a * a * static_cast<double>(nm) * static_cast<double>(nm) *
                       std::pow(r0, 2.0 * a - 1.0) / (1.0 - 2.0 * a);
    QuadratureResult integral =
        integrate_power_tail(phi, r0, 2.0 * a - 1.0, std::max(1e-7 * raw_scale, 1e-14));
    double tail = cq_a * cq_a * (integral.value + 0.5 * phi(r0) - phi_prime(r0) / 12.0);
    double t3 = tbl.c2 * (s3.value() + tail);

    double cov = t1.value() + 2.0 * t2.value() + t3;
    double c_n2 = tbl.c3 * std::pow(static_cast<double>(n), 2.0 * a + 1.0);
    return cov / c_n2;
}

}  // namespace bfbm
