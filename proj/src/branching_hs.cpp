#include "bfbm/branching_hs.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "bfbm/hashmap.hpp"
#include "bfbm/linear_hs.hpp"
#include "bfbm/parallel.hpp"
#include "bfbm/renewal.hpp"
#include "bfbm/rng.hpp"
#include "bfbm/union_find.hpp"

namespace bfbm {

namespace {

struct EdgeRange {
    std::int64_t first;
    std::int64_t last;
    std::size_t slot_base;  // flat slot of own site `first`
};

// owner of site k read from branch e's line; returns -1 when k <= 0 (trunk)
std::int32_t owning_edge(const TreeTopology& tree, const std::vector<EdgeRange>& ranges,
                         std::int32_t e, std::int64_t k) {
    while (e >= 0 && k < ranges[static_cast<std::size_t>(e)].first)
        e = tree.branches[static_cast<std::size_t>(e)].parent;
    return e;
}

int type_from_key(std::uint64_t seed, std::uint64_t replica, std::uint64_t tag,
                  std::uint64_t site) {
    std::uint64_t h = mix::key_hash({seed, replica, kKindType, tag, site});
    return (h & 1u) ? 1 : -1;
}

}  // namespace

TreeUrnRealization simulate_tree_urn(const TreeTopology& tree, const TreeUrnConfig& cfg,
                                     std::uint64_t replica) {
    if (tree.branches.empty()) throw std::invalid_argument("simulate_tree_urn: empty tree");
    if (cfg.steps_per_unit < 1)
        throw std::invalid_argument("simulate_tree_urn: steps_per_unit >= 1 required");
    if (cfg.window_past < 0)
        throw std::invalid_argument("simulate_tree_urn: window_past >= 0 required");
    OffsetSampler sampler(cfg.alpha);

    const double n = static_cast<double>(cfg.steps_per_unit);
    const std::int64_t w = cfg.window_past;
    const std::size_t edges = tree.branches.size();

    std::vector<EdgeRange> ranges(edges);
    std::size_t total = static_cast<std::size_t>(w) + 1;
    for (std::size_t e = 0; e < edges; ++e) {
        const Branch& b = tree.branches[e];
        ranges[e].first = static_cast<std::int64_t>(std::floor(b.birth * n)) + 1;
        ranges[e].last = static_cast<std::int64_t>(std::floor(tree.death(b.id) * n));
        ranges[e].slot_base = total;
        if (ranges[e].last >= ranges[e].first)
            total += static_cast<std::size_t>(ranges[e].last - ranges[e].first + 1);
    }
    auto slot_of = [&](std::int32_t e, std::int64_t k) -> std::size_t {
        if (e < 0) return static_cast<std::size_t>(k + w);  // trunk site, k in -w..0
        const EdgeRange& r = ranges[static_cast<std::size_t>(e)];
        return r.slot_base + static_cast<std::size_t>(k - r.first);
    };

    UnionFind uf(total);
    std::vector<char> is_root(total, 0);
    is_root[0] = 1;
    auto draw = [&](std::uint64_t tag, std::int64_t k) -> std::int64_t {
        if (cfg.forced_offset > 0) return cfg.forced_offset;
        double u = unit_from_key({cfg.seed, replica, kKindOffset, tag, static_cast<std::uint64_t>(k)});
        return sampler.sample(u);
    };

    for (std::int64_t k = -w + 1; k <= 0; ++k) {
        std::int64_t p = k - draw(0, k);
        if (p < -w)
            is_root[static_cast<std::size_t>(k + w)] = 1;
        else
            uf.unite(static_cast<std::size_t>(k + w), static_cast<std::size_t>(p + w));
    }
    for (std::size_t e = 0; e < edges; ++e) {
        const Branch& b = tree.branches[e];
        for (std::int64_t k = ranges[e].first; k <= ranges[e].last; ++k) {
            std::int64_t p = k - draw(b.path_code, k);
            std::size_t me = slot_of(b.id, k);
            if (p <= 0) {
                if (p < -w)
                    is_root[me] = 1;
                else
                    uf.unite(me, slot_of(-1, p));
            } else {
                std::int32_t owner = owning_edge(tree, ranges, b.id, p);
                uf.unite(me, slot_of(owner, p));
            }
        }
    }

    // root identity (tag, site) per component fixes the component type
    std::vector<std::uint64_t> rep_tag(total, 0);
    std::vector<std::uint64_t> rep_site(total, 0);
    for (std::int64_t k = -w; k <= 0; ++k) {
        std::size_t s = static_cast<std::size_t>(k + w);
        if (is_root[s]) {
            std::size_t r = uf.find(s);
            rep_tag[r] = 0;
            rep_site[r] = static_cast<std::uint64_t>(k);
        }
    }
    for (std::size_t e = 0; e < edges; ++e)
        for (std::int64_t k = ranges[e].first; k <= ranges[e].last; ++k) {
            std::size_t s = slot_of(tree.branches[e].id, k);
            if (is_root[s]) {
                std::size_t r = uf.find(s);
                rep_tag[r] = tree.branches[e].path_code;
                rep_site[r] = static_cast<std::uint64_t>(k);
            }
        }

    TreeUrnRealization out;
    out.cfg = cfg;
    out.tree = tree;
    out.segments.resize(edges);
    out.past_component.assign(static_cast<std::size_t>(w) + 1, -1);

    std::vector<std::int32_t> dense(total, -1);
    std::int32_t next_id = 0;
    auto component_of_slot = [&](std::size_t s) -> std::int32_t {
        std::size_t r = uf.find(s);
        if (dense[r] < 0) dense[r] = next_id++;
        return dense[r];
    };
    auto type_of_slot = [&](std::size_t s) -> std::int8_t {
        std::size_t r = uf.find(s);
        return static_cast<std::int8_t>(type_from_key(cfg.seed, replica, rep_tag[r], rep_site[r]));
    };

    for (std::int64_t k = -w; k <= 0; ++k)
        out.past_component[static_cast<std::size_t>(k + w)] =
            component_of_slot(static_cast<std::size_t>(k + w));

    for (std::size_t e = 0; e < edges; ++e) {
        EdgeSegment& seg = out.segments[e];
        seg.first = ranges[e].first;
        seg.last = ranges[e].last;
        const Branch& b = tree.branches[e];
        if (b.parent < 0) {
            seg.base = 0;  // walk starts at S(0) = 0
        } else {
            const EdgeSegment& par = out.segments[static_cast<std::size_t>(b.parent)];
            seg.base = par.walk.empty() ? par.base : par.walk.back();
        }
        if (seg.last < seg.first) continue;
        std::size_t len = static_cast<std::size_t>(seg.last - seg.first + 1);
        seg.type.resize(len);
        seg.walk.resize(len);
        seg.component.resize(len);
        std::int64_t acc = seg.base;
        for (std::size_t i = 0; i < len; ++i) {
            std::size_t s = ranges[e].slot_base + i;
            seg.type[i] = type_of_slot(s);
            seg.component[i] = component_of_slot(s);
            acc += seg.type[i];
            seg.walk[i] = acc;
        }
    }
    out.component_total = next_id;
    return out;
}

std::int64_t TreeUrnRealization::walk_at(std::int32_t branch, std::int64_t k) const {
    if (k == 0) return 0;
    if (k < 0) throw std::invalid_argument("walk_at: site >= 0 required");
    std::int32_t e = branch;
    while (e >= 0 && k < segments[static_cast<std::size_t>(e)].first)
        e = tree.branches[static_cast<std::size_t>(e)].parent;
    if (e < 0) throw std::logic_error("walk_at: site not covered");
    const EdgeSegment& seg = segments[static_cast<std::size_t>(e)];
    if (k > seg.last) throw std::invalid_argument("walk_at: site beyond branch range");
    return seg.walk[static_cast<std::size_t>(k - seg.first)];
}

std::int8_t TreeUrnRealization::type_at(std::int32_t branch, std::int64_t k) const {
    if (k < 1) throw std::invalid_argument("type_at: site >= 1 required");
    std::int32_t e = branch;
    while (e >= 0 && k < segments[static_cast<std::size_t>(e)].first)
        e = tree.branches[static_cast<std::size_t>(e)].parent;
    if (e < 0) throw std::logic_error("type_at: site not covered");
    const EdgeSegment& seg = segments[static_cast<std::size_t>(e)];
    if (k > seg.last) throw std::invalid_argument("type_at: site beyond branch range");
    return seg.type[static_cast<std::size_t>(k - seg.first)];
}

std::int32_t TreeUrnRealization::component_at(std::int32_t branch, std::int64_t k) const {
    if (k <= 0) {
        std::int64_t slot = k + cfg.window_past;
        if (slot < 0) throw std::invalid_argument("component_at: site below past window");
        return past_component[static_cast<std::size_t>(slot)];
    }
    std::int32_t e = branch;
    while (e >= 0 && k < segments[static_cast<std::size_t>(e)].first)
        e = tree.branches[static_cast<std::size_t>(e)].parent;
    if (e < 0) throw std::logic_error("component_at: site not covered");
    const EdgeSegment& seg = segments[static_cast<std::size_t>(e)];
    if (k > seg.last) throw std::invalid_argument("component_at: site beyond branch range");
    return seg.component[static_cast<std::size_t>(k - seg.first)];
}

double branch_walk(const TreeUrnRealization& r, double c3, std::int32_t branch, double t) {
    if (t < 0.0) throw std::invalid_argument("branch_walk: t >= 0 required");
    double tn = t * static_cast<double>(r.cfg.steps_per_unit);
    std::int64_t lo = static_cast<std::int64_t>(std::floor(tn));
    std::int64_t end = r.last_site(branch);
    if (lo > end || (lo == end && tn > static_cast<double>(lo)))
        throw std::invalid_argument("branch_walk: t beyond branch horizon");
    double v = static_cast<double>(r.walk_at(branch, lo));
    double frac = tn - static_cast<double>(lo);
    if (frac > 0.0) v += frac * static_cast<double>(r.type_at(branch, lo + 1));
    return v / scaling_c(c3, r.cfg.steps_per_unit, r.cfg.alpha);
}

std::vector<double> branch_walk(const TreeUrnRealization& r, double c3, std::int32_t branch,
                                const std::vector<double>& t_grid) {
    std::vector<double> out;
    out.reserve(t_grid.size());
    for (double t : t_grid) out.push_back(branch_walk(r, c3, branch, t));
    return out;
}

CovEstimate empirical_cross_covariance(const std::vector<TreeUrnRealization>& reals, double c3,
                                       std::int32_t b1, std::int32_t b2, double t1, double t2) {
    std::size_t m = reals.size();
    if (m < 2) throw std::invalid_argument("empirical_cross_covariance: need >= 2 realizations");
    std::vector<double> x(m), y(m);
    for (std::size_t i = 0; i < m; ++i) {
        x[i] = branch_walk(reals[i], c3, b1, t1);
        y[i] = branch_walk(reals[i], c3, b2, t2);
    }
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= static_cast<double>(m);
    my /= static_cast<double>(m);
    double cov = 0.0, var_prod = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
        double p = (x[i] - mx) * (y[i] - my);
        cov += p;
        var_prod += p * p;
    }
    cov /= static_cast<double>(m - 1);
    var_prod = var_prod / static_cast<double>(m) - cov * cov;
    CovEstimate out;
    out.value = cov;
    out.se = std::sqrt(std::max(var_prod, 0.0) / static_cast<double>(m));
    return out;
}

namespace {

// site key on the split geometry: lane 0 = shared trunk (sites <= m),
// lanes 1 and 2 = the private tails of lines A and B
std::int64_t pack_site(int lane, std::int64_t i) { return i * 4 + lane; }

class SplitPairUrn {
public:
    SplitPairUrn(double alpha, std::int64_t m, std::int64_t window, std::uint64_t seed,
                 std::uint64_t replica)
        : sampler_(alpha), m_(m), window_(window), seed_(seed), replica_(replica) {}

    int type_at(int lane, std::int64_t i) {
        std::int64_t root = root_of(lane, i);
        std::uint64_t h = mix::key_hash({seed_, replica_, kKindType, static_cast<std::uint64_t>(root)});
        return (h & 1u) ? 1 : -1;
    }

private:
    std::int64_t root_of(int lane, std::int64_t i) {
        stack_.clear();
        std::int64_t key = pack_site(lane, i);
        std::int64_t root = 0;
        bool terminal = false;
        for (;;) {
            const std::int64_t* hit = map_.find(key);
            if (hit) {
                root = *hit;
                break;
            }
            int lane_now = static_cast<int>(((key % 4) + 4) % 4);
            std::int64_t site = (key - lane_now) / 4;
            std::uint64_t kind = lane_now == 0 ? kKindTrunk : (lane_now == 1 ? kKindLineA : kKindLineB);
            double u = unit_from_key({seed_, replica_, kind, static_cast<std::uint64_t>(site)});
            std::int64_t p = site - sampler_.sample(u);
            if (p < -window_) {
                root = key;
                terminal = true;
                break;
            }
            stack_.push_back(key);
            int lane_next = p <= m_ ? 0 : lane_now;
            key = pack_site(lane_next, p);
        }
        if (terminal) map_.insert(key, root);
        for (std::int64_t s : stack_) map_.insert(s, root);
        return root;
    }

    OffsetSampler sampler_;
    std::int64_t m_;
    std::int64_t window_;
    std::uint64_t seed_;
    std::uint64_t replica_;
    FlatMap64 map_;
    std::vector<std::int64_t> stack_;
};

}  // namespace

std::vector<std::pair<double, double>> split_pair_endpoint_sums(double alpha, std::int64_t n,
                                                                std::int64_t m,
                                                                std::int64_t window_past,
                                                                std::int64_t replicas,
                                                                std::uint64_t seed) {
    if (m < 0 || m > n) throw std::invalid_argument("split_pair_endpoint_sums: 0 <= m <= n required");
    std::vector<std::pair<double, double>> out(static_cast<std::size_t>(replicas));
    parallel_for(static_cast<std::size_t>(replicas), [&](std::size_t r) {
        SplitPairUrn urn(alpha, m, window_past, seed, static_cast<std::uint64_t>(r));
        std::int64_t sa = 0, sb = 0;
        for (std::int64_t i = 1; i <= m; ++i) {
            int y = urn.type_at(0, i);
            sa += y;
            sb += y;
        }
        for (std::int64_t i = m + 1; i <= n; ++i) {
            sa += urn.type_at(1, i);
            sb += urn.type_at(2, i);
        }
        out[r] = {static_cast<double>(sa), static_cast<double>(sb)};
    });
    return out;
}

}  // namespace bfbm
