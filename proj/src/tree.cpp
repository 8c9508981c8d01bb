#include "bfbm/tree.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "bfbm/rng.hpp"

namespace bfbm {

std::vector<std::int32_t> TreeTopology::leaves() const {
    std::vector<std::int32_t> out;
    for (const Branch& b : branches)
        if (b.child_first < 0) out.push_back(b.id);
    return out;
}

double TreeTopology::death(std::int32_t b) const {
    const Branch& br = branches[static_cast<std::size_t>(b)];
    if (br.child_first < 0) return horizon;
    return branches[static_cast<std::size_t>(br.child_first)].birth;
}

TreeTopology sample_yule(double T, std::uint64_t seed, std::uint64_t replica) {
    if (!(T > 0.0)) throw std::invalid_argument("sample_yule: T > 0 required");
    TreeTopology tree;
    tree.horizon = T;
    tree.kind = TreeKind::yule;
    // stack of branches awaiting lifetime draws; ids in creation order
    struct Pending {
        double birth;
        std::int32_t parent;
        std::uint64_t path;
    };
    std::vector<Pending> stack;
    stack.push_back({0.0, -1, 1});
    while (!stack.empty()) {
        Pending cur = stack.back();
        stack.pop_back();
        if (cur.path >= (std::uint64_t{1} << 62))
            throw std::runtime_error("sample_yule: branch path depth beyond 62 splits");
        Branch b;
        b.id = static_cast<std::int32_t>(tree.branches.size());
        b.parent = cur.parent;
        b.birth = cur.birth;
        b.path_code = cur.path;
        tree.branches.push_back(b);
        KeyedRng rng({seed, replica, kKindLife, cur.path});
        double death = cur.birth + rng.next_exponential();
        if (death < T) {
            // second child pushed first so the first child gets the next id
            stack.push_back({death, b.id, 2 * cur.path + 1});
            stack.push_back({death, b.id, 2 * cur.path});
        }
    }
    // children were appended after their parents; wire the child links
    for (std::size_t i = 1; i < tree.branches.size(); ++i) {
        Branch& b = tree.branches[i];
        Branch& par = tree.branches[static_cast<std::size_t>(b.parent)];
        if (par.child_first < 0)
            par.child_first = b.id;
        else
            par.child_second = b.id;
    }
    return tree;
}

TreeTopology binary_tree(std::int32_t T) {
    if (T < 0 || T > 24) throw std::invalid_argument("binary_tree: T in [0, 24] required");
    TreeTopology tree;
    tree.horizon = static_cast<double>(T);
    tree.kind = TreeKind::binary;
    // breadth-first: depth d branches are born at time d and split at d+1
    struct Item {
        std::int32_t parent;
        std::int32_t depth;
        std::uint64_t path;
    };
    std::vector<Item> level = {{-1, 0, 1}};
    while (!level.empty()) {
        std::vector<Item> next;
        for (const Item& it : level) {
            Branch b;
            b.id = static_cast<std::int32_t>(tree.branches.size());
            b.parent = it.parent;
            b.birth = static_cast<double>(it.depth);
            b.path_code = it.path;
            tree.branches.push_back(b);
            if (it.depth < T) {
                next.push_back({b.id, it.depth + 1, 2 * it.path});
                next.push_back({b.id, it.depth + 1, 2 * it.path + 1});
            }
        }
        level = std::move(next);
    }
    for (std::size_t i = 1; i < tree.branches.size(); ++i) {
        Branch& b = tree.branches[i];
        Branch& par = tree.branches[static_cast<std::size_t>(b.parent)];
        if (par.child_first < 0)
            par.child_first = b.id;
        else
            par.child_second = b.id;
    }
    return tree;
}

double split_time(const TreeTopology& tree, std::int32_t b1, std::int32_t b2) {
    const double inf = std::numeric_limits<double>::infinity();
    if (b1 == b2) return inf;
    std::size_t n = tree.branches.size();
    if (b1 < 0 || b2 < 0 || static_cast<std::size_t>(b1) >= n || static_cast<std::size_t>(b2) >= n)
        throw std::invalid_argument("split_time: branch id out of range");
    std::vector<char> on_path(n, 0);
    for (std::int32_t c = b1; c >= 0; c = tree.branches[static_cast<std::size_t>(c)].parent)
        on_path[static_cast<std::size_t>(c)] = 1;
    std::int32_t prev = -1;
    std::int32_t c = b2;
    while (c >= 0 && !on_path[static_cast<std::size_t>(c)]) {
        prev = c;
        c = tree.branches[static_cast<std::size_t>(c)].parent;
    }
    if (c < 0) throw std::logic_error("split_time: disconnected branches");
    // c is the deepest common edge; if it equals b1 or b2 the ancestral
    // paths coincide and never diverge
    if (c == b1 || c == b2) return inf;
    return tree.branches[static_cast<std::size_t>(prev)].birth;
}

TreeTopology discretize(const TreeTopology& tree, std::int32_t K, double t, bool left) {
    if (K < 1) throw std::invalid_argument("discretize: K >= 1 required");
    if (!(t > 0.0)) throw std::invalid_argument("discretize: t > 0 required");
    TreeTopology out = tree;
    out.kind = TreeKind::discretized;
    double step = t / static_cast<double>(K);
    for (Branch& b : out.branches) {
        double g = b.birth / step;
        double snapped = (left ? std::floor(g) : std::ceil(g)) * step;
        b.birth = snapped;
    }
    return out;
}

static const char* kind_name(TreeKind k) {
    switch (k) {
        case TreeKind::yule: return "yule";
        case TreeKind::binary: return "binary";
        default: return "discretized";
    }
}

std::string tree_to_csv(const TreeTopology& tree) {
    std::ostringstream os;
    os.precision(17);
    os << "# horizon=" << tree.horizon << "\n";
    os << "# kind=" << kind_name(tree.kind) << "\n";
    os << "branch_id,parent_id,birth_time\n";
    for (const Branch& b : tree.branches) {
        os << b.id << ",";
        if (b.parent >= 0) os << b.parent;
        os << "," << b.birth << "\n";
    }
    return os.str();
}

TreeTopology tree_from_csv(const std::string& text) {
    TreeTopology tree;
    tree.kind = TreeKind::yule;
    std::istringstream is(text);
    std::string line;
    bool saw_horizon = false;
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        if (line[0] == '#') {
            auto eat = [&](const char* tag) -> const char* {
                std::size_t pos = line.find(tag);
                return pos == std::string::npos ? nullptr : line.c_str() + pos + std::string(tag).size();
            };
            if (const char* v = eat("horizon=")) {
                tree.horizon = std::stod(v);
                saw_horizon = true;
            } else if (const char* v = eat("kind=")) {
                std::string name(v);
                while (!name.empty() && (name.back() == '\r' || name.back() == ' ')) name.pop_back();
                if (name == "yule")
                    tree.kind = TreeKind::yule;
                else if (name == "binary")
                    tree.kind = TreeKind::binary;
                else if (name == "discretized")
                    tree.kind = TreeKind::discretized;
                else
                    throw std::invalid_argument("tree_from_csv: unknown kind " + name);
            }
            continue;
        }
        if (line.rfind("branch_id", 0) == 0) continue;
        std::istringstream row(line);
        std::string id_s, parent_s, birth_s;
        if (!std::getline(row, id_s, ',') || !std::getline(row, parent_s, ',') || !std::getline(row, birth_s))
            throw std::invalid_argument("tree_from_csv: malformed row " + line);
        Branch b;
        b.id = static_cast<std::int32_t>(std::stol(id_s));
        b.parent = parent_s.empty() ? -1 : static_cast<std::int32_t>(std::stol(parent_s));
        b.birth = std::stod(birth_s);
        if (b.id != static_cast<std::int32_t>(tree.branches.size()))
            throw std::invalid_argument("tree_from_csv: rows must be in id order");
        tree.branches.push_back(b);
    }
    if (!saw_horizon) throw std::invalid_argument("tree_from_csv: missing horizon header");
    // rebuild child links and path codes from the parent column
    for (std::size_t i = 1; i < tree.branches.size(); ++i) {
        Branch& b = tree.branches[i];
        if (b.parent < 0 || static_cast<std::size_t>(b.parent) >= i)
            throw std::invalid_argument("tree_from_csv: parent must precede child");
        Branch& par = tree.branches[static_cast<std::size_t>(b.parent)];
        if (par.child_first < 0) {
            par.child_first = b.id;
            b.path_code = 2 * par.path_code;
        } else if (par.child_second < 0) {
            par.child_second = b.id;
            b.path_code = 2 * par.path_code + 1;
        } else {
            throw std::invalid_argument("tree_from_csv: more than two children");
        }
    }
    return tree;
}

}  // namespace bfbm
