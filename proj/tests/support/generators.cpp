#include "support/generators.hpp"

#include <algorithm>
#include <bit>
#include <set>
#include <vector>

namespace fdrkit::testing {

namespace {

std::vector<NodeId> node_names(int n) {
    std::vector<NodeId> names{"X", "Y"};
    for (int i = 0; i < n - 2; ++i) names.push_back(std::string(1, static_cast<char>('A' + i)));
    return names;
}

}  // namespace

Admg random_admg(Rng& rng, int n, double p_dir, double p_bi) {
    const std::vector<NodeId> names = node_names(n);
    std::vector<int> order(static_cast<size_t>(n));
    for (int i = 0; i < n; ++i) order[static_cast<size_t>(i)] = i;
    for (int i = n - 1; i > 0; --i) std::swap(order[static_cast<size_t>(i)], order[static_cast<size_t>(rng.below(i + 1))]);

    ArcList dir, bi;
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) {
            const NodeId& a = names[static_cast<size_t>(order[static_cast<size_t>(i)])];
            const NodeId& b = names[static_cast<size_t>(order[static_cast<size_t>(j)])];
            if (rng.chance(p_dir)) dir.emplace_back(a, b);
            if (rng.chance(p_bi)) bi.emplace_back(std::min(a, b), std::max(a, b));
        }
    return Admg::build(NodeSet(names.begin(), names.end()), dir, bi);
}

Admg random_admg_with_path(Rng& rng, int n, double p_dir, double p_bi) {
    for (;;) {
        Admg g = random_admg(rng, n, p_dir, p_bi);
        if (g.descendants({"X"}).count("Y")) return g;
    }
}

void for_each_small_admg(int n, int max_arcs, const std::function<void(const Admg&)>& fn) {
    const std::vector<NodeId> names = node_names(n);
    std::vector<std::pair<int, int>> dir_slots, bi_slots;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            if (i != j) dir_slots.emplace_back(i, j);
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) bi_slots.emplace_back(i, j);

    // permutations of the letter indices (2..n-1), identity first
    std::vector<std::vector<int>> perms;
    {
        std::vector<int> letters;
        for (int i = 2; i < n; ++i) letters.push_back(i);
        std::vector<int> p = letters;
        do {
            std::vector<int> full(static_cast<size_t>(n));
            full[0] = 0;
            full[1] = 1;
            for (size_t k = 0; k < letters.size(); ++k) full[static_cast<size_t>(letters[k])] = p[k];
            perms.push_back(full);
        } while (std::next_permutation(p.begin(), p.end()));
    }

    const auto slot_index = [](const std::vector<std::pair<int, int>>& slots, int a, int b) {
        for (size_t k = 0; k < slots.size(); ++k)
            if (slots[k] == std::make_pair(a, b)) return static_cast<int>(k);
        return -1;
    };

    std::set<std::pair<std::uint64_t, std::uint64_t>> seen;
    const std::uint64_t dir_limit = std::uint64_t{1} << dir_slots.size();
    for (std::uint64_t dm = 0; dm < dir_limit; ++dm) {
        if (max_arcs >= 0 && std::popcount(dm) > max_arcs) continue;
        // cheap acyclicity check on the directed slot mask
        {
            std::vector<std::uint64_t> ch(static_cast<size_t>(n), 0);
            for (size_t k = 0; k < dir_slots.size(); ++k)
                if ((dm >> k) & 1) ch[static_cast<size_t>(dir_slots[k].first)] |= std::uint64_t{1} << dir_slots[k].second;
            std::uint64_t removed = 0;
            const std::uint64_t all = (std::uint64_t{1} << n) - 1;
            bool progress = true;
            while (progress) {
                progress = false;
                for (int v = 0; v < n; ++v) {
                    if ((removed >> v) & 1) continue;
                    bool has_parent = false;
                    for (int u = 0; u < n; ++u)
                        if (!((removed >> u) & 1) && ((ch[static_cast<size_t>(u)] >> v) & 1)) has_parent = true;
                    if (!has_parent) {
                        removed |= std::uint64_t{1} << v;
                        progress = true;
                    }
                }
            }
            if (removed != all) continue;
        }
        const int dir_count = std::popcount(dm);
        const std::uint64_t bi_limit = std::uint64_t{1} << bi_slots.size();
        for (std::uint64_t bm = 0; bm < bi_limit; ++bm) {
            if (max_arcs >= 0 && dir_count + std::popcount(bm) > max_arcs) continue;
            // canonical form under letter relabeling
            std::pair<std::uint64_t, std::uint64_t> canon{~std::uint64_t{0}, ~std::uint64_t{0}};
            for (const auto& perm : perms) {
                std::uint64_t pdm = 0, pbm = 0;
                for (size_t k = 0; k < dir_slots.size(); ++k)
                    if ((dm >> k) & 1) {
                        const int a = perm[static_cast<size_t>(dir_slots[k].first)];
                        const int b = perm[static_cast<size_t>(dir_slots[k].second)];
                        pdm |= std::uint64_t{1} << slot_index(dir_slots, a, b);
                    }
                for (size_t k = 0; k < bi_slots.size(); ++k)
                    if ((bm >> k) & 1) {
                        const int a = perm[static_cast<size_t>(bi_slots[k].first)];
                        const int b = perm[static_cast<size_t>(bi_slots[k].second)];
                        pbm |= std::uint64_t{1} << slot_index(bi_slots, std::min(a, b), std::max(a, b));
                    }
                canon = std::min(canon, {pdm, pbm});
            }
            if (!seen.insert(canon).second) continue;

            ArcList dir, bi;
            for (size_t k = 0; k < dir_slots.size(); ++k)
                if ((dm >> k) & 1)
                    dir.emplace_back(names[static_cast<size_t>(dir_slots[k].first)],
                                     names[static_cast<size_t>(dir_slots[k].second)]);
            for (size_t k = 0; k < bi_slots.size(); ++k)
                if ((bm >> k) & 1)
                    bi.emplace_back(names[static_cast<size_t>(bi_slots[k].first)],
                                    names[static_cast<size_t>(bi_slots[k].second)]);
            const Admg g = Admg::build(NodeSet(names.begin(), names.end()), dir, bi);
            if (!g.descendants({"X"}).count("Y")) continue;
            fn(g);
        }
    }
}

std::string gallery_path(const std::string& name) { return std::string(FDRKIT_GRAPHS_DIR) + "/" + name; }
std::string models_path(const std::string& name) { return std::string(FDRKIT_MODELS_DIR) + "/" + name; }

Admg load_gallery(const std::string& name) { return parse_graph_file(gallery_path(name)).parsed; }

}  // namespace fdrkit::testing
