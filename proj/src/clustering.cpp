#include <algorithm>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <limits>

#include "tracklet/clustering.hpp"
#include "tracklet/rng.hpp"

namespace tracklet {

namespace {

// Direct and flipped mean pointwise distances of `form` against `centroid`.
void direct_flip(const std::vector<Vec3>& form, const std::vector<Vec3>& centroid, double& direct,
                 double& flipped) {
    const std::size_t n = form.size();
    double d = 0.0, f = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        d += (form[i] - centroid[i]).norm();
        f += (form[n - 1 - i] - centroid[i]).norm();
    }
    direct = d / static_cast<double>(n);
    flipped = f / static_cast<double>(n);
}

void add_member(Cluster& c, int idx, const std::vector<Vec3>& form) {
    double direct, flipped;
    direct_flip(form, c.centroid, direct, flipped);
    const bool flip = flipped < direct;
    const double count = static_cast<double>(c.members.size());
    const std::size_t n = form.size();
    for (std::size_t i = 0; i < n; ++i) {
        const Vec3& p = flip ? form[n - 1 - i] : form[i];
        c.centroid[i] = (c.centroid[i] * count + p) / (count + 1.0);
    }
    c.members.push_back(idx);
    c.member_flipped.push_back(flip ? 1 : 0);
}

Cluster new_cluster(int idx, const std::vector<Vec3>& form) {
    Cluster c;
    c.members.push_back(idx);
    c.member_flipped.push_back(0);
    c.centroid = form;
    return c;
}

// Nearest cluster among `candidates` (indices into `clusters`); ties keep the
// lowest cluster index. Returns -1 when candidates is empty.
int nearest_cluster(const std::vector<Cluster>& clusters, const std::vector<int>& candidates,
                    const std::vector<Vec3>& form, double& best_dist) {
    int best = -1;
    best_dist = std::numeric_limits<double>::infinity();
    for (int ci : candidates) {
        double direct, flipped;
        direct_flip(form, clusters[static_cast<std::size_t>(ci)].centroid, direct, flipped);
        const double d = std::min(direct, flipped);
        if (d < best_dist) {
            best_dist = d;
            best = ci;
        }
    }
    return best;
}

}  // namespace

std::vector<Cluster> quickbundles(const std::vector<Streamline>& streamlines, double threshold,
                                  int n_resample) {
    if (!(threshold > 0.0)) fail(Err::ConfigError, "quickbundles: threshold must be > 0");
    std::vector<Cluster> clusters;
    std::vector<int> all;
    for (std::size_t i = 0; i < streamlines.size(); ++i) {
        const std::vector<Vec3> form = resample_spline(streamlines[i], n_resample);
        all.resize(clusters.size());
        for (std::size_t c = 0; c < clusters.size(); ++c) all[c] = static_cast<int>(c);
        double dist;
        const int best = nearest_cluster(clusters, all, form, dist);
        if (best >= 0 && dist <= threshold)
            add_member(clusters[static_cast<std::size_t>(best)], static_cast<int>(i), form);
        else
            clusters.push_back(new_cluster(static_cast<int>(i), form));
    }
    return clusters;
}

ClusterTree build_tree(const std::vector<Streamline>& streamlines, const std::vector<double>& thresholds,
                       int n_resample) {
    if (thresholds.empty()) fail(Err::ConfigError, "build_tree: empty threshold list");
    for (std::size_t k = 0; k < thresholds.size(); ++k) {
        if (!(thresholds[k] > 0.0)) fail(Err::ConfigError, "build_tree: thresholds must be > 0");
        if (k > 0 && !(thresholds[k] < thresholds[k - 1]))
            fail(Err::ConfigError, "build_tree: thresholds must be strictly decreasing");
    }

    const std::size_t n_levels = thresholds.size();
    ClusterTree tree;
    tree.thresholds = thresholds;
    tree.n_resample = n_resample;
    tree.levels.resize(n_levels);
    tree.parent.resize(n_levels);
    tree.assignment.assign(n_levels, std::vector<int>(streamlines.size(), -1));
    tree.resampled.resize(streamlines.size());

    // children[k][c] lists level-(k+1) cluster indices under cluster c of level k.
    std::vector<std::vector<std::vector<int>>> children(n_levels);

    for (std::size_t i = 0; i < streamlines.size(); ++i) {
        const std::vector<Vec3> form = resample_spline(streamlines[i], n_resample);
        tree.resampled[i] = form;

        int parent_idx = -1;
        std::vector<int> top;
        for (std::size_t k = 0; k < n_levels; ++k) {
            auto& level = tree.levels[k];
            const std::vector<int>* candidates;
            if (k == 0) {
                top.resize(level.size());
                for (std::size_t c = 0; c < level.size(); ++c) top[c] = static_cast<int>(c);
                candidates = &top;
            } else {
                candidates = &children[k - 1][static_cast<std::size_t>(parent_idx)];
            }
            double dist;
            int chosen = nearest_cluster(level, *candidates, form, dist);
            if (chosen >= 0 && dist <= thresholds[k]) {
                add_member(level[static_cast<std::size_t>(chosen)], static_cast<int>(i), form);
            } else {
                chosen = static_cast<int>(level.size());
                level.push_back(new_cluster(static_cast<int>(i), form));
                tree.parent[k].push_back(parent_idx);
                children[k].emplace_back();
                if (k > 0) children[k - 1][static_cast<std::size_t>(parent_idx)].push_back(chosen);
            }
            tree.assignment[k][i] = chosen;
            parent_idx = chosen;
        }
    }

    // Move-up: merge finest-level singletons into their nearest sibling when
    // within the parent-level threshold, so every streamline keeps a usable
    // neighbor pool.
    if (n_levels >= 2) {
        const std::size_t fine = n_levels - 1;
        auto& level = tree.levels[fine];
        std::vector<std::uint8_t> dead(level.size(), 0);
        for (std::size_t c = 0; c < level.size(); ++c) {
            if (dead[c] || level[c].members.size() != 1) continue;
            const int par = tree.parent[fine][c];
            const auto& sibs = children[fine - 1][static_cast<std::size_t>(par)];
            std::vector<int> alive;
            for (int s : sibs)
                if (s != static_cast<int>(c) && !dead[static_cast<std::size_t>(s)]) alive.push_back(s);
            double dist;
            const int target = nearest_cluster(level, alive, level[c].centroid, dist);
            if (target >= 0 && dist <= thresholds[fine - 1]) {
                const int member = level[c].members[0];
                add_member(level[static_cast<std::size_t>(target)], member, tree.resampled[static_cast<std::size_t>(member)]);
                tree.assignment[fine][static_cast<std::size_t>(member)] = target;
                dead[c] = 1;
            }
        }
        // Compact the finest level.
        std::vector<int> remap(level.size(), -1);
        std::vector<Cluster> compacted;
        std::vector<int> compacted_parent;
        for (std::size_t c = 0; c < level.size(); ++c) {
            if (dead[c]) continue;
            remap[c] = static_cast<int>(compacted.size());
            compacted.push_back(std::move(level[c]));
            compacted_parent.push_back(tree.parent[fine][c]);
        }
        tree.levels[fine] = std::move(compacted);
        tree.parent[fine] = std::move(compacted_parent);
        for (auto& a : tree.assignment[fine]) a = remap[static_cast<std::size_t>(a)];
    }

    return tree;
}

std::vector<int> sample_neighbors(const ClusterTree& tree, int idx, std::uint64_t seed) {
    const std::size_t n = tree.n_streamlines();
    if (idx < 0 || static_cast<std::size_t>(idx) >= n)
        fail(Err::IndexOutOfRange, "sample_neighbors: streamline index " + std::to_string(idx));

    constexpr int kPool = 10;
    constexpr int kNeighbors = 7;

    // Widen over the three finest resolutions until enough candidates.
    std::vector<int> candidates;
    std::vector<std::uint8_t> seen(n, 0);
    seen[static_cast<std::size_t>(idx)] = 1;
    const int n_levels = static_cast<int>(tree.n_levels());
    for (int step = 0; step < std::min(3, n_levels); ++step) {
        const std::size_t k = static_cast<std::size_t>(n_levels - 1 - step);
        const int c = tree.assignment[k][static_cast<std::size_t>(idx)];
        for (int m : tree.levels[k][static_cast<std::size_t>(c)].members) {
            if (!seen[static_cast<std::size_t>(m)]) {
                seen[static_cast<std::size_t>(m)] = 1;
                candidates.push_back(m);
            }
        }
        if (static_cast<int>(candidates.size()) >= kPool) break;
    }

    // Keep the 10 MDF-nearest candidates; ties resolve by index.
    const auto& self = tree.resampled[static_cast<std::size_t>(idx)];
    std::vector<std::pair<double, int>> ranked;
    ranked.reserve(candidates.size());
    for (int m : candidates)
        ranked.emplace_back(mdf_aligned(self, tree.resampled[static_cast<std::size_t>(m)]), m);
    std::sort(ranked.begin(), ranked.end());
    if (static_cast<int>(ranked.size()) > kPool) ranked.resize(kPool);

    std::vector<int> out;
    Rng rng(mix_seed(seed, static_cast<std::uint64_t>(idx), 0x6e656967ULL));
    if (static_cast<int>(ranked.size()) >= kNeighbors) {
        for (int j : rng.sample_without_replacement(static_cast<int>(ranked.size()), kNeighbors))
            out.push_back(ranked[static_cast<std::size_t>(j)].second);
    } else {
        for (const auto& [d, m] : ranked) out.push_back(m);
        const int pad = ranked.empty() ? idx : ranked.front().second;
        while (static_cast<int>(out.size()) < kNeighbors) out.push_back(pad);
    }
    return out;
}

// ---------------------------------------------------------------------------
// Sidecar serialization.
// ---------------------------------------------------------------------------
namespace {

constexpr char kTreeMagic[4] = {'T', 'G', 'Q', 'B'};
constexpr std::uint32_t kTreeVersion = 1;

template <typename T>
void put(std::ofstream& out, const T& v) {
    out.write(reinterpret_cast<const char*>(&v), sizeof(v));
}

template <typename T>
T get(std::ifstream& in, const std::string& path) {
    T v{};
    if (!in.read(reinterpret_cast<char*>(&v), sizeof(v)))
        fail(Err::TruncatedFile, "load_tree: truncated file " + path);
    return v;
}

}  // namespace

void save_tree(const ClusterTree& tree, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) fail(Err::IoError, "save_tree: cannot open " + path);

    out.write(kTreeMagic, 4);
    put(out, kTreeVersion);
    put(out, static_cast<std::uint32_t>(tree.n_resample));
    put(out, static_cast<std::uint64_t>(tree.n_streamlines()));
    put(out, static_cast<std::uint32_t>(tree.n_levels()));
    for (std::size_t k = 0; k < tree.n_levels(); ++k) {
        put(out, tree.thresholds[k]);
        put(out, static_cast<std::uint64_t>(tree.levels[k].size()));
        for (std::size_t c = 0; c < tree.levels[k].size(); ++c) {
            const Cluster& cl = tree.levels[k][c];
            put(out, static_cast<std::int64_t>(tree.parent[k][c]));
            put(out, static_cast<std::uint64_t>(cl.members.size()));
            for (std::size_t m = 0; m < cl.members.size(); ++m) {
                put(out, static_cast<std::int64_t>(cl.members[m]));
                put(out, cl.member_flipped[m]);
            }
            for (const Vec3& p : cl.centroid) { put(out, p.x); put(out, p.y); put(out, p.z); }
        }
    }
    for (const auto& form : tree.resampled)
        for (const Vec3& p : form) { put(out, p.x); put(out, p.y); put(out, p.z); }
    if (!out) fail(Err::IoError, "save_tree: write failed for " + path);
}

ClusterTree load_tree(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) fail(Err::IoError, "load_tree: cannot open " + path);

    char magic[4];
    if (!in.read(magic, 4) || std::memcmp(magic, kTreeMagic, 4) != 0)
        fail(Err::BadMagic, "load_tree: not a cluster tree file: " + path);
    const auto version = get<std::uint32_t>(in, path);
    if (version != kTreeVersion)
        fail(Err::UnsupportedVersion, "load_tree: unsupported version in " + path);

    ClusterTree tree;
    tree.n_resample = static_cast<int>(get<std::uint32_t>(in, path));
    const auto n_streamlines = get<std::uint64_t>(in, path);
    const auto n_levels = get<std::uint32_t>(in, path);

    tree.levels.resize(n_levels);
    tree.parent.resize(n_levels);
    tree.thresholds.resize(n_levels);
    tree.assignment.assign(n_levels, std::vector<int>(n_streamlines, -1));
    for (std::uint32_t k = 0; k < n_levels; ++k) {
        tree.thresholds[k] = get<double>(in, path);
        const auto n_clusters = get<std::uint64_t>(in, path);
        tree.levels[k].resize(n_clusters);
        tree.parent[k].resize(n_clusters);
        for (std::uint64_t c = 0; c < n_clusters; ++c) {
            tree.parent[k][c] = static_cast<int>(get<std::int64_t>(in, path));
            const auto n_members = get<std::uint64_t>(in, path);
            Cluster& cl = tree.levels[k][c];
            cl.members.resize(n_members);
            cl.member_flipped.resize(n_members);
            for (std::uint64_t m = 0; m < n_members; ++m) {
                cl.members[m] = static_cast<int>(get<std::int64_t>(in, path));
                cl.member_flipped[m] = get<std::uint8_t>(in, path);
                if (cl.members[m] < 0 || static_cast<std::uint64_t>(cl.members[m]) >= n_streamlines)
                    fail(Err::ParseError, "load_tree: member index out of range in " + path);
                tree.assignment[k][static_cast<std::size_t>(cl.members[m])] = static_cast<int>(c);
            }
            cl.centroid.resize(static_cast<std::size_t>(tree.n_resample));
            for (auto& p : cl.centroid) {
                p.x = get<double>(in, path);
                p.y = get<double>(in, path);
                p.z = get<double>(in, path);
            }
        }
    }
    tree.resampled.resize(n_streamlines);
    for (auto& form : tree.resampled) {
        form.resize(static_cast<std::size_t>(tree.n_resample));
        for (auto& p : form) {
            p.x = get<double>(in, path);
            p.y = get<double>(in, path);
            p.z = get<double>(in, path);
        }
    }
    for (std::uint32_t k = 0; k < n_levels; ++k)
        for (std::uint64_t i = 0; i < n_streamlines; ++i)
            if (tree.assignment[k][i] < 0)
                fail(Err::ParseError, "load_tree: streamline missing from level in " + path);
    return tree;
}

}  // namespace tracklet
