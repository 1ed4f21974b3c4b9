#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "tracklet/geometry.hpp"
#include "tracklet/types.hpp"

namespace tracklet {

struct Cluster {
    std::vector<int> members;                 // streamline indices, insertion order
    std::vector<std::uint8_t> member_flipped; // orientation chosen at insertion
    std::vector<Vec3> centroid;               // running mean of flip-aligned resampled members
};

// Single-pass QuickBundles at one MDF threshold. Assignment happens in input
// order; ties between equally near centroids go to the lowest cluster index.
std::vector<Cluster> quickbundles(const std::vector<Streamline>& streamlines, double threshold,
                                  int n_resample = 12);

// Multi-resolution cluster tree (coarsest level first). Each streamline
// descends level by level, choosing the nearest child of its current parent;
// a move-up pass then merges finest-level singletons into their nearest
// sibling when within the parent-level threshold.
struct ClusterTree {
    std::vector<double> thresholds;               // strictly decreasing, mm
    std::vector<std::vector<Cluster>> levels;     // levels[k] clustered at thresholds[k]
    std::vector<std::vector<int>> parent;         // parent[k][c] -> cluster index at level k-1 (-1 at k=0)
    std::vector<std::vector<int>> assignment;     // assignment[k][streamline] -> cluster index
    std::vector<std::vector<Vec3>> resampled;     // cached n_resample-point forms
    int n_resample = 12;

    std::size_t n_streamlines() const { return resampled.size(); }
    std::size_t n_levels() const { return levels.size(); }
};

inline std::vector<double> default_thresholds() { return {40.0, 30.0, 20.0, 10.0, 8.0, 6.0, 4.0}; }

ClusterTree build_tree(const std::vector<Streamline>& streamlines, const std::vector<double>& thresholds,
                       int n_resample = 12);

// 7 neighbor indices for idx: pool = the 10 MDF-nearest co-cluster members,
// widening from the finest level over the three finest resolutions, then a
// seeded uniform sample of 7 without replacement. Small pools return every
// candidate, padded with the nearest one (or idx itself when empty).
std::vector<int> sample_neighbors(const ClusterTree& tree, int idx, std::uint64_t seed);

// Versioned binary sidecar so tokenization can reuse trees across runs.
void save_tree(const ClusterTree& tree, const std::string& path);
ClusterTree load_tree(const std::string& path);

}  // namespace tracklet
