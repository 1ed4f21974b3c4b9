#pragma once

#include <utility>
#include <vector>

#include "tracklet/types.hpp"

namespace tracklet {

// ---------------------------------------------------------------------------
// Tracklet: a fixed-size resampled sub-streamline segment ("word").
// ---------------------------------------------------------------------------
struct Tracklet {
    std::vector<Vec3> points;          // exactly points_per_tracklet entries
    Vec3 center;                       // arithmetic mean of points
    std::pair<int, int> source_range;  // inclusive index range into the parent streamline
};

struct TrackletParams {
    double rdp_epsilon = 2.0;    // mm
    int overlap_points = 2;      // bidirectional extension, in indices
    int points_per_tracklet = 12;

    void validate() const {
        if (!(rdp_epsilon > 0.0)) fail(Err::ConfigError, "rdp_epsilon must be > 0");
        if (overlap_points < 0) fail(Err::ConfigError, "overlap_points must be >= 0");
        if (points_per_tracklet < 4) fail(Err::ConfigError, "points_per_tracklet must be >= 4");
    }
};

// Cumulative arc length at each point; first element 0, last = total length.
std::vector<double> arc_lengths(const Streamline& s);

// Natural cubic spline fit per coordinate over cumulative arc length,
// evaluated at n equidistant parameter values. Endpoints preserved exactly.
// Throws DegenerateInput when the total length is 0.
Streamline resample_spline(const Streamline& s, int n);

// Ramer-Douglas-Peucker keypoints. Returns sorted indices including 0 and
// N-1; every dropped point lies within epsilon of its covering segment.
std::vector<int> simplify_inflection(const Streamline& s, double epsilon);

// One tracklet per consecutive keypoint pair, each source segment extended by
// overlap_points indices in both directions (clamped) and spline-resampled.
std::vector<Tracklet> extract_tracklets(const Streamline& s, const TrackletParams& p);

// Mean direct-flip distance between streamlines resampled to n_resample points.
double mdf_distance(const Streamline& a, const Streamline& b, int n_resample = 12);

// MDF on polylines that already have equal point counts (no resampling).
double mdf_aligned(const std::vector<Vec3>& a, const std::vector<Vec3>& b);

enum class ChamferVariant { L1, L2 };

// Symmetric Chamfer distance between point sets. L2 uses squared Euclidean
// distances, L1 plain Euclidean norms. Throws EmptySet on empty input.
double chamfer_distance(const std::vector<Vec3>& p, const std::vector<Vec3>& q, ChamferVariant variant);

// Combined reconstruction loss: CD_L1 + CD_L2 with equal weights.
double chamfer_loss(const std::vector<Vec3>& p, const std::vector<Vec3>& q);

}  // namespace tracklet
