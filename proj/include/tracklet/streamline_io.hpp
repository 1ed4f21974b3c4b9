#pragma once

#include <string>

#include "tracklet/types.hpp"

namespace tracklet {

// ---------------------------------------------------------------------------
// TrackVis TRK interchange. 1000-byte little-endian header, then per
// streamline: int32 N, N*(3+n_scalars) float32, n_properties float32.
// Scalars and properties are parsed past and discarded; only coordinates
// are retained. Points are converted to world mm through the header's
// vox_to_ras matrix (voxmm -> voxel centers -> RAS). Strict mode: headers
// with a non-RAS voxel_order are rejected instead of reordered.
// ---------------------------------------------------------------------------
Tractogram read_trk(const std::string& path);
void write_trk(const Tractogram& t, const std::string& path);

// ---------------------------------------------------------------------------
// JSONL interchange: one record per line,
//   {"points": [[x,y,z], ...], "label": <int, optional>}
// Doubles are printed with 17 significant digits so a read/write cycle is
// exact on the decimal text.
// ---------------------------------------------------------------------------
Tractogram read_jsonl(const std::string& path);
void write_jsonl(const Tractogram& t, const std::string& path);

// ---------------------------------------------------------------------------
// Synthetic labeled subjects: distinct analytic bundle families (straight
// fan, planar C-arc, S-curve, helix, affine-jittered copies beyond four
// classes) placed on a coarse anchor lattice so classes stay separable.
// ---------------------------------------------------------------------------
struct SyntheticSpec {
    int n_classes = 2;
    int streamlines_per_class = 10;
    double noise_sigma = 0.0;  // mm, per-point isotropic Gaussian
    std::uint64_t seed = 0;

    void validate() const {
        if (n_classes < 2) fail(Err::ConfigError, "synthetic: n_classes must be >= 2");
        if (streamlines_per_class < 1) fail(Err::ConfigError, "synthetic: streamlines_per_class must be >= 1");
        if (noise_sigma < 0.0) fail(Err::ConfigError, "synthetic: noise_sigma must be >= 0");
    }
};

Tractogram generate_synthetic_subject(const SyntheticSpec& spec);

}  // namespace tracklet
