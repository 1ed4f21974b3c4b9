#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

namespace tracklet {

// ---------------------------------------------------------------------------
// Small 3D vector. All streamline coordinates are world millimeters.
// ---------------------------------------------------------------------------
struct Vec3 {
    double x = 0.0, y = 0.0, z = 0.0;

    Vec3() = default;
    Vec3(double x_, double y_, double z_) : x(x_), y(y_), z(z_) {}

    Vec3 operator+(const Vec3& o) const { return {x + o.x, y + o.y, z + o.z}; }
    Vec3 operator-(const Vec3& o) const { return {x - o.x, y - o.y, z - o.z}; }
    Vec3 operator*(double s) const { return {x * s, y * s, z * s}; }
    Vec3 operator/(double s) const { return {x / s, y / s, z / s}; }
    Vec3& operator+=(const Vec3& o) { x += o.x; y += o.y; z += o.z; return *this; }
    Vec3& operator-=(const Vec3& o) { x -= o.x; y -= o.y; z -= o.z; return *this; }
    Vec3& operator*=(double s) { x *= s; y *= s; z *= s; return *this; }

    double dot(const Vec3& o) const { return x * o.x + y * o.y + z * o.z; }
    double norm2() const { return dot(*this); }
    double norm() const { return std::sqrt(norm2()); }
    bool finite() const { return std::isfinite(x) && std::isfinite(y) && std::isfinite(z); }

    double operator[](int i) const { return i == 0 ? x : (i == 1 ? y : z); }
    bool operator==(const Vec3& o) const { return x == o.x && y == o.y && z == o.z; }
};

inline Vec3 operator*(double s, const Vec3& v) { return v * s; }

// Ordered 3D polyline. Valid streamlines have >= 2 points, all finite,
// with no zero-length segments.
using Streamline = std::vector<Vec3>;

// ---------------------------------------------------------------------------
// Errors. One enum for the whole library; the CLI maps families to exit codes.
// ---------------------------------------------------------------------------
enum class Err {
    BadMagic,
    TruncatedFile,
    UnsupportedVersion,
    IoError,
    ParseError,
    InvalidStreamline,
    DegenerateInput,
    DegenerateBounds,
    EmptySet,
    ShapeMismatch,
    NoValidTokens,
    IndexOutOfRange,
    NonFiniteGradient,
    NonFiniteLoss,
    ClassCountMismatch,
    NoLabels,
    GridMismatch,
    ConfigError,
    MissingArtifact,
};

class Error : public std::runtime_error {
public:
    Error(Err code, const std::string& msg) : std::runtime_error(msg), code_(code) {}
    Err code() const { return code_; }

private:
    Err code_;
};

[[noreturn]] inline void fail(Err code, const std::string& msg) { throw Error(code, msg); }

inline const char* err_name(Err e) {
    switch (e) {
        case Err::BadMagic: return "BadMagic";
        case Err::TruncatedFile: return "TruncatedFile";
        case Err::UnsupportedVersion: return "UnsupportedVersion";
        case Err::IoError: return "IoError";
        case Err::ParseError: return "ParseError";
        case Err::InvalidStreamline: return "InvalidStreamline";
        case Err::DegenerateInput: return "DegenerateInput";
        case Err::DegenerateBounds: return "DegenerateBounds";
        case Err::EmptySet: return "EmptySet";
        case Err::ShapeMismatch: return "ShapeMismatch";
        case Err::NoValidTokens: return "NoValidTokens";
        case Err::IndexOutOfRange: return "IndexOutOfRange";
        case Err::NonFiniteGradient: return "NonFiniteGradient";
        case Err::NonFiniteLoss: return "NonFiniteLoss";
        case Err::ClassCountMismatch: return "ClassCountMismatch";
        case Err::NoLabels: return "NoLabels";
        case Err::GridMismatch: return "GridMismatch";
        case Err::ConfigError: return "ConfigError";
        case Err::MissingArtifact: return "MissingArtifact";
    }
    return "Unknown";
}

// ---------------------------------------------------------------------------
// Axis-aligned bounding box in mm.
// ---------------------------------------------------------------------------
struct Aabb {
    Vec3 min{std::numeric_limits<double>::infinity(),
             std::numeric_limits<double>::infinity(),
             std::numeric_limits<double>::infinity()};
    Vec3 max{-std::numeric_limits<double>::infinity(),
             -std::numeric_limits<double>::infinity(),
             -std::numeric_limits<double>::infinity()};

    bool empty() const { return min.x > max.x; }

    void expand(const Vec3& p) {
        min.x = std::min(min.x, p.x); min.y = std::min(min.y, p.y); min.z = std::min(min.z, p.z);
        max.x = std::max(max.x, p.x); max.y = std::max(max.y, p.y); max.z = std::max(max.z, p.z);
    }

    bool contains(const Vec3& p) const {
        return !empty() &&
               p.x >= min.x && p.x <= max.x &&
               p.y >= min.y && p.y <= max.y &&
               p.z >= min.z && p.z <= max.z;
    }

    Vec3 extent() const { return empty() ? Vec3{0, 0, 0} : max - min; }
};

// ---------------------------------------------------------------------------
// Streamline validation (ingest-time invariants).
// ---------------------------------------------------------------------------
inline void validate_streamline(const Streamline& s, const std::string& context) {
    if (s.size() < 2)
        fail(Err::InvalidStreamline, context + ": streamline has fewer than 2 points");
    for (std::size_t i = 0; i < s.size(); ++i) {
        if (!s[i].finite())
            fail(Err::InvalidStreamline, context + ": non-finite coordinate at point " + std::to_string(i));
        if (i > 0 && (s[i] - s[i - 1]).norm2() == 0.0)
            fail(Err::InvalidStreamline, context + ": zero-length segment at point " + std::to_string(i));
    }
}

// ---------------------------------------------------------------------------
// A set of streamlines plus optional per-streamline bundle labels.
// ---------------------------------------------------------------------------
struct Tractogram {
    std::vector<Streamline> streamlines;
    std::vector<int> labels;                 // empty, or one label per streamline
    std::vector<std::string> class_names;    // optional, size == n_classes when present
    Vec3 voxel_size{1.0, 1.0, 1.0};
    Aabb bounds;

    std::size_t size() const { return streamlines.size(); }
    bool has_labels() const { return !labels.empty(); }

    int n_classes() const {
        if (!class_names.empty()) return static_cast<int>(class_names.size());
        int m = -1;
        for (int l : labels) m = std::max(m, l);
        return m + 1;
    }

    void recompute_bounds() {
        bounds = Aabb{};
        for (const auto& s : streamlines)
            for (const auto& p : s) bounds.expand(p);
    }

    void validate() const {
        if (has_labels() && labels.size() != streamlines.size())
            fail(Err::ShapeMismatch, "label count does not match streamline count");
        const int c = n_classes();
        for (std::size_t i = 0; i < labels.size(); ++i)
            if (labels[i] < 0 || labels[i] >= c)
                fail(Err::IndexOutOfRange, "label out of range at streamline " + std::to_string(i));
        for (std::size_t i = 0; i < streamlines.size(); ++i) {
            validate_streamline(streamlines[i], "streamline " + std::to_string(i));
            for (const auto& p : streamlines[i])
                if (!bounds.contains(p))
                    fail(Err::InvalidStreamline, "bounds do not contain streamline " + std::to_string(i));
        }
    }
};

}  // namespace tracklet
