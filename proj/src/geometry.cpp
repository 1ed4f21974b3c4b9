#include "tracklet/geometry.hpp"

#include <algorithm>
#include <cmath>

namespace tracklet {

std::vector<double> arc_lengths(const Streamline& s) {
    std::vector<double> acc(s.size(), 0.0);
    for (std::size_t i = 1; i < s.size(); ++i)
        acc[i] = acc[i - 1] + (s[i] - s[i - 1]).norm();
    return acc;
}

// ---------------------------------------------------------------------------
// Natural cubic spline over arc length, one 1D spline per coordinate.
// Second derivatives vanish at both ends; knots may be non-uniform.
// ---------------------------------------------------------------------------
namespace {

// Solves for the second derivatives m[i] of the natural spline through
// (t[i], y[i]) with the classic tridiagonal sweep.
void spline_second_derivs(const std::vector<double>& t, const std::vector<double>& y,
                          std::vector<double>& m, std::vector<double>& scratch) {
    const std::size_t n = t.size();
    m.assign(n, 0.0);
    if (n < 3) return;
    scratch.assign(n, 0.0);
    // Forward sweep. diag stores the modified diagonal, m the modified rhs.
    std::vector<double>& diag = scratch;
    for (std::size_t i = 1; i + 1 < n; ++i) {
        const double h0 = t[i] - t[i - 1];
        const double h1 = t[i + 1] - t[i];
        const double rhs = 6.0 * ((y[i + 1] - y[i]) / h1 - (y[i] - y[i - 1]) / h0);
        double d = 2.0 * (h0 + h1);
        double r = rhs;
        if (i > 1) {
            const double w = h0 / diag[i - 1];
            d -= w * h0;
            r -= w * m[i - 1];
        }
        diag[i] = d;
        m[i] = r;
    }
    for (std::size_t i = n - 2; i >= 1; --i) {
        const double h1 = t[i + 1] - t[i];
        m[i] = (m[i] - (i + 2 < n ? h1 * m[i + 1] : 0.0)) / diag[i];
        if (i == 1) break;
    }
}

}  // namespace

Streamline resample_spline(const Streamline& s, int n) {
    if (s.size() < 2) fail(Err::DegenerateInput, "resample_spline: fewer than 2 points");
    if (n < 2) fail(Err::DegenerateInput, "resample_spline: n must be >= 2");

    const std::vector<double> t = arc_lengths(s);
    const double total = t.back();
    if (!(total > 0.0)) fail(Err::DegenerateInput, "resample_spline: zero total length");

    const std::size_t np = s.size();
    std::vector<double> y(np), m, scratch;
    std::vector<std::vector<double>> m_axis(3);
    for (int axis = 0; axis < 3; ++axis) {
        for (std::size_t i = 0; i < np; ++i) y[i] = s[i][axis];
        spline_second_derivs(t, y, m, scratch);
        m_axis[static_cast<std::size_t>(axis)] = m;
    }

    Streamline out(static_cast<std::size_t>(n));
    std::size_t seg = 0;
    for (int k = 0; k < n; ++k) {
        const double x = (k == n - 1) ? total : total * static_cast<double>(k) / static_cast<double>(n - 1);
        while (seg + 2 < np && t[seg + 1] <= x) ++seg;
        const double h = t[seg + 1] - t[seg];
        const double a = (t[seg + 1] - x) / h;
        const double b = (x - t[seg]) / h;
        const double ca = (a * a * a - a) * (h * h) / 6.0;
        const double cb = (b * b * b - b) * (h * h) / 6.0;
        Vec3 p;
        for (int axis = 0; axis < 3; ++axis) {
            const auto& mm = m_axis[static_cast<std::size_t>(axis)];
            const double v = a * s[seg][axis] + b * s[seg + 1][axis] + ca * mm[seg] + cb * mm[seg + 1];
            if (axis == 0) p.x = v; else if (axis == 1) p.y = v; else p.z = v;
        }
        out[static_cast<std::size_t>(k)] = p;
    }
    // Endpoints exactly.
    out.front() = s.front();
    out.back() = s.back();
    return out;
}

// ---------------------------------------------------------------------------
// Ramer-Douglas-Peucker.
// ---------------------------------------------------------------------------
namespace {

// Distance from p to the segment [a, b] (projection clamped to the segment).
double point_segment_distance(const Vec3& p, const Vec3& a, const Vec3& b) {
    const Vec3 ab = b - a;
    const double len2 = ab.norm2();
    if (len2 == 0.0) return (p - a).norm();
    double u = (p - a).dot(ab) / len2;
    u = std::clamp(u, 0.0, 1.0);
    return (p - (a + ab * u)).norm();
}

void rdp_recurse(const Streamline& s, int lo, int hi, double epsilon, std::vector<int>& keep) {
    if (hi - lo < 2) return;
    double max_d = -1.0;
    int max_i = -1;
    for (int i = lo + 1; i < hi; ++i) {
        const double d = point_segment_distance(s[static_cast<std::size_t>(i)],
                                                s[static_cast<std::size_t>(lo)],
                                                s[static_cast<std::size_t>(hi)]);
        if (d > max_d) {  // ties keep the lowest index
            max_d = d;
            max_i = i;
        }
    }
    if (max_d > epsilon) {
        rdp_recurse(s, lo, max_i, epsilon, keep);
        keep.push_back(max_i);
        rdp_recurse(s, max_i, hi, epsilon, keep);
    }
}

}  // namespace

std::vector<int> simplify_inflection(const Streamline& s, double epsilon) {
    if (!(epsilon > 0.0)) fail(Err::ConfigError, "simplify_inflection: epsilon must be > 0");
    if (s.size() < 2) fail(Err::DegenerateInput, "simplify_inflection: fewer than 2 points");
    std::vector<int> keep;
    keep.push_back(0);
    rdp_recurse(s, 0, static_cast<int>(s.size()) - 1, epsilon, keep);
    keep.push_back(static_cast<int>(s.size()) - 1);
    return keep;
}

std::vector<Tracklet> extract_tracklets(const Streamline& s, const TrackletParams& p) {
    p.validate();
    if (s.size() < 2) fail(Err::DegenerateInput, "extract_tracklets: fewer than 2 points");

    const std::vector<int> keys = simplify_inflection(s, p.rdp_epsilon);
    const int last = static_cast<int>(s.size()) - 1;

    std::vector<Tracklet> out;
    out.reserve(keys.size() - 1);
    for (std::size_t k = 0; k + 1 < keys.size(); ++k) {
        const int lo = std::max(0, keys[k] - p.overlap_points);
        const int hi = std::min(last, keys[k + 1] + p.overlap_points);
        Streamline segment(s.begin() + lo, s.begin() + hi + 1);
        Tracklet t;
        t.points = resample_spline(segment, p.points_per_tracklet);
        Vec3 c;
        for (const auto& q : t.points) c += q;
        t.center = c / static_cast<double>(t.points.size());
        t.source_range = {lo, hi};
        out.push_back(std::move(t));
    }
    return out;
}

double mdf_aligned(const std::vector<Vec3>& a, const std::vector<Vec3>& b) {
    const std::size_t n = a.size();
    if (n == 0 || b.size() != n) fail(Err::ShapeMismatch, "mdf_aligned: mismatched point counts");
    double direct = 0.0, flipped = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        direct += (a[i] - b[i]).norm();
        flipped += (a[i] - b[n - 1 - i]).norm();
    }
    return std::min(direct, flipped) / static_cast<double>(n);
}

double mdf_distance(const Streamline& a, const Streamline& b, int n_resample) {
    return mdf_aligned(resample_spline(a, n_resample), resample_spline(b, n_resample));
}

double chamfer_distance(const std::vector<Vec3>& p, const std::vector<Vec3>& q, ChamferVariant variant) {
    if (p.empty() || q.empty()) fail(Err::EmptySet, "chamfer_distance: empty point set");
    auto one_sided = [variant](const std::vector<Vec3>& from, const std::vector<Vec3>& to) {
        double sum = 0.0;
        for (const auto& a : from) {
            double best = std::numeric_limits<double>::infinity();
            for (const auto& b : to) best = std::min(best, (a - b).norm2());
            sum += (variant == ChamferVariant::L2) ? best : std::sqrt(best);
        }
        return sum / static_cast<double>(from.size());
    };
    return one_sided(p, q) + one_sided(q, p);
}

double chamfer_loss(const std::vector<Vec3>& p, const std::vector<Vec3>& q) {
    return chamfer_distance(p, q, ChamferVariant::L1) + chamfer_distance(p, q, ChamferVariant::L2);
}

}  // namespace tracklet
