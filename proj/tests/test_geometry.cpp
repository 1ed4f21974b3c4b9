#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "test_util.hpp"
#include "tracklet/geometry.hpp"

using namespace tracklet;
using namespace tracklet::testutil;

namespace {

// Independent point-to-segment distance used to validate RDP output.
double oracle_seg_dist(const Vec3& p, const Vec3& a, const Vec3& b) {
    const double abx = b.x - a.x, aby = b.y - a.y, abz = b.z - a.z;
    const double len2 = abx * abx + aby * aby + abz * abz;
    double t = len2 > 0.0 ? ((p.x - a.x) * abx + (p.y - a.y) * aby + (p.z - a.z) * abz) / len2 : 0.0;
    t = std::max(0.0, std::min(1.0, t));
    const double dx = p.x - (a.x + t * abx), dy = p.y - (a.y + t * aby), dz = p.z - (a.z + t * abz);
    return std::sqrt(dx * dx + dy * dy + dz * dz);
}

// Independent brute-force Chamfer: full distance matrix, then reductions.
double oracle_chamfer(const std::vector<Vec3>& p, const std::vector<Vec3>& q, bool squared) {
    std::vector<std::vector<double>> d(p.size(), std::vector<double>(q.size()));
    for (std::size_t i = 0; i < p.size(); ++i)
        for (std::size_t j = 0; j < q.size(); ++j) {
            const double dd = (p[i] - q[j]).norm2();
            d[i][j] = squared ? dd : std::sqrt(dd);
        }
    double acc_p = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i)
        acc_p += *std::min_element(d[i].begin(), d[i].end());
    double acc_q = 0.0;
    for (std::size_t j = 0; j < q.size(); ++j) {
        double best = d[0][j];
        for (std::size_t i = 1; i < p.size(); ++i) best = std::min(best, d[i][j]);
        acc_q += best;
    }
    return acc_p / static_cast<double>(p.size()) + acc_q / static_cast<double>(q.size());
}

Streamline v_shape() {
    Streamline s;
    for (int i = 0; i <= 5; ++i) s.push_back({double(i), double(i), 0.0});
    for (int i = 6; i <= 10; ++i) s.push_back({double(i), double(10 - i), 0.0});
    return s;
}

}  // namespace

TEST_CASE("arc_lengths basics") {
    CHECK(arc_lengths({{0, 0, 0}, {1, 0, 0}, {3, 0, 0}}) == std::vector<double>{0, 1, 3});
    const Streamline square{{0, 0, 0}, {1, 0, 0}, {1, 1, 0}, {0, 1, 0}};
    CHECK(arc_lengths(square) == std::vector<double>{0, 1, 2, 3});
}

TEST_CASE("arc_lengths matches naive summation on random polylines") {
    Rng rng(11);
    for (int trial = 0; trial < 20; ++trial) {
        const Streamline s = random_polyline(rng, 50);
        double total = 0.0;
        for (std::size_t i = 1; i < s.size(); ++i) {
            const double dx = s[i].x - s[i - 1].x, dy = s[i].y - s[i - 1].y, dz = s[i].z - s[i - 1].z;
            total += std::sqrt(dx * dx + dy * dy + dz * dz);
        }
        const auto acc = arc_lengths(s);
        CHECK(acc.front() == 0.0);
        CHECK(acc.back() == doctest::Approx(total).epsilon(1e-12));
        CHECK(std::is_sorted(acc.begin(), acc.end()));
    }
}

TEST_CASE("resample_spline reproduces straight segments exactly") {
    const Streamline s{{0, 0, 0}, {10, 0, 0}};
    const Streamline r = resample_spline(s, 12);
    REQUIRE(r.size() == 12);
    for (int k = 0; k < 12; ++k) {
        CHECK(r[std::size_t(k)].x == doctest::Approx(10.0 * k / 11.0).epsilon(1e-12));
        CHECK(r[std::size_t(k)].y == 0.0);
        CHECK(r[std::size_t(k)].z == 0.0);
    }
    CHECK(r.front() == s.front());
    CHECK(r.back() == s.back());
}

TEST_CASE("resample_spline is self-consistent on uniform arcs") {
    Rng rng(5);
    for (int trial = 0; trial < 10; ++trial) {
        // Uniform-parameter synthetic arc with near-uniform point spacing.
        const int n = 40;
        Streamline s(n);
        const double r0 = 20.0 + 10.0 * rng.unit();
        for (int i = 0; i < n; ++i) {
            const double a = 0.8 * i / (n - 1);
            s[std::size_t(i)] = {r0 * std::cos(a), r0 * std::sin(a), 2.0 * a};
        }
        const Streamline r = resample_spline(s, n);
        double max_dev = 0.0;
        for (int i = 0; i < n; ++i) max_dev = std::max(max_dev, (r[std::size_t(i)] - s[std::size_t(i)]).norm());
        CHECK(max_dev < 1e-6);
    }
}

TEST_CASE("resample_spline tracks a quarter circle to 0.05 mm") {
    const int n_in = 25;
    Streamline s(n_in);
    for (int i = 0; i < n_in; ++i) {
        const double a = (3.14159265358979323846 / 2.0) * i / (n_in - 1);
        s[std::size_t(i)] = {10.0 * std::cos(a), 10.0 * std::sin(a), 0.0};
    }
    const Streamline r = resample_spline(s, 12);
    for (const auto& p : r) {
        CHECK(std::abs(p.norm() - 10.0) < 0.05);
    }
}

TEST_CASE("resample_spline rejects degenerate input") {
    CHECK_THROWS_AS(resample_spline({{1, 1, 1}}, 12), Error);
    // Zero total length can only come from invalid streamlines, but is guarded.
    bool threw = false;
    try {
        resample_spline({{1, 1, 1}, {1, 1, 1}}, 4);
    } catch (const Error& e) {
        threw = e.code() == Err::DegenerateInput;
    }
    CHECK(threw);
}

TEST_CASE("simplify_inflection on a line keeps only the endpoints") {
    Streamline line;
    for (int i = 0; i < 10; ++i) line.push_back({double(i), 2.0 * i, 0.0});
    CHECK(simplify_inflection(line, 2.0) == std::vector<int>{0, 9});
}

TEST_CASE("simplify_inflection finds the V apex") {
    const Streamline s = v_shape();
    const auto keys = simplify_inflection(s, 1.0);
    CHECK(keys == std::vector<int>{0, 5, 10});
    // Brute force: every 3-index subset {0, k, 10} must cover all points
    // within epsilon only when k == 5 (deviation scan over all candidates).
    for (int k = 1; k < 10; ++k) {
        double max_dev = 0.0;
        for (int j = 1; j < 10; ++j) {
            const Vec3& p = s[std::size_t(j)];
            const double d = j <= k ? oracle_seg_dist(p, s[0], s[std::size_t(k)])
                                    : oracle_seg_dist(p, s[std::size_t(k)], s[10]);
            max_dev = std::max(max_dev, d);
        }
        if (k == 5)
            CHECK(max_dev <= 1.0);
        else
            CHECK(max_dev > 1.0);
    }
}

TEST_CASE("simplify_inflection with huge epsilon returns the endpoints") {
    Rng rng(7);
    const Streamline s = random_polyline(rng, 30);
    CHECK(simplify_inflection(s, 1e12) == std::vector<int>{0, 29});
}

TEST_CASE("simplify_inflection deviation bound holds on random polylines") {
    Rng rng(19);
    for (int trial = 0; trial < 50; ++trial) {
        const Streamline s = random_polyline(rng, 40 + int(rng.below(40)));
        const double eps = 0.5 + 3.0 * rng.unit();
        const auto keys = simplify_inflection(s, eps);
        REQUIRE(keys.front() == 0);
        REQUIRE(keys.back() == int(s.size()) - 1);
        CHECK(std::is_sorted(keys.begin(), keys.end()));
        for (std::size_t g = 0; g + 1 < keys.size(); ++g)
            for (int j = keys[g] + 1; j < keys[g + 1]; ++j)
                CHECK(oracle_seg_dist(s[std::size_t(j)], s[std::size_t(keys[g])],
                                      s[std::size_t(keys[g + 1])]) <= eps + 1e-12);
    }
}

TEST_CASE("extract_tracklets on a straight line yields one full-span tracklet") {
    Streamline line;
    for (int i = 0; i < 20; ++i) line.push_back({double(i), 0.0, 0.0});
    const auto ts = extract_tracklets(line, {});
    REQUIRE(ts.size() == 1);
    CHECK(ts[0].points.size() == 12);
    CHECK(ts[0].source_range == std::pair<int, int>{0, 19});
    CHECK(ts[0].points.front() == line.front());
    CHECK(ts[0].points.back() == line.back());
}

TEST_CASE("extract_tracklets V-shape source ranges follow the overlap formula") {
    const Streamline s = v_shape();
    TrackletParams p;
    p.rdp_epsilon = 1.0;
    p.overlap_points = 2;
    const auto ts = extract_tracklets(s, p);
    REQUIRE(ts.size() == 2);
    CHECK(ts[0].source_range == std::pair<int, int>{0, 7});
    CHECK(ts[1].source_range == std::pair<int, int>{3, 10});
}

TEST_CASE("extract_tracklets invariants on random polylines") {
    Rng rng(23);
    for (int trial = 0; trial < 25; ++trial) {
        const Streamline s = random_polyline(rng, 30 + int(rng.below(60)));
        TrackletParams p;
        const auto ts = extract_tracklets(s, p);
        REQUIRE(!ts.empty());
        // Coverage of [0, N-1], order, shape, center recomputation.
        CHECK(ts.front().source_range.first == 0);
        CHECK(ts.back().source_range.second == int(s.size()) - 1);
        for (std::size_t i = 0; i < ts.size(); ++i) {
            CHECK(ts[i].points.size() == 12);
            Vec3 mean;
            for (const auto& q : ts[i].points) mean += q;
            mean = mean / 12.0;
            CHECK((mean - ts[i].center).norm() < 1e-9);
            CHECK(ts[i].center.finite());
            if (i > 0) {
                CHECK(ts[i].source_range.first >= ts[i - 1].source_range.first);
                // Consecutive source ranges overlap by >= 2*overlap interior
                // indices whenever the streamline permits.
                const int overlap = ts[i - 1].source_range.second - ts[i].source_range.first + 1;
                CHECK(overlap >= 2 * p.overlap_points);
            }
        }
    }
}

TEST_CASE("extract_tracklets of a reversed streamline mirrors the tracklets") {
    Rng rng(29);
    for (int trial = 0; trial < 10; ++trial) {
        const Streamline s = random_polyline(rng, 50);
        const Streamline r = reversed(s);
        const auto ts = extract_tracklets(s, {});
        const auto tr = extract_tracklets(r, {});
        REQUIRE(ts.size() == tr.size());
        const int last = int(s.size()) - 1;
        for (std::size_t i = 0; i < ts.size(); ++i) {
            const auto& fwd = ts[i];
            const auto& bwd = tr[ts.size() - 1 - i];
            CHECK(bwd.source_range.first == last - fwd.source_range.second);
            CHECK(bwd.source_range.second == last - fwd.source_range.first);
            for (int k = 0; k < 12; ++k)
                CHECK((fwd.points[std::size_t(k)] - bwd.points[std::size_t(11 - k)]).norm() < 1e-6);
        }
    }
}

TEST_CASE("mdf identity, flip and parallel-line distances") {
    Rng rng(31);
    const Streamline s = random_polyline(rng, 40);
    CHECK(mdf_distance(s, s) == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(mdf_distance(s, reversed(s)) < 1e-9);

    Streamline a, b;
    for (int i = 0; i < 20; ++i) {
        a.push_back({double(i), 0.0, 0.0});
        b.push_back({double(i), 3.0, 0.0});
    }
    CHECK(mdf_distance(a, b) == doctest::Approx(3.0).epsilon(1e-12));
}

TEST_CASE("mdf symmetry and flip invariance on random pairs") {
    Rng rng(37);
    for (int trial = 0; trial < 50; ++trial) {
        const Streamline a = random_polyline(rng, 20 + int(rng.below(40)));
        const Streamline b = random_polyline(rng, 20 + int(rng.below(40)));
        const double ab = mdf_distance(a, b);
        CHECK(ab >= 0.0);
        CHECK(ab == doctest::Approx(mdf_distance(b, a)).epsilon(1e-12));
        CHECK(ab == doctest::Approx(mdf_distance(a, reversed(b))).epsilon(1e-12));
    }
}

TEST_CASE("chamfer hand-computed single-point example") {
    const std::vector<Vec3> p{{0, 0, 0}};
    const std::vector<Vec3> q{{3, 4, 0}};
    CHECK(chamfer_distance(p, q, ChamferVariant::L1) == doctest::Approx(10.0));
    CHECK(chamfer_distance(p, q, ChamferVariant::L2) == doctest::Approx(50.0));
    CHECK(chamfer_distance(p, p, ChamferVariant::L1) == 0.0);
    CHECK(chamfer_distance(p, p, ChamferVariant::L2) == 0.0);
}

TEST_CASE("chamfer equals the brute-force oracle and is permutation invariant") {
    Rng rng(41);
    for (int trial = 0; trial < 100; ++trial) {
        auto p = random_points(rng, 12);
        auto q = random_points(rng, 12);
        const double l1 = chamfer_distance(p, q, ChamferVariant::L1);
        const double l2 = chamfer_distance(p, q, ChamferVariant::L2);
        CHECK(std::abs(l1 - oracle_chamfer(p, q, false)) < 1e-9);
        CHECK(std::abs(l2 - oracle_chamfer(p, q, true)) < 1e-9);
        CHECK(chamfer_loss(p, q) == doctest::Approx(l1 + l2).epsilon(1e-12));
        rng.shuffle(p);
        rng.shuffle(q);
        CHECK(chamfer_distance(p, q, ChamferVariant::L1) == doctest::Approx(l1).epsilon(1e-12));
        CHECK(chamfer_distance(p, q, ChamferVariant::L2) == doctest::Approx(l2).epsilon(1e-12));
    }
}

TEST_CASE("chamfer rejects empty sets") {
    CHECK_THROWS_AS(chamfer_distance({}, {{1, 2, 3}}, ChamferVariant::L1), Error);
}
