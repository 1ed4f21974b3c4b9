#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

namespace tracklet {

// splitmix64 step, used to combine seeds into per-purpose streams.
inline std::uint64_t mix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

inline std::uint64_t mix_seed(std::uint64_t a, std::uint64_t b) { return mix64(mix64(a) ^ b); }
inline std::uint64_t mix_seed(std::uint64_t a, std::uint64_t b, std::uint64_t c) {
    return mix64(mix_seed(a, b) ^ c);
}

// Deterministic RNG. The engine is std::mt19937_64 (its raw output sequence is
// fixed by the standard); every adapter below is hand-rolled so that draws are
// identical across standard library implementations.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : eng_(seed) {}

    std::uint64_t u64() { return eng_(); }

    // Uniform in [0, 1) with 53 bits.
    double unit() { return static_cast<double>(eng_() >> 11) * 0x1.0p-53; }

    // Uniform integer in [0, n), rejection sampled.
    std::uint64_t below(std::uint64_t n) {
        if (n <= 1) return 0;
        const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
        std::uint64_t v;
        do { v = eng_(); } while (v >= limit);
        return v % n;
    }

    // Uniform integer in [lo, hi] inclusive.
    int range_int(int lo, int hi) {
        return lo + static_cast<int>(below(static_cast<std::uint64_t>(hi - lo + 1)));
    }

    // Box-Muller, no cached spare (keeps the draw count per call fixed).
    double normal(double mu = 0.0, double sigma = 1.0) {
        const double u1 = 1.0 - unit();  // (0, 1]
        const double u2 = unit();
        const double r = std::sqrt(-2.0 * std::log(u1));
        return mu + sigma * r * std::cos(6.283185307179586476925286766559 * u2);
    }

    bool coin() { return (eng_() & 1ULL) != 0; }

    // Fisher-Yates.
    template <typename T>
    void shuffle(std::vector<T>& v) {
        for (std::size_t i = v.size(); i > 1; --i) {
            const std::size_t j = static_cast<std::size_t>(below(i));
            std::swap(v[i - 1], v[j]);
        }
    }

    // k distinct indices from [0, n), uniform without replacement, in draw order.
    std::vector<int> sample_without_replacement(int n, int k) {
        std::vector<int> pool(static_cast<std::size_t>(n));
        for (int i = 0; i < n; ++i) pool[static_cast<std::size_t>(i)] = i;
        std::vector<int> out;
        out.reserve(static_cast<std::size_t>(k));
        for (int i = 0; i < k && !pool.empty(); ++i) {
            const std::size_t j = static_cast<std::size_t>(below(pool.size()));
            out.push_back(pool[j]);
            pool[j] = pool.back();
            pool.pop_back();
        }
        return out;
    }

private:
    std::mt19937_64 eng_;
};

}  // namespace tracklet
