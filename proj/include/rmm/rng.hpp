#pragma once

#include <cmath>
#include <cstdint>

namespace rmm {

// SplitMix64 (Steele/Lea/Flood splittable generator, Vigna's fixed-increment
// form). Every stochastic decision in the engine draws from a stream keyed by
// (root seed, purpose, iteration, sample index); streams are derived
// independently, so per-sample work can run in any order without changing the
// draw sequence any single consumer sees.

constexpr std::uint64_t kSplitMix64Gamma = 0x9E3779B97F4A7C15ULL;

inline std::uint64_t splitmix64_mix(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

inline std::uint64_t splitmix64_next(std::uint64_t& state) {
    state += kSplitMix64Gamma;
    return splitmix64_mix(state);
}

// Purpose tags keep independent decision kinds on independent streams.
enum class StreamPurpose : std::uint64_t {
    kInit = 1,
    kShuffleLabeled = 2,
    kShuffleUnlabeled = 3,
    kGlyph = 4,
    kWeakLabeled = 5,
    kWeakUnlabeled = 6,
    kStrong = 7,
    kStrongSecond = 8,
    kSrmPair = 9,
    kSrmMix = 10,
    kCamPair = 11,
    kCamMix = 12,
    kDiagnostics = 13,
    kSplit = 14,
    kTest = 99,
};

struct RandomSource {
    virtual std::uint64_t next_u64() = 0;
    virtual ~RandomSource() = default;
};

class StreamRng final : public RandomSource {
  public:
    explicit StreamRng(std::uint64_t seed) : state_(seed) {}

    StreamRng(std::uint64_t root_seed, StreamPurpose purpose, std::uint64_t iteration,
              std::uint64_t index) {
        std::uint64_t s = root_seed;
        s = splitmix64_mix(s + kSplitMix64Gamma);
        s = splitmix64_mix(s ^ static_cast<std::uint64_t>(purpose));
        s = splitmix64_mix(s ^ iteration);
        s = splitmix64_mix(s ^ index);
        state_ = s;
    }

    std::uint64_t next_u64() override { return splitmix64_next(state_); }

  private:
    std::uint64_t state_;
};

// Uniform double in [0,1) with 53 random bits.
inline double uniform_unit(RandomSource& rng) {
    return static_cast<double>(rng.next_u64() >> 11) * 0x1.0p-53;
}

// Unbiased uniform integer in [0, n). n must be >= 1.
inline std::uint64_t uniform_below(RandomSource& rng, std::uint64_t n) {
    const std::uint64_t limit = ~std::uint64_t{0} - ~std::uint64_t{0} % n;
    for (;;) {
        const std::uint64_t x = rng.next_u64();
        if (x < limit) return x % n;
    }
}

inline bool bernoulli_half(RandomSource& rng) { return (rng.next_u64() & 1u) != 0; }

// Box-Muller, cosine branch only (one normal per two uniforms).
inline double normal_unit(RandomSource& rng) {
    const double u1 = 1.0 - uniform_unit(rng);  // (0, 1]
    const double u2 = uniform_unit(rng);
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * 3.14159265358979323846 * u2);
}

// Marsaglia-Tsang gamma sampler; alpha < 1 handled via the boost identity
// G(a) = G(a+1) * U^(1/a).
inline double gamma_sample(RandomSource& rng, double alpha) {
    if (alpha < 1.0) {
        const double u = uniform_unit(rng);
        return gamma_sample(rng, alpha + 1.0) * std::pow(u, 1.0 / alpha);
    }
    const double d = alpha - 1.0 / 3.0;
    const double c = 1.0 / std::sqrt(9.0 * d);
    for (;;) {
        const double x = normal_unit(rng);
        const double t = 1.0 + c * x;
        if (t <= 0.0) continue;
        const double v = t * t * t;
        const double u = uniform_unit(rng);
        if (u < 1.0 - 0.0331 * x * x * x * x) return d * v;
        if (u > 0.0 && std::log(u) < 0.5 * x * x + d * (1.0 - v + std::log(v))) return d * v;
    }
}

inline double beta_sample(RandomSource& rng, double alpha, double beta) {
    const double x = gamma_sample(rng, alpha);
    const double y = gamma_sample(rng, beta);
    const double s = x + y;
    if (s <= 0.0) return 0.5;
    return x / s;
}

}  // namespace rmm
