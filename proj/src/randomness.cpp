#include "mlsde/randomness.hpp"

#include <cmath>
#include <stdexcept>

namespace mlsde {

namespace {

inline std::uint64_t rotl(std::uint64_t x, int k) {
    return (x << k) | (x >> (64 - k));
}

// splitmix64 finalizer; bijective on 64-bit words.
inline std::uint64_t mix64(std::uint64_t z) {
    z += 0x9E3779B97F4A7C15ULL;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

inline std::uint64_t splitmix_next(std::uint64_t& s) {
    s += 0x9E3779B97F4A7C15ULL;
    std::uint64_t z = s;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

// 128-strip ziggurat for the standard normal (Marsaglia-Tsang layout,
// double-precision tables). x[0] = V/f(R) is the pseudo-width of the base
// strip, x[1] = R, x decreasing to x[128] = 0.
struct ZigguratTables {
    static constexpr int strips = 128;
    static constexpr double tail_start = 3.442619855899;
    double x[strips + 1];
    double ratio[strips];  // x[i+1] / x[i]

    ZigguratTables() {
        const double v = 9.91256303526217e-3;
        double f = std::exp(-0.5 * tail_start * tail_start);
        x[0] = v / f;
        x[1] = tail_start;
        x[strips] = 0.0;
        for (int i = 2; i < strips; ++i) {
            x[i] = std::sqrt(-2.0 * std::log(v / x[i - 1] + f));
            f = std::exp(-0.5 * x[i] * x[i]);
        }
        for (int i = 0; i < strips; ++i) ratio[i] = x[i + 1] / x[i];
    }
};

const ZigguratTables& ziggurat() {
    static const ZigguratTables tables;
    return tables;
}

}  // namespace

std::uint64_t RngStream::next_u64() {
    std::uint64_t& s0 = state_[0];
    std::uint64_t& s1 = state_[1];
    std::uint64_t& s2 = state_[2];
    std::uint64_t& s3 = state_[3];
    std::uint64_t result = rotl(s0 + s3, 23) + s0;
    std::uint64_t t = s1 << 17;
    s2 ^= s0;
    s3 ^= s1;
    s1 ^= s2;
    s0 ^= s3;
    s2 ^= t;
    s3 = rotl(s3, 45);
    return result;
}

double RngStream::next_uniform() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double RngStream::next_normal() {
    const ZigguratTables& z = ziggurat();
    for (;;) {
        std::uint64_t bits = next_u64();
        int i = static_cast<int>(bits & 127);
        // signed uniform in [-1, 1) from the top 53 bits
        double u = static_cast<double>(bits >> 11) * 0x1.0p-52 - 1.0;
        if (std::abs(u) < z.ratio[i]) return u * z.x[i];
        if (i == 0) {
            // tail beyond R: Marsaglia's exact method
            double xt, yt;
            do {
                xt = -std::log(1.0 - next_uniform()) / ZigguratTables::tail_start;
                yt = -std::log(1.0 - next_uniform());
            } while (yt + yt < xt * xt);
            double r = ZigguratTables::tail_start + xt;
            return u < 0.0 ? -r : r;
        }
        double val = u * z.x[i];
        double f0 = std::exp(-0.5 * (z.x[i] * z.x[i] - val * val));
        double f1 = std::exp(-0.5 * (z.x[i + 1] * z.x[i + 1] - val * val));
        if (f1 + next_uniform() * (f0 - f1) < 1.0) return val;
    }
}

RngStream derive_stream(std::uint64_t master_seed, StreamId id) {
    std::uint64_t h = master_seed;
    h = mix64(h ^ 0x53747265616D4944ULL);  // domain separation
    h = mix64(h ^ id.level);
    h = mix64(h ^ id.sample);
    h = mix64(h ^ static_cast<std::uint64_t>(id.purpose));
    std::array<std::uint64_t, 4> state;
    for (auto& w : state) w = splitmix_next(h);
    if ((state[0] | state[1] | state[2] | state[3]) == 0) state[0] = 0x9E3779B97F4A7C15ULL;
    return RngStream(state);
}

std::uint64_t derive_seed(std::uint64_t master_seed, std::uint64_t index) {
    return mix64(mix64(master_seed ^ 0x5265706C53656564ULL) ^ index);
}

void fill_increments(RngStream& gen, int steps, double dt, int noise_dim,
                     IncrementGrid& out) {
    if (steps < 1) throw std::invalid_argument("sample_increments: steps must be >= 1");
    if (!(dt > 0.0)) throw std::invalid_argument("sample_increments: dt must be > 0");
    if (noise_dim < 1) throw std::invalid_argument("sample_increments: noise_dim must be >= 1");
    out.steps = steps;
    out.dt = dt;
    out.noise_dim = noise_dim;
    out.data.resize(static_cast<std::size_t>(steps) * noise_dim);
    double scale = std::sqrt(dt);
    for (double& v : out.data) v = scale * gen.next_normal();
}

IncrementGrid sample_increments(RngStream& gen, int steps, double dt, int noise_dim) {
    IncrementGrid grid;
    fill_increments(gen, steps, dt, noise_dim, grid);
    return grid;
}

IncrementGrid coarsen(const IncrementGrid& fine) {
    if (fine.steps % 2 != 0)
        throw std::invalid_argument("coarsen: fine grid must have an even number of steps");
    IncrementGrid coarse;
    coarse.steps = fine.steps / 2;
    coarse.dt = 2.0 * fine.dt;
    coarse.noise_dim = fine.noise_dim;
    coarse.data.resize(static_cast<std::size_t>(coarse.steps) * coarse.noise_dim);
    const int m = fine.noise_dim;
    for (int j = 0; j < coarse.steps; ++j) {
        const double* a = fine.data.data() + static_cast<std::size_t>(2 * j) * m;
        const double* b = a + m;
        double* out = coarse.data.data() + static_cast<std::size_t>(j) * m;
        for (int c = 0; c < m; ++c) out[c] = a[c] + b[c];
    }
    return coarse;
}

Vec sample_initial(const SdeProblem& problem, RngStream& gen) {
    if (problem.initial_law.kind == InitialKind::point_mass) {
        return problem.initial_law.point;
    }
    Vec x(static_cast<std::size_t>(problem.dim));
    for (double& v : x) v = problem.initial_law.sigma_bar * gen.next_normal();
    return x;
}

}  // namespace mlsde
