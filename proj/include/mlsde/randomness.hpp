#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <vector>

#include "mlsde/problems.hpp"

namespace mlsde {

enum class StreamPurpose : std::uint64_t { initial = 1, brownian = 2, reference = 3 };

// Identifies one logical random stream. Distinct ids derive statistically
// independent streams from the same master seed, so samples can be assigned
// to threads in any order without changing any result.
struct StreamId {
    std::uint32_t level = 0;
    std::uint64_t sample = 1;
    StreamPurpose purpose = StreamPurpose::brownian;
};

// xoshiro256++ with state filled by a splitmix64 expansion of the
// (master_seed, StreamId) hash. Normal variates use a 128-strip ziggurat.
class RngStream {
public:
    RngStream() = default;
    explicit RngStream(const std::array<std::uint64_t, 4>& state) : state_(state) {}

    std::uint64_t next_u64();
    double next_uniform();  // [0, 1)
    double next_normal();   // N(0, 1)

private:
    std::array<std::uint64_t, 4> state_{1, 2, 3, 4};
};

// Pure function of (master_seed, id); independent of call order and threads.
RngStream derive_stream(std::uint64_t master_seed, StreamId id);

// Derives an independent master seed, e.g. one per replicate of an experiment.
std::uint64_t derive_seed(std::uint64_t master_seed, std::uint64_t index);

inline constexpr std::uint64_t default_master_seed = 42;

// Brownian increments on a uniform grid: steps vectors in R^m, each
// distributed N(0, dt * I_m), stored row-major.
struct IncrementGrid {
    int steps = 0;
    double dt = 0.0;
    int noise_dim = 1;
    std::vector<double> data;

    std::span<const double> increment(int j) const {
        return {data.data() + static_cast<std::size_t>(j) * noise_dim,
                static_cast<std::size_t>(noise_dim)};
    }
};

IncrementGrid sample_increments(RngStream& gen, int steps, double dt, int noise_dim);

// Same contract as sample_increments but reuses the grid's storage.
void fill_increments(RngStream& gen, int steps, double dt, int noise_dim,
                     IncrementGrid& out);

// Pairwise sums: coarse.increments[j] = fine[2j] + fine[2j+1], dt doubled.
// The coarse grid is the same Brownian path seen on the halved grid.
IncrementGrid coarsen(const IncrementGrid& fine);

// Draws X_0 from the problem's initial law; point masses are returned exactly.
Vec sample_initial(const SdeProblem& problem, RngStream& gen);

}  // namespace mlsde
