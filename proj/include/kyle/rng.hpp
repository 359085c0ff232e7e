#pragma once

#include <cstdint>
#include <random>

namespace kyle {

// Independent logical noise sources used by the simulations. Each (master
// seed, stream, index) triple maps to its own engine, so adding paths or
// reordering execution never perturbs the draws of another stream.
enum class Stream : std::uint64_t {
    brownian = 1,       // order-flow driver W
    vol_diffusion = 2,  // volatility diffusion driver M
    vol_jumps = 3,      // regime-switch event clock
    value_draw = 4,     // liquidation value from the prior
    gaussian_vector = 5 // correlated Gaussian samples for oracles
};

std::uint64_t splitmix64(std::uint64_t x);

// Counter-based derivation of per-path sub-seeds from a master seed.
std::uint64_t sub_seed(std::uint64_t master, Stream stream, std::uint64_t index);

std::mt19937_64 make_engine(std::uint64_t master, Stream stream, std::uint64_t index);

} // namespace kyle
