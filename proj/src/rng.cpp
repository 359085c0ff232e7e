#include "kyle/rng.hpp"

namespace kyle {

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

std::uint64_t sub_seed(std::uint64_t master, Stream stream, std::uint64_t index) {
    std::uint64_t s = splitmix64(master ^ (0xA0761D6478BD642FULL * static_cast<std::uint64_t>(stream)));
    return splitmix64(s ^ index);
}

std::mt19937_64 make_engine(std::uint64_t master, Stream stream, std::uint64_t index) {
    return std::mt19937_64(sub_seed(master, stream, index));
}

} // namespace kyle
