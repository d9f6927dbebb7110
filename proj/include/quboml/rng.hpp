#ifndef QUBOML_RNG_HPP
#define QUBOML_RNG_HPP

#include <cstdint>
#include <random>
#include <string_view>

namespace quboml {

// SplitMix64 finalizer. Used to derive independent stream seeds from a
// master seed so that parallel and serial schedules produce identical
// results.
inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

// Derive a child seed from (seed, stream index).
inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index) {
    return splitmix64(seed ^ splitmix64(index));
}

// Derive a child seed namespaced by a module tag (FNV-1a of the tag mixed
// with the item index). All randomness in the toolkit flows from one
// master seed through this function.
inline std::uint64_t derive_seed(std::uint64_t seed, std::string_view tag,
                                 std::uint64_t index) {
    std::uint64_t h = 0xCBF29CE484222325ULL;
    for (char c : tag) {
        h ^= static_cast<unsigned char>(c);
        h *= 0x100000001B3ULL;
    }
    return splitmix64(seed ^ splitmix64(h) ^ splitmix64(index * 0x9E3779B97F4A7C15ULL + 1));
}

// Uniform double in [0,1) from a 64-bit generator, bit-stable across
// platforms (std::uniform_real_distribution is not).
inline double uniform01(std::mt19937_64& g) {
    return static_cast<double>(g() >> 11) * 0x1.0p-53;
}

// Fisher-Yates shuffle using uniform integers from the generator directly.
template <typename T>
void seeded_shuffle(std::vector<T>& v, std::mt19937_64& g) {
    for (std::size_t i = v.size(); i > 1; --i) {
        std::size_t j = static_cast<std::size_t>(g() % i);
        std::swap(v[i - 1], v[j]);
    }
}

}  // namespace quboml

#endif
