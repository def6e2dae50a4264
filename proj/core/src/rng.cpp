#include "sigaug/rng.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace sigaug {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

}  // namespace

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t tag) {
    return splitmix64(splitmix64(seed) ^ tag);
}

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t tag1, std::uint64_t tag2) {
    return mix_seed(mix_seed(seed, tag1), tag2);
}

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t tag1, std::uint64_t tag2,
                       std::uint64_t tag3) {
    return mix_seed(mix_seed(seed, tag1, tag2), tag3);
}

Rng::Rng(std::uint64_t seed) : seed_(seed), gen_(splitmix64(seed)) {}

Rng Rng::fork(std::uint64_t tag) const { return Rng(mix_seed(seed_, tag)); }

std::uint64_t Rng::next_u64() { return gen_(); }

double Rng::uniform() {
    // 53 random bits -> [0, 1)
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double Rng::normal() {
    double u1 = 1.0 - uniform();  // (0, 1], keeps log finite
    double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

std::uint64_t Rng::below(std::uint64_t n) {
    if (n == 0) throw std::invalid_argument("Rng::below requires n >= 1");
    return next_u64() % n;
}

}  // namespace sigaug
