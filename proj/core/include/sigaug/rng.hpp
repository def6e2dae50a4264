#pragma once

#include <cstdint>
#include <random>
#include <vector>

namespace sigaug {

/// Mixes a seed with a tag into a new seed (splitmix64 finalizer applied
/// to the xor). Used to derive independent child streams deterministically.
std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t tag);
std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t tag1, std::uint64_t tag2);
std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t tag1, std::uint64_t tag2,
                       std::uint64_t tag3);

/// Deterministic random stream.
///
/// Wraps mt19937_64 and produces uniforms and normals through explicit
/// arithmetic (Box-Muller) so the stream depends only on the seed and this
/// code, never on standard-library distribution internals.
class Rng {
public:
    explicit Rng(std::uint64_t seed);

    /// Child stream derived from this stream's seed and a tag. Forking is a
    /// pure function of (seed, tag); it does not consume or disturb the
    /// parent state, so samples can be generated in parallel per fork.
    Rng fork(std::uint64_t tag) const;

    std::uint64_t next_u64();
    /// Uniform in [0, 1).
    double uniform();
    /// Standard normal; consumes exactly two uniforms per call.
    double normal();
    /// Uniform integer in [0, n), n >= 1.
    std::uint64_t below(std::uint64_t n);

    std::uint64_t seed() const { return seed_; }

private:
    std::uint64_t seed_;
    std::mt19937_64 gen_;
};

/// Fisher-Yates shuffle driven by the given stream.
template <typename T>
void shuffle(std::vector<T>& items, Rng& rng) {
    for (std::size_t i = items.size(); i > 1; --i) {
        std::size_t j = static_cast<std::size_t>(rng.below(i));
        std::swap(items[i - 1], items[j]);
    }
}

}  // namespace sigaug
