#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <utility>

namespace kants {

/// Random source used by every stochastic step.
///
/// The engine is std::mt19937_64, whose output sequence is fixed by the
/// standard. The standard distributions are not, so the conversions to
/// doubles, bounded integers and shuffles are written out here: a given seed
/// produces the same run on every platform and standard library.
class Rng {
public:
    using result_type = std::uint64_t;

    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next() { return engine_(); }

    /// Uniform in [0, 1).
    double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    /// Uniform integer in [0, bound). Rejection sampling, no modulo bias.
    std::uint64_t below(std::uint64_t bound);

    template <typename T>
    void shuffle(std::span<T> items)
    {
        for (std::size_t i = items.size(); i > 1; --i) {
            const auto j = static_cast<std::size_t>(below(i));
            using std::swap;
            swap(items[i - 1], items[j]);
        }
    }

    // UniformRandomBitGenerator interface, for std algorithms that want one.
    static constexpr result_type min() { return std::mt19937_64::min(); }
    static constexpr result_type max() { return std::mt19937_64::max(); }
    result_type operator()() { return engine_(); }

private:
    std::mt19937_64 engine_;
};

/// SplitMix64 finalizer; a good 64-bit mixer for seed derivation.
constexpr std::uint64_t mix64(std::uint64_t x)
{
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

/// Seed of the independent stream `stream` under `master`.
///
/// Used to give every run of a sweep or of the repeated-runs protocol its own
/// reproducible generator, independent of scheduling order.
constexpr std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream)
{
    return mix64(mix64(master) ^ mix64(stream + 0x632be59bd9b4e019ULL));
}

} // namespace kants
