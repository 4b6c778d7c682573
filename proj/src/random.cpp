#include "kants/random.hpp"

#include <stdexcept>

namespace kants {

std::uint64_t Rng::below(std::uint64_t bound)
{
    if (bound == 0)
        throw std::invalid_argument("Rng::below: empty range");
    // Reject the low (2^64 mod bound) values so the rest divide evenly.
    const std::uint64_t threshold = (0 - bound) % bound;
    while (true) {
        const std::uint64_t r = engine_();
        if (r >= threshold)
            return r % bound;
    }
}

} // namespace kants
