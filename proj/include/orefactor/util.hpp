#ifndef OREFACTOR_UTIL_HPP
#define OREFACTOR_UTIL_HPP

#include <cstdint>
#include <stdexcept>
#include <string>

namespace orefactor {

// Working precision in bits. Threaded explicitly through every numeric
// operation; there is no global precision state.
using Prec = long;

// Raised when an optimistic computation cannot certify a decision at the
// current precision (e.g. division by a ball containing zero). Callers of
// the factoring driver catch it and restart at doubled precision.
struct Failure : std::runtime_error {
    explicit Failure(const std::string& what) : std::runtime_error(what) {}
};

// Counter-based splittable PRNG (SplitMix64 core). All randomness in the
// library (exponent draws, accessory parameters, random monodromy
// combinations) flows from one of these, keyed by a user seed, so runs are
// reproducible.
class Rng {
  public:
    explicit Rng(std::uint64_t seed) : state_(seed * 0x9e3779b97f4a7c15ULL + 0x2545f4914f6cdd1dULL) {}

    std::uint64_t next() {
        std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    // Uniform in [lo, hi] inclusive.
    long uniform(long lo, long hi) {
        if (hi <= lo) return lo;
        std::uint64_t span = static_cast<std::uint64_t>(hi - lo) + 1;
        return lo + static_cast<long>(next() % span);
    }

    // Independent stream derived from this one; advancing either does not
    // affect the other.
    Rng split() { return Rng(next() ^ 0x85ebca6b0fb2c1a3ULL); }

  private:
    std::uint64_t state_;
};

} // namespace orefactor

#endif
