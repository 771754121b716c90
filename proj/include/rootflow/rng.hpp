#pragma once

#include <cstdint>
#include <random>

namespace rootflow {

// Deterministic uniform generator. mt19937_64 output is fixed by the standard;
// the double extraction below avoids std::uniform_real_distribution, whose
// results differ between standard libraries.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : eng_(seed) {}

    // uniform in [0, 1)
    double uniform01() { return static_cast<double>(eng_() >> 11) * 0x1.0p-53; }

    // uniform in [a, b)
    double uniform(double a, double b) { return a + (b - a) * uniform01(); }

    std::uint64_t next_u64() { return eng_(); }

    // uniform integer in [0, n); n == 0 yields 0
    std::uint64_t below(std::uint64_t n) { return n == 0 ? 0 : eng_() % n; }

private:
    std::mt19937_64 eng_;
};

} // namespace rootflow
