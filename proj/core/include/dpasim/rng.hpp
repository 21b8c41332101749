#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace dpasim {

// Seeded generator behind every stochastic draw. mt19937_64's output sequence
// is pinned by the C++ standard, so identical seeds give identical runs across
// processes and platforms. Doubles take the top 53 bits, uniform in [0, 1).
// The contract string is versioned into run metadata; changing the mapping or
// the draw order is a contract break.
class Rng {
  public:
    static constexpr std::string_view kContract = "mt19937_64/u53-v1";

    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    double next_unit() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    bool bernoulli(double p) { return next_unit() < p; }

    // Integer in [0, n), by rejection-free modulo of the 53-bit draw; fine for
    // the small n used in tests and view sampling.
    int below(int n) { return static_cast<int>(engine_() % static_cast<std::uint64_t>(n)); }

  private:
    std::mt19937_64 engine_;
};

}  // namespace dpasim
