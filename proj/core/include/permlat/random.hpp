#pragma once

#include <cstddef>
#include <cstdint>
#include <random>

namespace permlat {

// The single source of randomness for generation and encoding. mt19937_64's
// output sequence is fixed by the standard; bounded draws use rejection
// sampling instead of std::uniform_int_distribution so results are identical
// across standard library implementations.
class SeededStream {
 public:
  explicit SeededStream(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }

  // Uniform in [0, n). n must be positive.
  std::size_t below(std::size_t n) {
    const std::uint64_t bound = static_cast<std::uint64_t>(n);
    const std::uint64_t limit = UINT64_MAX - (UINT64_MAX % bound);
    std::uint64_t draw = engine_();
    while (draw >= limit) draw = engine_();
    return static_cast<std::size_t>(draw % bound);
  }

 private:
  std::mt19937_64 engine_;
};

}  // namespace permlat
