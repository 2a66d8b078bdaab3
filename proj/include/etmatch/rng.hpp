#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>
#include <utility>

namespace etmatch {

/// Derives an independent 64-bit seed for a named stream ("balance",
/// "tree:17", ...) from a master seed. Stream seeds do not depend on the
/// order in which streams are requested.
[[nodiscard]] std::uint64_t stream_seed(std::uint64_t master, std::string_view stream);

/// Small deterministic generator (xoshiro256**). Every draw is specified
/// here rather than through <random> distributions, whose output is
/// implementation-defined.
class Rng {
 public:
  explicit Rng(std::uint64_t seed);
  Rng(std::uint64_t master, std::string_view stream) : Rng(stream_seed(master, stream)) {}

  std::uint64_t next();
  /// Uniform integer in [0, bound); bound must be > 0.
  std::size_t below(std::size_t bound);
  /// Uniform double in [0, 1).
  double uniform();

  template <typename T>
  void shuffle(std::span<T> items) {
    for (std::size_t i = items.size(); i > 1; --i) {
      std::size_t j = below(i);
      using std::swap;
      swap(items[i - 1], items[j]);
    }
  }

 private:
  std::uint64_t state_[4];
};

}  // namespace etmatch
