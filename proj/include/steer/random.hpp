#pragma once

#include <cstdint>
#include <random>

namespace steer {

/// Seeded, splittable random stream.
///
/// Every randomized routine takes a stream explicitly. `split(i)` derives an
/// independent child whose state depends only on the parent seed and `i`, so
/// sharded Monte-Carlo runs are reproducible whatever the thread count.
class RandomStream {
 public:
  explicit RandomStream(std::uint64_t seed);

  RandomStream split(std::uint64_t index) const;

  std::uint64_t seed() const { return seed_; }

  /// Uniform on [0, 1).
  double uniform();
  double normal();

  std::mt19937_64& engine() { return engine_; }

 private:
  std::uint64_t seed_;
  std::mt19937_64 engine_;
  std::normal_distribution<double> normal_{0.0, 1.0};
  std::uniform_real_distribution<double> uniform_{0.0, 1.0};
};

std::uint64_t splitmix64(std::uint64_t x);

}  // namespace steer
