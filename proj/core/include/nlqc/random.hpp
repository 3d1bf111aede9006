#pragma once

#include <cstdint>
#include <random>

namespace nlqc {

// Seeded sample source. The engine is std::mt19937_64, whose output sequence
// is fixed by the standard; the conversions to uniform, normal and bounded
// integers are done here because the std distributions are
// implementation-defined.
class RandomSource {
 public:
  explicit RandomSource(std::uint64_t seed = 0) : seed_(seed), engine_(seed) {}

  std::uint64_t seed() const { return seed_; }
  std::uint64_t draws() const { return draws_; }

  std::uint64_t next_u64();
  // Uniform in [0, 1) with 53 random bits.
  double uniform();
  // Standard normal via Box-Muller; caches the second variate.
  double normal();
  // Uniform integer in [0, bound), bound > 0, by rejection.
  std::uint64_t uniform_int(std::uint64_t bound);

 private:
  std::uint64_t seed_;
  std::mt19937_64 engine_;
  std::uint64_t draws_ = 0;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace nlqc
