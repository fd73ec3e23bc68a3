#pragma once

#include <cstdint>
#include <random>

#include "logsp/grid.hpp"

namespace logsp {

/// Deterministic uniform doubles from the standard-specified mt19937_64
/// stream; no std distributions, so values are identical everywhere.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}

  double uniform() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  int uniform_int(int lo, int hi) {  // inclusive
    const int span = hi - lo + 1;
    const int k = std::min(span - 1, static_cast<int>(uniform() * span));
    return lo + k;
  }

 private:
  std::mt19937_64 gen_;
};

struct BumpFieldOptions {
  int min_bumps = 1, max_bumps = 3;
  double center_box = 3.0;  // centers drawn from [-c, c]^2
  double min_width = 0.5, max_width = 1.5;
  double min_amp = 0.2, max_amp = 1.0;
  bool allow_negative = false;
};

/// Smooth random field: a few Gaussian bumps with seeded parameters.
Field2D random_bump_field(const Grid2D& g, std::uint64_t seed,
                          const BumpFieldOptions& opts = {});

/// White-noise interior values in [-1,1]; for kernel/linear-algebra tests.
Field2D random_noise_field(const Grid2D& g, std::uint64_t seed);

}  // namespace logsp
