#include "logsp/random_fields.hpp"

#include <cmath>
#include <vector>

namespace logsp {

Field2D random_bump_field(const Grid2D& g, std::uint64_t seed,
                          const BumpFieldOptions& opts) {
  Rng rng(seed);
  const int k = rng.uniform_int(opts.min_bumps, opts.max_bumps);
  struct Bump {
    double cx, cy, w, a;
  };
  std::vector<Bump> bumps;
  bumps.reserve(k);
  for (int i = 0; i < k; ++i) {
    Bump b;
    b.cx = rng.uniform(-opts.center_box, opts.center_box);
    b.cy = rng.uniform(-opts.center_box, opts.center_box);
    b.w = rng.uniform(opts.min_width, opts.max_width);
    b.a = rng.uniform(opts.min_amp, opts.max_amp);
    if (opts.allow_negative && rng.uniform() < 0.5) b.a = -b.a;
    bumps.push_back(b);
  }
  return Field2D::from_function(g, [&](double x, double y) {
    double s = 0.0;
    for (const Bump& b : bumps) {
      const double dx = x - b.cx, dy = y - b.cy;
      s += b.a * std::exp(-(dx * dx + dy * dy) / (2.0 * b.w * b.w));
    }
    return s;
  });
}

Field2D random_noise_field(const Grid2D& g, std::uint64_t seed) {
  Rng rng(seed);
  Field2D f(g);
  for (int i = 1; i + 1 < g.n; ++i)
    for (int j = 1; j + 1 < g.n; ++j) f.at(i, j) = rng.uniform(-1.0, 1.0);
  return f;
}

}  // namespace logsp
