#pragma once

#include <cstdint>
#include <random>

namespace expfam::numerics {

/// Deterministic random stream identified by (seed, stream_id). Streams with
/// different ids are seeded independently; no global state is involved.
class RandomStream {
 public:
  RandomStream(std::uint64_t seed, std::uint64_t stream_id);

  /// Uniform on the open interval (0, 1).
  double uniform();
  double normal();
  double exponential(double rate);
  /// Gamma variate with the given shape and rate.
  double gamma(double shape, double rate);
  std::uint64_t poisson(double mean);

  std::mt19937_64& engine() { return engine_; }

 private:
  std::mt19937_64 engine_;
  std::normal_distribution<double> normal_{0.0, 1.0};
};

RandomStream rng_stream(std::uint64_t seed, std::uint64_t stream_id);

}  // namespace expfam::numerics
