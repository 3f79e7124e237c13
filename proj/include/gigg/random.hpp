#pragma once

#include <cstdint>
#include <random>

namespace gigg {

// SplitMix64 finalizer; used to derive independent child seeds.
std::uint64_t mix_seed(std::uint64_t x);

// Seed for stream `index` derived from a master seed. Chains, replicates and
// any other parallel unit of work get their stream from this so results do
// not depend on how work is scheduled across threads.
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index);

// Random stream used throughout the library.
//
// The engine is mt19937_64, whose output sequence is fixed by the C++
// standard. The std:: distribution adaptors are implementation-defined, so
// uniforms, normals and gammas are generated here to keep draws
// bit-reproducible across standard libraries.
class Rng {
 public:
  explicit Rng(std::uint64_t seed = 1) : engine_(mix_seed(seed)) {}

  // Uniform on the open interval (0, 1).
  double uniform();
  // Standard normal (Marsaglia polar method).
  double normal();
  // Gamma with the given shape and unit rate (Marsaglia-Tsang). Returns the
  // log of the draw, which stays finite for shapes so small that the draw
  // itself underflows.
  double log_gamma_unit(double shape);
  double gamma_unit(double shape);

  std::uint64_t next_u64() { return engine_(); }

 private:
  std::mt19937_64 engine_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace gigg
