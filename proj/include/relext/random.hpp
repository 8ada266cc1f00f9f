#pragma once

// Seeded random draws. The engine is std::mt19937_64; uniforms take the top
// 53 bits of one draw and normals use Box-Muller, so streams are identical on
// every platform.

#include <cstdint>
#include <random>

#include "relext/types.hpp"

namespace relext {

std::uint64_t splitmix64(std::uint64_t x);

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  double uniform();                  // [0, 1)
  double uniform(double lo, double hi);
  Index integer(Index lo, Index hi);  // inclusive
  double normal();
  Complex complex_normal();           // E|z|^2 = 1
  bool coin(double p = 0.5) { return uniform() < p; }

  Matrix gaussian(Index rows, Index cols);
  Matrix unitary(Index n);
  Matrix hermitian(Index n);
  // U diag(s) U^* with U an n x rank frame and s in [0.2, 2].
  Matrix psd(Index n, Index rank);
  // n x k orthonormal columns.
  Matrix frame(Index n, Index k);

 private:
  std::mt19937_64 engine_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace relext
