#include "sfmreg/rng.hpp"

#include <cmath>
#include <numbers>

namespace sfmreg {

double Rng::normal() {
  // Box-Muller; consumes exactly two engine draws per call so streams stay
  // aligned across implementations.
  double u1 = uniform01();
  const double u2 = uniform01();
  if (u1 <= 0.0) u1 = 0x1.0p-53;
  return std::sqrt(-2.0 * std::log(u1)) *
         std::cos(2.0 * std::numbers::pi * u2);
}

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

}  // namespace

std::uint64_t derive_seed(std::uint64_t master, std::uint64_t a,
                          std::uint64_t b) {
  return splitmix64(splitmix64(splitmix64(master) ^ a) ^ b);
}

}  // namespace sfmreg
