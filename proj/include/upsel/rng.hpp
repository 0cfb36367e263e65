#pragma once

#include <cstdint>
#include <random>

namespace upsel {

// Replication streams are derived from (master seed, replication index, role),
// so results do not depend on thread count or on how reps are batched.
enum class StreamRole : std::uint64_t {
  omega = 0,   // matrix generation
  beta = 1,    // signal vector
  design = 2,  // design matrix
  noise = 3,   // observation noise
  aux = 4      // paired auxiliary draws (e.g. Stein noise next to a design run)
};

class RngStream {
 public:
  RngStream(std::uint64_t master, std::uint64_t rep, StreamRole role)
      : gen_(mix(master + 0x9e3779b97f4a7c15ULL * (rep + 1) +
                 0xbf58476d1ce4e5b9ULL * (static_cast<std::uint64_t>(role) + 1))) {}

  std::uint64_t next_u64() { return gen_(); }

  // U[0,1)
  double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  double uniform(double a, double b) { return a + (b - a) * uniform(); }

  // N(0,1) by Box-Muller. std::normal_distribution is implementation-defined,
  // which would make fixtures compiler-dependent.
  double normal() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    double u1 = static_cast<double>((next_u64() >> 11) + 1) * 0x1.0p-53;  // (0,1]
    double u2 = uniform();
    double m = std::sqrt(-2.0 * std::log(u1));
    constexpr double two_pi = 6.283185307179586476925286766559;
    spare_ = m * std::sin(two_pi * u2);
    have_spare_ = true;
    return m * std::cos(two_pi * u2);
  }

  bool bernoulli(double prob) { return uniform() < prob; }

  // uniform integer in [0, n)
  std::uint64_t below(std::uint64_t n) {
    // rejection sampling to avoid modulo bias
    std::uint64_t limit = n * ((~0ULL) / n);
    std::uint64_t x;
    do {
      x = next_u64();
    } while (x >= limit);
    return x % n;
  }

 private:
  static std::uint64_t mix(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  std::mt19937_64 gen_;
  bool have_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace upsel
