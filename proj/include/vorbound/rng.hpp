#ifndef VORBOUND_RNG_HPP
#define VORBOUND_RNG_HPP

#include <cmath>
#include <cstdint>

namespace vorbound::rng {

inline constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ull;

inline std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

// Counter-based splittable stream: the draws for sample `index` depend only
// on (seed, index), never on which worker produced them.
class Stream {
 public:
  Stream(std::uint64_t seed, std::uint64_t index)
      : state_(mix64(seed + kGolden) ^ mix64(index * kGolden + 0x2545F4914F6CDD1Dull)) {}

  std::uint64_t next_u64() {
    state_ += kGolden;
    return mix64(state_);
  }

  // Uniform on (0, 1]; never 0, so logs are safe.
  double next_unit() {
    return (static_cast<double>(next_u64() >> 11) + 1.0) * 0x1.0p-53;
  }

  // Uniform on [0, 1).
  double next_unit_co() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  // Standard normal pair via Box-Muller; deterministic two-draw consumption.
  void next_gaussian_pair(double& g1, double& g2) {
    double u1 = next_unit();
    double u2 = next_unit();
    double r = std::sqrt(-2.0 * std::log(u1));
    double th = 6.283185307179586476925286766559 * u2;
    g1 = r * std::cos(th);
    g2 = r * std::sin(th);
  }

  double next_gaussian() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    double a, b;
    next_gaussian_pair(a, b);
    spare_ = b;
    have_spare_ = true;
    return a;
  }

 private:
  std::uint64_t state_;
  double spare_ = 0.0;
  bool have_spare_ = false;
};

}  // namespace vorbound::rng

#endif
