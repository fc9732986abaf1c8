#ifndef TRAINDESIGN_RNG_HPP
#define TRAINDESIGN_RNG_HPP

#include <cstdint>
#include <random>

#include "traindesign/types.hpp"

namespace traindesign {

// Purpose tags for independent random streams within one experiment.
enum class Stream : std::uint64_t {
  Channel = 1,
  TrainNoise = 2,
  Evolve = 3,
  DataBits = 4,
  DataNoise = 5,
  Weights = 6,
  Generic = 7,
};

// Stream keyed by (seed, trial, tag, subtag): the key tuple is hashed into
// the generator state, so streams are independent of evaluation order and
// of how trials are scheduled across threads.
class StreamRng {
 public:
  StreamRng(std::uint64_t seed, std::uint64_t trial, Stream tag,
            std::uint64_t subtag = 0) {
    std::uint64_t s = mix(seed + 0x9e3779b97f4a7c15ULL);
    s = mix(s ^ mix(trial + 0xbf58476d1ce4e5b9ULL));
    s = mix(s ^ mix(static_cast<std::uint64_t>(tag) + 0x94d049bb133111ebULL));
    s = mix(s ^ mix(subtag + 0x2545f4914f6cdd1dULL));
    std::seed_seq seq{static_cast<std::uint32_t>(s), static_cast<std::uint32_t>(s >> 32),
                      static_cast<std::uint32_t>(mix(s)), static_cast<std::uint32_t>(mix(s) >> 32)};
    gen_.seed(seq);
  }

  // Uniform on [0, 1).
  double uniform() {
    return static_cast<double>(gen_() >> 11) * 0x1.0p-53;
  }

  // Standard circular complex Gaussian, E|z|^2 = 1 (N(0,1/2) per part).
  cplx gauss_c() {
    const double u1 = 1.0 - uniform();  // (0, 1]
    const double u2 = uniform();
    const double r = std::sqrt(-std::log(u1));
    return {r * std::cos(2.0 * M_PI * u2), r * std::sin(2.0 * M_PI * u2)};
  }

  // Real standard Gaussian.
  double gauss() {
    const double u1 = 1.0 - uniform();
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
  }

  CMatrix gauss_matrix(Eigen::Index rows, Eigen::Index cols) {
    CMatrix M(rows, cols);
    for (Eigen::Index j = 0; j < cols; ++j)
      for (Eigen::Index i = 0; i < rows; ++i) M(i, j) = gauss_c();
    return M;
  }

  std::uint64_t raw() { return gen_(); }

 private:
  static std::uint64_t mix(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  std::mt19937_64 gen_;
};

}  // namespace traindesign

#endif
