#pragma once

#include <cstdint>
#include <random>

#include <Eigen/Core>

namespace dikin {

/// Seedable random stream used by every sampler in the library.
///
/// The engine is std::mt19937_64, whose output sequence is fixed by the C++
/// standard. Uniform and normal variates are derived from raw engine words by
/// code in this library (not by std::*_distribution, whose algorithms differ
/// between standard library vendors), so a (seed, stream) pair reproduces the
/// same bits on every conforming platform.
///
/// Stream splitting: stream k of seed s is the engine seeded through
/// std::seed_seq{lo32(s), hi32(s), lo32(k), hi32(k)}. Parallel chains use
/// distinct k with a shared s. Changing any of this is a breaking change and
/// must bump kVersion.
class Rng {
 public:
  static constexpr const char* kName = "mt19937_64+polar";
  static constexpr int kVersion = 1;

  explicit Rng(std::uint64_t seed, std::uint64_t stream = 0);

  std::uint64_t seed() const noexcept { return seed_; }
  std::uint64_t stream() const noexcept { return stream_; }

  /// Derived stream of the same seed.
  Rng split(std::uint64_t stream) const { return Rng(seed_, stream); }

  std::uint64_t next_u64() { return engine_(); }

  /// Uniform on [0, 1) with 53 random bits.
  double uniform();

  /// Uniform on the open interval (0, 1).
  double uniform_open();

  /// Standard normal variate (Marsaglia polar method).
  double normal();

  Eigen::VectorXd normal_vector(Eigen::Index d);

  /// Index in [0, n).
  std::uint64_t below(std::uint64_t n);

 private:
  std::uint64_t seed_;
  std::uint64_t stream_;
  std::mt19937_64 engine_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace dikin
