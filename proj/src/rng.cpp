#include "dikin/rng.hpp"

#include <cmath>
#include <limits>

#include "dikin/error.hpp"

namespace dikin {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::ShapeMismatch: return "ShapeMismatch";
    case ErrorCode::ZeroRow: return "ZeroRow";
    case ErrorCode::EmptyInterior: return "EmptyInterior";
    case ErrorCode::NotInterior: return "NotInterior";
    case ErrorCode::DegenerateDirection: return "DegenerateDirection";
    case ErrorCode::UnboundedChord: return "UnboundedChord";
    case ErrorCode::NotPositiveDefinite: return "NotPositiveDefinite";
    case ErrorCode::NumericalUnderflow: return "NumericalUnderflow";
    case ErrorCode::Overflow: return "Overflow";
    case ErrorCode::InvalidStart: return "InvalidStart";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::RowNormExceeded: return "RowNormExceeded";
    case ErrorCode::DimensionTooLarge: return "DimensionTooLarge";
    case ErrorCode::TooFewSamples: return "TooFewSamples";
    case ErrorCode::EmptySamples: return "EmptySamples";
    case ErrorCode::Parse: return "Parse";
  }
  return "Unknown";
}

namespace {

std::mt19937_64 make_engine(std::uint64_t seed, std::uint64_t stream) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(stream),
                    static_cast<std::uint32_t>(stream >> 32)};
  return std::mt19937_64(seq);
}

}  // namespace

Rng::Rng(std::uint64_t seed, std::uint64_t stream)
    : seed_(seed), stream_(stream), engine_(make_engine(seed, stream)) {}

double Rng::uniform() {
  return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

double Rng::uniform_open() {
  // (k + 0.5) / 2^53 never hits 0 or 1.
  return (static_cast<double>(engine_() >> 11) + 0.5) * 0x1.0p-53;
}

double Rng::normal() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  double u, v, s;
  do {
    u = 2.0 * uniform() - 1.0;
    v = 2.0 * uniform() - 1.0;
    s = u * u + v * v;
  } while (s >= 1.0 || s == 0.0);
  const double factor = std::sqrt(-2.0 * std::log(s) / s);
  spare_ = v * factor;
  has_spare_ = true;
  return u * factor;
}

Eigen::VectorXd Rng::normal_vector(Eigen::Index d) {
  Eigen::VectorXd out(d);
  for (Eigen::Index i = 0; i < d; ++i) out[i] = normal();
  return out;
}

std::uint64_t Rng::below(std::uint64_t n) {
  if (n == 0) throw Error(ErrorCode::InvalidArgument, "Rng::below(0)");
  // Reject the top partial block so the modulo is unbiased.
  const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                              std::numeric_limits<std::uint64_t>::max() % n;
  std::uint64_t x;
  do {
    x = engine_();
  } while (x >= limit);
  return x % n;
}

}  // namespace dikin
