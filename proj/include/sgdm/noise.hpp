#pragma once

#include <cstddef>
#include <cstdint>
#include <limits>
#include <string>
#include <variant>

#include "sgdm/vector_ops.hpp"

namespace sgdm {

/// SplitMix64 engine; satisfies UniformRandomBitGenerator.
class SplitMix64 {
 public:
  using result_type = std::uint64_t;

  explicit SplitMix64(std::uint64_t state) noexcept : state_(state) {}

  static constexpr result_type min() noexcept { return 0; }
  static constexpr result_type max() noexcept { return std::numeric_limits<result_type>::max(); }

  result_type operator()() noexcept {
    std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

 private:
  std::uint64_t state_;
};

/// Counter-addressed randomness: the engine for step k is a pure function of
/// (seed, k), so any step's draw can be replayed without the preceding ones.
class NoiseStream {
 public:
  explicit NoiseStream(std::uint64_t seed) noexcept : seed_(seed) {}

  std::uint64_t seed() const noexcept { return seed_; }
  SplitMix64 engine_at(std::size_t k) const noexcept;

 private:
  std::uint64_t seed_;
};

struct NoNoise {};

/// Independent N(0, sigma_c^2) per coordinate.
struct GaussianNoise {
  double sigma_c = 0.0;
};

/// +e_axis or -e_axis with probability 1/2 each.
struct AxisRademacherNoise {
  std::size_t axis = 0;
};

/// Uniform on the sphere of radius sigma.
struct SphereNoise {
  double sigma = 0.0;
};

class NoiseModel {
 public:
  using Variant = std::variant<NoNoise, GaussianNoise, AxisRademacherNoise, SphereNoise>;

  NoiseModel() = default;
  static NoiseModel none() { return NoiseModel(NoNoise{}); }
  static NoiseModel gaussian(double sigma_c);
  static NoiseModel axis_rademacher(std::size_t axis) { return NoiseModel(AxisRademacherNoise{axis}); }
  static NoiseModel sphere(double sigma);

  const Variant& variant() const noexcept { return v_; }
  bool is_none() const noexcept { return std::holds_alternative<NoNoise>(v_); }

  /// E||e||^2 for dimension d.
  double sigma_sq(std::size_t dim) const noexcept;

  std::string describe() const;

 private:
  explicit NoiseModel(Variant v) : v_(v) {}
  Variant v_{NoNoise{}};
};

/// Writes e^k into out. Throws DimensionMismatch when the model cannot live in out.size().
void sample_noise(const NoiseModel& model, const NoiseStream& stream, std::size_t k, MutView out);

Vector sample_noise(const NoiseModel& model, const NoiseStream& stream, std::size_t k,
                    std::size_t dim);

}  // namespace sgdm
