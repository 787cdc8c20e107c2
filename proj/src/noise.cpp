#include "sgdm/noise.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

#include "sgdm/errors.hpp"
#include "sgdm/format.hpp"

namespace sgdm {

namespace {

std::uint64_t mix64(std::uint64_t z) noexcept {
  z = (z ^ (z >> 33)) * 0xFF51AFD7ED558CCDULL;
  z = (z ^ (z >> 33)) * 0xC4CEB9FE1A85EC53ULL;
  return z ^ (z >> 33);
}

}  // namespace

SplitMix64 NoiseStream::engine_at(std::size_t k) const noexcept {
  return SplitMix64(mix64(seed_ ^ mix64(static_cast<std::uint64_t>(k) + 0x632BE59BD9B4E019ULL)));
}

NoiseModel NoiseModel::gaussian(double sigma_c) {
  if (!(sigma_c >= 0.0) || !std::isfinite(sigma_c))
    throw InvalidArgument("gaussian noise: sigma must be non-negative");
  return NoiseModel(GaussianNoise{sigma_c});
}

NoiseModel NoiseModel::sphere(double sigma) {
  if (!(sigma >= 0.0) || !std::isfinite(sigma))
    throw InvalidArgument("sphere noise: sigma must be non-negative");
  return NoiseModel(SphereNoise{sigma});
}

double NoiseModel::sigma_sq(std::size_t dim) const noexcept {
  if (const auto* g = std::get_if<GaussianNoise>(&v_))
    return static_cast<double>(dim) * g->sigma_c * g->sigma_c;
  if (std::holds_alternative<AxisRademacherNoise>(v_)) return 1.0;
  if (const auto* s = std::get_if<SphereNoise>(&v_)) return s->sigma * s->sigma;
  return 0.0;
}

std::string NoiseModel::describe() const {
  std::ostringstream os;
  if (const auto* g = std::get_if<GaussianNoise>(&v_))
    os << "gaussian(" << shortest(g->sigma_c) << ")";
  else if (const auto* a = std::get_if<AxisRademacherNoise>(&v_))
    os << "axis_rademacher(" << a->axis << ")";
  else if (const auto* s = std::get_if<SphereNoise>(&v_))
    os << "sphere(" << shortest(s->sigma) << ")";
  else
    os << "none";
  return os.str();
}

void sample_noise(const NoiseModel& model, const NoiseStream& stream, std::size_t k, MutView out) {
  const auto& v = model.variant();
  if (std::holds_alternative<NoNoise>(v)) {
    std::fill(out.begin(), out.end(), 0.0);
    return;
  }
  if (out.empty()) throw DimensionMismatch("noise: dimension must be positive");
  auto eng = stream.engine_at(k);
  if (const auto* g = std::get_if<GaussianNoise>(&v)) {
    std::normal_distribution<double> normal(0.0, 1.0);
    for (double& x : out) x = g->sigma_c * normal(eng);
  } else if (const auto* a = std::get_if<AxisRademacherNoise>(&v)) {
    if (a->axis >= out.size())
      throw DimensionMismatch("axis_rademacher: axis " + std::to_string(a->axis) +
                              " outside dimension " + std::to_string(out.size()));
    std::fill(out.begin(), out.end(), 0.0);
    out[a->axis] = (eng() >> 63) ? 1.0 : -1.0;
  } else if (const auto* s = std::get_if<SphereNoise>(&v)) {
    std::normal_distribution<double> normal(0.0, 1.0);
    double n2 = 0.0;
    do {
      n2 = 0.0;
      for (double& x : out) {
        x = normal(eng);
        n2 += x * x;
      }
    } while (n2 == 0.0);
    const double scale = s->sigma / std::sqrt(n2);
    for (double& x : out) x *= scale;
  }
}

Vector sample_noise(const NoiseModel& model, const NoiseStream& stream, std::size_t k,
                    std::size_t dim) {
  Vector e(dim);
  sample_noise(model, stream, k, e);
  return e;
}

}  // namespace sgdm
