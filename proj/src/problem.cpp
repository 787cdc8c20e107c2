#include "sgdm/problem.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "sgdm/errors.hpp"
#include "sgdm/format.hpp"

namespace sgdm {

bool Region::contains(ConstView x) const noexcept {
  if (!bounded()) return true;
  if (norm == Norm::l2) return dist(x, center) <= radius;
  for (std::size_t i = 0; i < x.size(); ++i)
    if (std::abs(x[i] - center[i]) > radius) return false;
  return true;
}

double Problem::value(ConstView x) const {
  if (x.size() != dim)
    throw DimensionMismatch(name + ": expected dimension " + std::to_string(dim) + ", got " +
                            std::to_string(x.size()));
  return objective->value(x);
}

double Problem::eval(ConstView x, MutView grad) const {
  if (x.size() != dim || grad.size() != dim)
    throw DimensionMismatch(name + ": expected dimension " + std::to_string(dim) + ", got " +
                            std::to_string(x.size()));
  return objective->value_and_gradient(x, grad);
}

namespace {

class Quadratic final : public Objective {
 public:
  explicit Quadratic(Vector spectrum) : s_(std::move(spectrum)) {}

  double value(ConstView x) const override {
    double f = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) f += s_[i] * x[i] * x[i];
    return 0.5 * f;
  }
  double value_and_gradient(ConstView x, MutView g) const override {
    double f = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
      g[i] = s_[i] * x[i];
      f += g[i] * x[i];
    }
    return 0.5 * f;
  }

 private:
  Vector s_;
};

class EvenPower final : public Objective {
 public:
  explicit EvenPower(double p) : p_(p) {}

  double value(ConstView x) const override { return std::pow(norm_sq(x), p_); }
  double value_and_gradient(ConstView x, MutView g) const override {
    const double r2 = norm_sq(x);
    if (r2 == 0.0) {
      std::fill(g.begin(), g.end(), 0.0);
      return 0.0;
    }
    const double inner = std::pow(r2, p_ - 1.0);
    const double c = 2.0 * p_ * inner;
    for (std::size_t i = 0; i < x.size(); ++i) g[i] = c * x[i];
    return inner * r2;
  }

 private:
  double p_;
};

class SinToy final : public Objective {
 public:
  double value(ConstView x) const override { return std::sin(x[0]); }
  double value_and_gradient(ConstView x, MutView g) const override {
    g[0] = std::cos(x[0]);
    g[1] = 0.0;
    return std::sin(x[0]);
  }
};

class Rosenbrock final : public Objective {
 public:
  Rosenbrock(double a, double b) : a_(a), b_(b) {}

  double value(ConstView x) const override {
    const double u = a_ - x[0];
    const double v = x[1] - x[0] * x[0];
    return u * u + b_ * v * v;
  }
  double value_and_gradient(ConstView x, MutView g) const override {
    const double u = a_ - x[0];
    const double v = x[1] - x[0] * x[0];
    g[0] = -2.0 * u - 4.0 * b_ * x[0] * v;
    g[1] = 2.0 * b_ * v;
    return u * u + b_ * v * v;
  }

 private:
  double a_, b_;
};

class ShiftedQuartic final : public Objective {
 public:
  explicit ShiftedQuartic(double a) : a_(a) {}

  double value(ConstView x) const override {
    const double u = x[0] - a_;
    const double u2 = u * u;
    return u2 * u2;
  }
  double value_and_gradient(ConstView x, MutView g) const override {
    const double u = x[0] - a_;
    const double u2 = u * u;
    g[0] = 4.0 * u2 * u;
    return u2 * u2;
  }

 private:
  double a_;
};

/// Tracks which parameters were consumed so leftovers are reported.
class ParamReader {
 public:
  ParamReader(const std::string& problem, const ProblemParams& p) : problem_(problem), p_(p) {}

  double get(const std::string& key, double fallback) {
    used_.push_back(key);
    auto it = p_.values.find(key);
    return it == p_.values.end() ? fallback : it->second;
  }
  bool has(const std::string& key) const { return p_.values.count(key) > 0; }

  void finish() const {
    for (const auto& [k, v] : p_.values)
      if (std::find(used_.begin(), used_.end(), k) == used_.end())
        throw InvalidArgument(problem_ + ": unknown parameter '" + k + "'");
  }

 private:
  std::string problem_;
  const ProblemParams& p_;
  std::vector<std::string> used_;
};

std::string echo(const std::map<std::string, double>& kv) {
  std::ostringstream os;
  bool first = true;
  for (const auto& [k, v] : kv) {
    if (!first) os << ',';
    os << k << '=' << shortest(v);
    first = false;
  }
  return os.str();
}

void require(bool ok, const std::string& msg) {
  if (!ok) throw InvalidArgument(msg);
}

Problem make_quadratic(std::size_t dim, const ProblemParams& params) {
  ParamReader rd("quadratic", params);
  Vector spectrum = params.spectrum;
  std::map<std::string, double> shown;
  if (spectrum.empty()) {
    const double mu = rd.get("mu", 1.0);
    const double lq = rd.get("lq", mu);
    require(mu > 0.0, "quadratic: mu must be positive");
    require(lq >= mu, "quadratic: lq must be >= mu");
    require(dim > 1 || lq == mu, "quadratic: d=1 admits a single eigenvalue (mu == lq)");
    spectrum.resize(dim);
    for (std::size_t i = 0; i < dim; ++i)
      spectrum[i] = dim == 1 ? mu
                             : mu + (lq - mu) * static_cast<double>(i) / static_cast<double>(dim - 1);
    shown = {{"mu", mu}, {"lq", lq}};
  } else {
    require(spectrum.size() == dim, "quadratic: spectrum length must equal dim");
    for (double s : spectrum) require(s > 0.0, "quadratic: eigenvalues must be positive");
  }
  rd.finish();
  const double mu = *std::min_element(spectrum.begin(), spectrum.end());
  const double lq = *std::max_element(spectrum.begin(), spectrum.end());
  Problem pb;
  pb.name = "quadratic";
  pb.dim = dim;
  pb.L = lq;
  pb.f_star = 0.0;
  pb.x_star = Vector(dim, 0.0);
  pb.loja = {0.5, std::sqrt(2.0 * mu), kUnbounded, Region{Vector(dim, 0.0)}};
  pb.lower_bound = 0.0;
  pb.smooth_region = Region{Vector(dim, 0.0)};
  if (shown.empty()) {
    std::ostringstream os;
    os << "spectrum=";
    for (std::size_t i = 0; i < dim; ++i) os << (i ? ";" : "") << shortest(spectrum[i]);
    pb.parameters = os.str();
  } else {
    pb.parameters = echo(shown);
  }
  pb.objective = std::make_shared<Quadratic>(std::move(spectrum));
  return pb;
}

Problem make_even_power(std::size_t dim, const ProblemParams& params) {
  ParamReader rd("even_power", params);
  const double p = rd.get("p", 2.0);
  const double radius = rd.get("radius", std::sqrt(static_cast<double>(dim)));
  rd.finish();
  require(p >= 1.0, "even_power: p must be >= 1");
  require(radius > 0.0, "even_power: radius must be positive");
  Problem pb;
  pb.name = "even_power";
  pb.dim = dim;
  // Largest Hessian eigenvalue of ||x||^{2p} is 2p(2p-1)||x||^{2p-2}.
  pb.L = 2.0 * p * (2.0 * p - 1.0) * std::pow(radius, 2.0 * p - 2.0);
  pb.f_star = 0.0;
  pb.x_star = Vector(dim, 0.0);
  pb.loja = {(2.0 * p - 1.0) / (2.0 * p), 2.0 * p, kUnbounded, Region{Vector(dim, 0.0)}};
  pb.lower_bound = 0.0;
  pb.smooth_region = p == 1.0 ? Region{Vector(dim, 0.0)} : Region{Vector(dim, 0.0), radius};
  pb.parameters = echo({{"p", p}, {"radius", radius}});
  pb.objective = std::make_shared<EvenPower>(p);
  return pb;
}

Problem make_sin_toy(std::size_t dim, const ProblemParams& params) {
  ParamReader rd("sin_toy", params);
  rd.finish();
  require(dim == 2, "sin_toy: dimension must be 2");
  Problem pb;
  pb.name = "sin_toy";
  pb.dim = 2;
  pb.L = 1.0;
  pb.f_star = -1.0;
  // Near x_1 = -pi/2: ||grad f||^2 = g (2 - g) >= g with g = f - f_star <= 1.
  pb.loja = {0.5, 1.0, 1.0, Region{Vector{-std::numbers::pi / 2.0, 0.0}, 1.0}};
  pb.lower_bound = -1.0;
  pb.smooth_region = Region{Vector(2, 0.0)};
  pb.objective = std::make_shared<SinToy>();
  return pb;
}

Problem make_rosenbrock(std::size_t dim, const ProblemParams& params) {
  ParamReader rd("rosenbrock", params);
  const double a = rd.get("a", 1.0);
  const double b = rd.get("b", 100.0);
  const double box = rd.get("box", 2.0);
  rd.finish();
  require(dim == 2, "rosenbrock: dimension must be 2");
  require(b > 0.0, "rosenbrock: b must be positive");
  require(box > 0.0, "rosenbrock: box must be positive");
  Problem pb;
  pb.name = "rosenbrock";
  pb.dim = 2;
  // Row-sum bound on the Hessian over the box.
  const double row1 = 2.0 + 8.0 * b * box + 12.0 * b * box * box;
  const double row2 = 4.0 * b * box + 2.0 * b;
  pb.L = std::max(row1, row2);
  pb.f_star = 0.0;
  pb.x_star = Vector{a, a * a};
  // Hessian at the minimizer has smallest eigenvalue mu_min; 2*mu_min bounds
  // ||grad f||^2 / f from below to second order. The constant is declared with
  // margin on a small ball.
  const double h11 = 2.0 + 8.0 * b * a * a;
  const double h12 = -4.0 * b * a;
  const double h22 = 2.0 * b;
  const double tr = h11 + h22;
  const double det = h11 * h22 - h12 * h12;
  const double mu_min = 0.5 * (tr - std::sqrt(tr * tr - 4.0 * det));
  pb.loja = {0.5, 0.75 * std::sqrt(2.0 * mu_min), kUnbounded, Region{Vector{a, a * a}, 0.01}};
  pb.lower_bound = 0.0;
  pb.smooth_region = Region{Vector(2, 0.0), box, Region::Norm::linf};
  pb.parameters = echo({{"a", a}, {"b", b}, {"box", box}});
  pb.objective = std::make_shared<Rosenbrock>(a, b);
  return pb;
}

Problem make_shifted_quartic(std::size_t dim, const ProblemParams& params) {
  ParamReader rd("shifted_quartic", params);
  const double a = rd.get("a", 1.0);
  const double radius = rd.get("radius", 1.0);
  rd.finish();
  require(dim == 1, "shifted_quartic: dimension must be 1");
  require(radius > 0.0, "shifted_quartic: radius must be positive");
  Problem pb;
  pb.name = "shifted_quartic";
  pb.dim = 1;
  pb.L = 12.0 * radius * radius;
  pb.f_star = 0.0;
  pb.x_star = Vector{a};
  pb.loja = {0.75, 4.0, kUnbounded, Region{Vector{a}}};
  pb.lower_bound = 0.0;
  pb.smooth_region = Region{Vector{a}, radius};
  pb.parameters = echo({{"a", a}, {"radius", radius}});
  pb.objective = std::make_shared<ShiftedQuartic>(a);
  return pb;
}

}  // namespace

Problem make_problem(const std::string& name, std::size_t dim, const ProblemParams& params) {
  if (dim == 0) throw InvalidArgument(name + ": dimension must be positive");
  if (name == "quadratic") return make_quadratic(dim, params);
  if (name == "even_power") return make_even_power(dim, params);
  if (name == "sin_toy") return make_sin_toy(dim, params);
  if (name == "rosenbrock") return make_rosenbrock(dim, params);
  if (name == "shifted_quartic") return make_shifted_quartic(dim, params);
  throw InvalidArgument("unknown problem '" + name + "'");
}

Evaluation problem_eval(const Problem& problem, ConstView x) {
  Evaluation ev;
  ev.grad.resize(problem.dim);
  ev.f = problem.eval(x, ev.grad);
  return ev;
}

double fd_gradient_check(const Problem& problem, ConstView x, double h) {
  if (!(h > 0.0)) throw InvalidArgument("fd_gradient_check: h must be positive");
  const auto ev = problem_eval(problem, x);
  Vector probe(x.begin(), x.end());
  double worst = 0.0;
  for (std::size_t i = 0; i < problem.dim; ++i) {
    const double xi = probe[i];
    probe[i] = xi + h;
    const double fp = problem.value(probe);
    probe[i] = xi - h;
    const double fm = problem.value(probe);
    probe[i] = xi;
    const double fd = (fp - fm) / (2.0 * h);
    worst = std::max(worst, std::abs(fd - ev.grad[i]) / std::max(std::abs(ev.grad[i]), 1.0));
  }
  return worst;
}

std::optional<double> loja_residual(const Problem& problem, ConstView x) {
  if (!problem.f_star || !problem.loja.region.contains(x)) return std::nullopt;
  const auto ev = problem_eval(problem, x);
  const double gap = std::abs(ev.f - *problem.f_star);
  if (!(gap > 0.0) || !(gap < problem.loja.eta)) return std::nullopt;
  return norm(ev.grad) - problem.loja.C_f * std::pow(gap, problem.loja.theta);
}

}  // namespace sgdm
