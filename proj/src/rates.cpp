#include "sgdm/rates.hpp"

#include <algorithm>
#include <cmath>

#include "sgdm/errors.hpp"

namespace sgdm {

double Exponent::value() const {
  if (unbounded_) throw InvalidArgument("Exponent: value of an unbounded exponent");
  return value_;
}

Exponent over_two_theta_minus_one(double c, double theta) {
  const double den = 2.0 * theta - 1.0;
  if (den == 0.0) return Exponent::unbounded();
  return Exponent::finite(c / den);
}

namespace {

void require_theta(double theta) {
  if (!(theta >= 0.5 && theta < 1.0)) throw InvalidArgument("theta must lie in [1/2, 1)");
}

}  // namespace

PsiPhi rate_psi_phi(double theta, double r) {
  require_theta(theta);
  if (!(r > 0.5) || !std::isfinite(r)) throw InvalidArgument("r must exceed 1/2");
  PsiPhi out;
  out.psi = min(Exponent::finite(2.0 * r), over_two_theta_minus_one(1.0, theta)).value();
  out.phi = min(Exponent::finite(r - 0.5), over_two_theta_minus_one(1.0 - theta, theta)).value();
  return out;
}

PhiPsi rate_Phi_Psi(double gamma, double theta) {
  require_theta(theta);
  if (!(gamma > 2.0 / 3.0 && gamma < 1.0)) throw InvalidArgument("gamma must lie in (2/3, 1)");
  PhiPsi out;
  const Exponent psi_tail = over_two_theta_minus_one(1.0 - gamma, theta);
  out.Psi = min(Exponent::finite(2.0 * gamma - 1.0), psi_tail).value();
  out.Phi = min(Exponent::finite(1.5 * gamma - 1.0),
                over_two_theta_minus_one((1.0 - gamma) * (1.0 - theta), theta))
                .value();
  out.theta_c = gamma / (4.0 * gamma - 2.0);
  out.Psi_on_step_branch = psi_tail.is_unbounded() || 2.0 * gamma - 1.0 <= psi_tail.value();
  return out;
}

OptimalGamma optimal_gamma(double theta) {
  require_theta(theta);
  OptimalGamma o;
  o.gamma_star = 2.0 * theta / (4.0 * theta - 1.0);
  o.Psi_at_star = 1.0 / (4.0 * theta - 1.0);
  o.Phi_at_star = (1.0 - theta) / (4.0 * theta - 1.0);
  o.tadic_gamma = (4.0 * theta - 1.0) / (6.0 * theta - 2.0);
  o.tadic_rate = 1.0 / (6.0 * theta - 2.0);
  o.tadic_iterate_rate = (1.0 - theta) / (6.0 * theta - 2.0);
  if (o.Psi_at_star < o.tadic_rate) throw Error("optimal_gamma: comparison rate dominates");
  return o;
}

double tadic_iterate_exponent(double gamma, double theta) {
  require_theta(theta);
  if (!(gamma > 0.75 && gamma < 1.0)) throw InvalidArgument("gamma must lie in (3/4, 1)");
  return min(Exponent::finite(2.0 * gamma - 1.5),
             over_two_theta_minus_one((1.0 - theta) * (1.0 - gamma), theta))
      .value();
}

LogRateCase log_rate_case(double alpha, double C) {
  if (!(C > 0.0)) throw InvalidArgument("log_rate_case: C must be positive");
  LogRateCase out;
  out.threshold = 200.0 / (C * C);
  out.accepted = alpha > out.threshold;
  return out;
}

RatePrediction predict_rates(double gamma, double theta) {
  require_theta(theta);
  if (!(gamma > 2.0 / 3.0 && gamma <= 1.0)) throw InvalidArgument("gamma must lie in (2/3, 1]");
  RatePrediction p;
  p.theta = theta;
  p.gamma = gamma;
  if (gamma < 1.0) {
    const auto r = rate_Phi_Psi(gamma, theta);
    p.value_exponent = r.Psi;
    p.iterate_exponent = r.Phi;
  } else if (theta == 0.5) {
    p.kind = RateRegimeKind::log_corrected;
    p.value_exponent = 1.0;
    p.iterate_exponent = 0.5;
    p.log_factor = true;
  } else {
    // Delta_k grows like log k, so the Delta-rates give no polynomial decay in k.
    p.kind = RateRegimeKind::logarithmic_only;
  }
  return p;
}

double median(std::vector<double> v) {
  if (v.empty()) return std::nan("");
  const std::size_t mid = v.size() / 2;
  std::nth_element(v.begin(), v.begin() + static_cast<long>(mid), v.end());
  const double hi = v[mid];
  if (v.size() % 2 == 1) return hi;
  const double lo = *std::max_element(v.begin(), v.begin() + static_cast<long>(mid));
  return 0.5 * (lo + hi);
}

namespace {

constexpr double kFloor = 1e-14;

EmpiricalRate fit_tail(const std::vector<double>& ks, const std::vector<double>& values,
                       double k_lo) {
  if (ks.size() != values.size()) throw InvalidArgument("estimate_exponent: size mismatch");
  EmpiricalRate er;
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  std::size_t n = 0;
  std::vector<std::pair<double, double>> pts;
  for (std::size_t i = 0; i < ks.size(); ++i) {
    if (ks[i] < k_lo) continue;
    if (!(values[i] >= 0.0)) throw InvalidArgument("estimate_exponent: values must be positive");
    if (i > 0 && !(ks[i] > ks[i - 1])) throw InvalidArgument("estimate_exponent: ks must increase");
    double v = values[i];
    if (v < kFloor) {
      v = kFloor;
      ++er.clipped;
    }
    const double x = std::log(ks[i]);
    const double y = std::log(v);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    pts.emplace_back(x, y);
    if (n == 0) er.k_lo = static_cast<std::size_t>(ks[i]);
    er.k_hi = static_cast<std::size_t>(ks[i]);
    ++n;
  }
  if (n < 10) throw InvalidArgument("estimate_exponent: fewer than 10 points in the fit window");
  const double nn = static_cast<double>(n);
  const double mx = sx / nn, my = sy / nn;
  // Centered sums for accuracy.
  double cxx = 0, cxy = 0;
  for (const auto& [x, y] : pts) {
    cxx += (x - mx) * (x - mx);
    cxy += (x - mx) * (y - my);
  }
  (void)sxx;
  (void)sxy;
  if (cxx == 0.0) throw InvalidArgument("estimate_exponent: degenerate k range");
  const double slope = cxy / cxx;
  const double icpt = my - slope * mx;
  double rss = 0;
  for (const auto& [x, y] : pts) {
    const double r = y - (icpt + slope * x);
    rss += r * r;
  }
  er.exponent = -slope;
  er.points = n;
  er.residual_rms = std::sqrt(rss / nn);
  return er;
}

}  // namespace

EmpiricalRate estimate_exponent(const std::vector<double>& ks, const std::vector<double>& values,
                                double tail_fraction) {
  if (!(tail_fraction > 0.0 && tail_fraction <= 1.0))
    throw InvalidArgument("estimate_exponent: tail_fraction must lie in (0, 1]");
  if (ks.empty()) throw InvalidArgument("estimate_exponent: fewer than 10 points in the fit window");
  if (!(ks.front() > 0.0)) throw InvalidArgument("estimate_exponent: ks must be positive");
  const double lo = std::log(ks.front()), hi = std::log(ks.back());
  const double cut = hi - tail_fraction * (hi - lo);
  // Guard the boundary point against rounding in exp(log(k)).
  return fit_tail(ks, values, std::exp(cut) * (1.0 - 1e-12));
}

EmpiricalRate estimate_exponent_from(const std::vector<double>& ks,
                                     const std::vector<double>& values, double k_lo) {
  return fit_tail(ks, values, k_lo);
}

ChungResult chung_bound_check(const ChungParams& c, std::size_t horizon, double tolerance) {
  if (!(c.q > 0.0)) throw RegimeViolation("chung: q must be positive");
  if (!(c.p >= 0.0)) throw RegimeViolation("chung: p must be non-negative");
  if (!(c.s > 0.0 && c.s <= 1.0)) throw RegimeViolation("chung: s must lie in (0, 1]");
  if (!(c.t > c.s)) throw RegimeViolation("chung: t must exceed s");
  if (!(c.beta >= 0.0)) throw RegimeViolation("chung: beta must be non-negative");
  if (c.s == 1.0 && !(c.t < c.q + 1.0)) throw RegimeViolation("chung: case s = 1 needs t < q + 1");
  if (c.p == 0.0 && c.s != 1.0) throw RegimeViolation("chung: p = 0 supported only for s = 1");
  if (horizon < 200) throw InvalidArgument("chung: horizon must be >= 200");

  ChungResult res;
  res.regime = c.s == 1.0 ? 'a' : 'b';
  if (c.p > 0.0) {
    res.constant = res.regime == 'a' ? c.p / (c.q + 1.0 - c.t) : c.p / c.q;
    res.rate = res.regime == 'a' ? c.t - 1.0 : c.t - c.s;
  } else {
    res.rate = c.q;
  }
  res.tail_start = horizon / 100;

  double y = 1.0;
  double reference = 0.0;
  for (std::size_t k = 1; k <= horizon; ++k) {
    const double base = static_cast<double>(k) + c.beta;
    if (k >= res.tail_start) {
      double ratio;
      if (c.p > 0.0) {
        ratio = y / (res.constant * std::pow(base, -res.rate));
      } else {
        const double scaled = y * std::pow(base, c.q);
        if (k == res.tail_start) reference = scaled;
        ratio = reference != 0.0 ? scaled / reference : 0.0;
      }
      res.worst_ratio = std::max(res.worst_ratio, ratio);
    }
    y = (1.0 - c.q * std::pow(base, -c.s)) * y + c.p * std::pow(base, -c.t);
  }
  res.passed = std::isfinite(res.worst_ratio) && res.worst_ratio <= 1.0 + tolerance;
  return res;
}

}  // namespace sgdm
