#include "sgdm/trajectory.hpp"

#include <cmath>
#include <limits>

#include "sgdm/errors.hpp"

namespace sgdm {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

double alpha_or_nan(const StepSchedule& s, std::size_t k) {
  const std::size_t n = s.length();
  return (n != 0 && k > n) ? kNaN : s(k);
}

/// Per-window running state for the streaming diagnostics.
class WindowTracker {
 public:
  WindowTracker(const WindowPartition& part, std::size_t d, double lambda)
      : part_(part), lambda_(lambda), anchor_x_(d), anchor_z_(d), noise_sum_(d), z_(d) {}

  void start(ConstView x, ConstView x_prev, Trajectory& out) {
    open(x, x_prev, out);
  }

  /// Call after x^t has been produced by step t-1 with alpha_{t-1} e^{t-1}.
  void observe(std::size_t t, ConstView x, ConstView x_prev, double alpha_prev, ConstView e_prev,
               Trajectory& out) {
    if (done_) return;
    for (std::size_t i = 0; i < x.size(); ++i) noise_sum_[i] += alpha_prev * e_prev[i];
    auxiliary_z(x, x_prev, lambda_, z_);
    cur_.s = std::max(cur_.s, norm(noise_sum_));
    cur_.max_dx = std::max(cur_.max_dx, dist(x, anchor_x_));
    cur_.max_dz = std::max(cur_.max_dz, dist(z_, anchor_z_));
    if (t == part_.gamma[w_ + 1]) {
      out.windows.push_back(cur_);
      ++w_;
      open(x, x_prev, out);
    }
  }

 private:
  void open(ConstView x, ConstView x_prev, Trajectory& out) {
    out.boundaries.push_back({part_.gamma[w_], Vector(x.begin(), x.end()),
                              Vector(x_prev.begin(), x_prev.end())});
    if (w_ >= part_.windows()) {
      done_ = true;
      return;
    }
    std::copy(x.begin(), x.end(), anchor_x_.begin());
    auxiliary_z(x, x_prev, lambda_, anchor_z_);
    std::fill(noise_sum_.begin(), noise_sum_.end(), 0.0);
    cur_ = {};
  }

  const WindowPartition& part_;
  double lambda_;
  std::size_t w_ = 0;
  bool done_ = false;
  WindowStream cur_;
  Vector anchor_x_, anchor_z_, noise_sum_, z_;
};

}  // namespace

Trajectory run_trajectory(RunSpec spec, const RecordingPolicy& policy) {
  const std::size_t d = spec.problem.dim;
  if (spec.horizon < 1) throw InvalidArgument("run_trajectory: horizon must be >= 1");
  if (policy.stride < 1) throw InvalidArgument("run_trajectory: stride must be >= 1");
  if (spec.x0.empty()) spec.x0.assign(d, 1.0);
  if (spec.x0.size() != d) throw DimensionMismatch("run_trajectory: x0 dimension mismatch");
  if (policy.partition && policy.partition->horizon != spec.horizon)
    throw InvalidArgument("run_trajectory: partition horizon differs from run horizon");
  const std::size_t K = spec.horizon;

  Trajectory tr;
  tr.spec = std::move(spec);
  tr.partition = policy.partition;
  const RunSpec& rs = tr.spec;
  const Problem& pb = rs.problem;
  const double lambda = rs.params.lambda();
  const double nu = rs.params.nu();
  const NoiseStream stream(rs.seed);
  const bool ext = nu != 0.0;

  Vector x = rs.x0, x_prev = rs.x0, x_next(d), x_tilde(d), grad(d), grad_x(d), e(d);
  std::optional<WindowTracker> tracker;
  if (policy.partition) {
    tracker.emplace(*policy.partition, d, lambda);
    tracker->start(x, x_prev, tr);
  }
  if (policy.store_all) {
    tr.iterates.reserve(K);
    tr.noises.reserve(K > 0 ? K - 1 : 0);
    tr.iterates.push_back(x);
  }
  tr.steps.reserve(std::min<std::size_t>(K / policy.stride + 2, std::size_t{1} << 26));

  auto record = [&](std::size_t k, double f, ConstView g, double move) {
    StepRecord r;
    r.k = k;
    r.alpha = alpha_or_nan(rs.schedule, k);
    r.f = f;
    r.grad_norm = norm(g);
    r.dist = pb.x_star ? dist(x, *pb.x_star) : kNaN;
    r.move = move;
    tr.steps.push_back(r);
  };
  auto fail = [&](std::string why) {
    tr.diverged = true;
    tr.divergence_reason = std::move(why);
  };

  const bool bounded_region = pb.smooth_region.bounded();
  double move = 0.0;
  std::size_t k = 1;
  for (; k < K; ++k) {
    const bool rec = (k - 1) % policy.stride == 0;
    const double alpha = rs.schedule(k);
    for (std::size_t i = 0; i < d; ++i) x_tilde[i] = x[i] + nu * (x[i] - x_prev[i]);
    const double f_tilde = pb.eval(x_tilde, grad);
    if (!std::isfinite(f_tilde) || !all_finite(grad)) {
      fail("non-finite objective or gradient at k=" + std::to_string(k));
      break;
    }
    if (rec) {
      if (ext) {
        const double f = pb.eval(x, grad_x);
        record(k, f, grad_x, move);
      } else {
        record(k, f_tilde, grad, move);
      }
    }
    sample_noise(rs.noise, stream, k, e);
    for (std::size_t i = 0; i < d; ++i)
      x_next[i] = x[i] - alpha * (grad[i] - e[i]) + lambda * (x[i] - x_prev[i]);
    if (!all_finite(x_next)) {
      fail("non-finite iterate at k=" + std::to_string(k + 1));
      break;
    }
    if (norm(x_next) > policy.divergence_cap) {
      fail("iterate norm exceeded cap at k=" + std::to_string(k + 1));
      break;
    }
    move = dist(x_next, x);
    x_prev.swap(x);
    x.swap(x_next);
    if (bounded_region && !pb.smooth_region.contains(x)) ++tr.region_exits;
    if (tracker) tracker->observe(k + 1, x, x_prev, alpha, e, tr);
    if (policy.store_all) {
      tr.noises.push_back(e);
      tr.iterates.push_back(x);
    }
  }
  tr.last_index = k;
  // Final iterate is always recorded (unless the run broke before producing it).
  if (tr.steps.empty() || tr.steps.back().k != k) {
    const double f = pb.eval(x, grad_x);
    if (std::isfinite(f) && all_finite(grad_x)) record(k, f, grad_x, move);
  }
  tr.x_last = std::move(x);
  tr.x_last_prev = std::move(x_prev);
  return tr;
}

}  // namespace sgdm
