#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "unigen/analysis.hpp"

namespace unigen::analysis {

namespace {

using Vec3 = std::array<double, 3>;
using Mat3 = std::array<Vec3, 3>;

// Gaussian elimination with partial pivoting; false if (numerically) singular.
bool solve3(Mat3 m, Vec3 rhs, Vec3& x) {
  double scale = 0.0;
  for (const auto& row : m) {
    for (const double v : row) scale = std::max(scale, std::abs(v));
  }
  if (!(scale > 0.0) || !std::isfinite(scale)) return false;
  const double tiny = scale * 1e-14;

  for (int col = 0; col < 3; ++col) {
    int pivot = col;
    for (int r = col + 1; r < 3; ++r) {
      if (std::abs(m[r][col]) > std::abs(m[pivot][col])) pivot = r;
    }
    if (std::abs(m[pivot][col]) <= tiny) return false;
    std::swap(m[col], m[pivot]);
    std::swap(rhs[col], rhs[pivot]);
    for (int r = col + 1; r < 3; ++r) {
      const double f = m[r][col] / m[col][col];
      for (int c = col; c < 3; ++c) m[r][c] -= f * m[col][c];
      rhs[r] -= f * rhs[col];
    }
  }
  for (int r = 2; r >= 0; --r) {
    double acc = rhs[r];
    for (int c = r + 1; c < 3; ++c) acc -= m[r][c] * x[c];
    x[r] = acc / m[r][r];
  }
  return std::isfinite(x[0]) && std::isfinite(x[1]) && std::isfinite(x[2]);
}

double model(const Vec3& p, double eps) { return p[0] * std::exp(-p[1] * eps) + p[2]; }

double residual_sum(std::span<const FitPoint> pts, const Vec3& p) {
  double rss = 0.0;
  for (const auto& pt : pts) {
    const double r = pt.q - model(p, pt.epsilon);
    rss += r * r;
  }
  return rss;
}

// J^T J and J^T r for the model Jacobian (e, -a eps e, 1), r = Q - model.
void normal_equations(std::span<const FitPoint> pts, const Vec3& p, Mat3& jtj, Vec3& jtr) {
  jtj = {};
  jtr = {};
  for (const auto& pt : pts) {
    const double e = std::exp(-p[1] * pt.epsilon);
    const Vec3 j{e, -p[0] * pt.epsilon * e, 1.0};
    const double r = pt.q - (p[0] * e + p[2]);
    for (int a = 0; a < 3; ++a) {
      jtr[a] += j[a] * r;
      for (int b = 0; b < 3; ++b) jtj[a][b] += j[a] * j[b];
    }
  }
}

void check_points(std::span<const FitPoint> points) {
  if (points.size() < 4) throw std::invalid_argument("exponential fit needs at least 4 points");
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  for (const auto& pt : points) {
    if (!(pt.epsilon >= 0.0) || !std::isfinite(pt.q)) {
      throw std::invalid_argument("fit points need finite Q and non-negative epsilon");
    }
    lo = std::min(lo, pt.epsilon);
    hi = std::max(hi, pt.epsilon);
  }
  if (lo == hi) throw std::invalid_argument("fit points need at least two distinct epsilon values");
}

}  // namespace

std::array<double, 3> initial_guess(std::span<const FitPoint> points) {
  check_points(points);
  double q_min = points.front().q;
  double q_max = q_min;
  for (const auto& pt : points) {
    q_min = std::min(q_min, pt.q);
    q_max = std::max(q_max, pt.q);
  }
  const double c0 = q_min - (0.05 * (q_max - q_min) + 1e-6 * std::max(1.0, std::abs(q_min)));

  // least squares of ln(Q - c0) = ln(a) - b eps
  const auto n = static_cast<double>(points.size());
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  for (const auto& pt : points) {
    const double y = std::log(pt.q - c0);
    sx += pt.epsilon;
    sy += y;
    sxx += pt.epsilon * pt.epsilon;
    sxy += pt.epsilon * y;
  }
  const double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  const double intercept = (sy - slope * sx) / n;
  return {std::exp(intercept), -slope, c0};
}

FitResult fit_exponential(std::span<const FitPoint> points, const FitOptions& options) {
  check_points(points);
  Vec3 p = options.initial ? *options.initial : initial_guess(points);

  FitResult out;
  double rss = residual_sum(points, p);
  double lambda = 1e-3;
  Mat3 jtj{};
  Vec3 jtr{};

  double q_scale = 0.0;
  for (const auto& pt : points) q_scale += pt.q * pt.q;
  const double exact_floor = 1e-28 * std::max(q_scale, 1e-300);

  int it = 0;
  for (; it < options.max_iterations; ++it) {
    if (rss <= exact_floor) {
      out.converged = true;
      out.message = "exact fit";
      break;
    }
    normal_equations(points, p, jtj, jtr);
    Mat3 damped = jtj;
    for (int a = 0; a < 3; ++a) damped[a][a] += lambda * jtj[a][a];
    Vec3 step{};
    if (!solve3(damped, jtr, step)) {
      out.message = "singular normal equations";
      break;
    }
    const Vec3 trial{p[0] + step[0], p[1] + step[1], p[2] + step[2]};
    const double trial_rss = residual_sum(points, trial);
    const double step_norm = std::hypot(step[0], step[1], step[2]);
    const double p_norm = std::hypot(p[0], p[1], p[2]);

    if (std::isfinite(trial_rss) && trial_rss < rss) {
      const double change = (rss - trial_rss) / rss;
      p = trial;
      rss = trial_rss;
      lambda = std::max(lambda / 10.0, 1e-15);
      if (change < options.relative_tolerance || step_norm <= 1e-14 * (p_norm + 1e-14)) {
        out.converged = true;
        out.message = "relative residual change below tolerance";
        ++it;
        break;
      }
    } else {
      if (step_norm <= 1e-14 * (p_norm + 1e-14)) {
        out.converged = true;
        out.message = "no further decrease possible";
        ++it;
        break;
      }
      lambda *= 10.0;
      if (lambda > 1e20) {
        out.message = "damping overflow";
        ++it;
        break;
      }
    }
  }
  if (it == options.max_iterations && !out.converged) out.message = "iteration cap reached";

  out.a = p[0];
  out.b = p[1];
  out.c = p[2];
  out.rss = rss;
  out.iterations = it;

  // linearised covariance: rss / (n - 3) * (J^T J)^-1
  normal_equations(points, p, jtj, jtr);
  const double variance = points.size() > 3 ? rss / static_cast<double>(points.size() - 3) : 0.0;
  Vec3 se{};
  for (int k = 0; k < 3; ++k) {
    Vec3 unit{};
    unit[k] = 1.0;
    Vec3 col{};
    if (!solve3(jtj, unit, col)) {
      out.converged = false;
      out.message = "singular normal matrix at solution";
      break;
    }
    se[k] = std::sqrt(std::max(0.0, variance * col[k]));
  }
  out.se_a = se[0];
  out.se_b = se[1];
  out.se_c = se[2];
  if (!std::isfinite(rss)) out.converged = false;
  return out;
}

double exponential_model(const FitResult& fit, double epsilon) {
  return fit.a * std::exp(-fit.b * epsilon) + fit.c;
}

}  // namespace unigen::analysis
