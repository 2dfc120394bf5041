#include "unigen/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "unigen/csv.hpp"
#include "unigen/error.hpp"

namespace unigen::analysis {

namespace {

using linalg::Complex;

constexpr double kUnitaryTol = 1e-10;
constexpr double kDegenerateSin = 1e-9;
constexpr double kTinyAmplitude = 1e-12;

// Mean and population standard deviation, summed in sorted order so the
// result does not depend on the order of the inputs.
std::pair<double, double> mean_std(std::vector<double> values) {
  if (values.empty()) return {0.0, 0.0};
  std::sort(values.begin(), values.end());
  const auto n = static_cast<double>(values.size());
  double sum = 0.0;
  for (const double v : values) sum += v;
  const double mean = sum / n;
  double sq = 0.0;
  for (const double v : values) sq += (v - mean) * (v - mean);
  return {mean, std::sqrt(sq / n)};
}

}  // namespace

BlochDecomposition bloch_decompose(const ComplexMatrix& u) {
  if (u.dim() != 2) throw ContractViolation("bloch_decompose needs a 2x2 matrix");
  if (linalg::unitarity_defect(u) > kUnitaryTol) {
    throw ContractViolation("bloch_decompose: matrix is not unitary within 1e-10");
  }
  Complex det = linalg::determinant2(u);
  det = {det.real() + 0.0, det.imag() + 0.0};  // drop negative zeros before the branch cut
  const Complex phase = std::sqrt(det);
  const Complex inv_phase = 1.0 / phase;
  const Complex s00 = u(0, 0) * inv_phase;
  const Complex s01 = u(0, 1) * inv_phase;
  const Complex s10 = u(1, 0) * inv_phase;
  const Complex s11 = u(1, 1) * inv_phase;

  // -Im tr(U' sigma_k) / 2 = sin(theta) n_k
  const Complex i_unit{0.0, 1.0};
  const std::array<double, 3> v{-(s01 + s10).imag() / 2.0,
                                -(i_unit * s01 - i_unit * s10).imag() / 2.0,
                                -(s00 - s11).imag() / 2.0};
  const double sin_theta = std::sqrt(v[0] * v[0] + v[1] * v[1] + v[2] * v[2]);
  const double cos_theta = (s00 + s11).real() / 2.0;

  BlochDecomposition out;
  out.global_phase = phase;
  out.theta = std::atan2(sin_theta, cos_theta);
  if (sin_theta < kDegenerateSin) {
    out.degenerate = true;
    out.axis = {0.0, 0.0, 1.0};
  } else {
    out.axis = {v[0] / sin_theta, v[1] / sin_theta, v[2] / sin_theta};
  }
  out.residual = linalg::max_abs_diff(phase * bloch_rotation(out), u);
  return out;
}

ComplexMatrix bloch_rotation(const BlochDecomposition& b) {
  const double t = b.theta;
  return linalg::su2_closed_form({{t * b.axis[0], t * b.axis[1], t * b.axis[2]}});
}

PreparedState prepared_state(const ComplexMatrix& u1, const StateVector& psi_in) {
  if (u1.dim() != 2) throw InvalidDimension("prepared_state is defined for qubits only");
  const StateVector s = linalg::apply(u1, psi_in);
  const double norm = s.norm();
  PreparedState out;
  out.alpha = std::abs(s[0]) / norm;
  if (std::abs(s[0]) < kTinyAmplitude || std::abs(s[1]) < kTinyAmplitude) {
    out.degenerate = true;
    out.phi = 0.0;
    return out;
  }
  double phi = std::arg(s[1] * std::conj(s[0]));
  if (phi <= -std::numbers::pi) phi += 2.0 * std::numbers::pi;
  out.phi = phi;
  return out;
}

bool balance_condition_check(const PreparedState& ps, double tol) {
  return std::abs(ps.alpha - 1.0 / std::numbers::sqrt2) <= tol;
}

EnsembleStats ensemble_stats(std::span<const ga::RunRecord> records,
                             std::span<const PreparedState> analyses,
                             const EnsembleOptions& options) {
  if (records.empty()) throw std::invalid_argument("ensemble_stats needs at least one run");

  EnsembleStats out;
  out.run_count = records.size();
  std::size_t longest = 0;
  for (const auto& r : records) {
    longest = std::max(longest, r.generations);
    ++out.qc_histogram[r.generations];
  }
  const std::size_t horizon = options.horizon > 0 ? options.horizon : longest;

  for (std::size_t g = 1; g <= horizon; ++g) {
    std::vector<double> values;
    std::size_t active = 0;
    for (const auto& r : records) {
      if (r.generations == 0) continue;
      if (g <= r.generations) {
        values.push_back(r.mean_fitness[g - 1]);
        ++active;
      } else if (options.horizon > 0) {
        values.push_back(r.mean_fitness.back());
      }
    }
    const auto [mean, stddev] = mean_std(values);
    out.generations.push_back({g, mean, stddev, values.size(), active});
  }

  std::vector<double> alphas;
  alphas.reserve(analyses.size());
  for (const auto& a : analyses) alphas.push_back(a.alpha);
  const auto [alpha_mean, alpha_std] = mean_std(alphas);
  out.alpha_mean = alpha_mean;
  out.alpha_stddev = alpha_std;
  out.alpha_count = alphas.size();
  return out;
}

std::vector<FitPoint> quantile_bins(std::vector<FitPoint> points, std::size_t bins) {
  if (bins == 0) throw std::invalid_argument("quantile_bins needs at least one bin");
  std::sort(points.begin(), points.end(), [](const FitPoint& x, const FitPoint& y) {
    return x.epsilon < y.epsilon || (x.epsilon == y.epsilon && x.q < y.q);
  });
  const std::size_t n = points.size();
  const std::size_t groups = std::min(bins, n);
  std::vector<FitPoint> out;
  out.reserve(groups);
  std::size_t begin = 0;
  for (std::size_t b = 0; b < groups; ++b) {
    const std::size_t size = n / groups + (b < n % groups ? 1 : 0);
    double eps = 0.0;
    double q = 0.0;
    for (std::size_t i = begin; i < begin + size; ++i) {
      eps += points[i].epsilon;
      q += points[i].q;
    }
    out.push_back({eps / static_cast<double>(size), q / static_cast<double>(size)});
    begin += size;
  }
  return out;
}

std::vector<RunSummary> read_run_summaries(const std::string& path) {
  std::vector<RunSummary> out;
  for (const auto& table : csv::read_tables_file(path)) {
    const auto id = table.column("run_id");
    const auto seed = table.column("seed");
    const auto qc = table.column("q_c");
    const auto eps = table.column("epsilon_opt");
    const auto term = table.column("termination_reason");
    const auto genome = table.column("best_genome");
    if (!id || !seed || !qc || !eps || !term) continue;
    for (const auto& row : table.rows) {
      RunSummary s;
      s.run_id = std::stoull(row[*id]);
      s.seed = std::stoull(row[*seed]);
      s.q_c = std::stoull(row[*qc]);
      s.epsilon_opt = csv::parse_double(row[*eps]);
      s.termination = row[*term];
      if (genome) s.best_genome = row[*genome];
      out.push_back(std::move(s));
    }
  }
  return out;
}

std::vector<FitPoint> converged_points(std::span<const RunSummary> runs) {
  std::vector<FitPoint> out;
  for (const auto& r : runs) {
    if (r.termination == ga::to_string(ga::TerminationReason::kConverged)) {
      out.push_back({r.epsilon_opt, static_cast<double>(r.q_c)});
    }
  }
  return out;
}

}  // namespace unigen::analysis
