#pragma once

#include <array>
#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "unigen/ga.hpp"
#include "unigen/linalg.hpp"

namespace unigen::analysis {

using linalg::ComplexMatrix;
using linalg::StateVector;

/// U = e^{i gamma} (cos(theta) I - i sin(theta) n.sigma): a rotation by
/// 2 theta about n, after stripping the global phase e^{i gamma} = sqrt(det U)
/// (principal branch). theta lies in [0, pi].
struct BlochDecomposition {
  double theta = 0.0;
  std::array<double, 3> axis{0.0, 0.0, 1.0};
  linalg::Complex global_phase{1.0, 0.0};
  /// max |reconstruction - U| including the global phase.
  double residual = 0.0;
  /// sin(theta) < 1e-9: axis is undefined and reported as (0, 0, 1).
  bool degenerate = false;
};

/// Throws ContractViolation for a non-unitary (1e-10) or non-2x2 input.
BlochDecomposition bloch_decompose(const ComplexMatrix& u);
/// cos(theta) I - i sin(theta) n.sigma (no global phase).
ComplexMatrix bloch_rotation(const BlochDecomposition& b);

/// U_1|psi_in> = e^{i chi} (alpha|0> + e^{i phi} sqrt(1 - alpha^2)|1>).
struct PreparedState {
  double alpha = 1.0;
  double phi = 0.0;  // (-pi, pi]
  /// One amplitude below 1e-12; phi is then reported as 0.
  bool degenerate = false;
};

PreparedState prepared_state(const ComplexMatrix& u1, const StateVector& psi_in);

/// |alpha - 1/sqrt(2)| <= tol: the equal-weight condition every working
/// one-query Deutsch variant must satisfy.
bool balance_condition_check(const PreparedState& ps, double tol);

struct GenerationStat {
  std::size_t generation = 0;
  double mean = 0.0;
  double stddev = 0.0;  // population form
  std::size_t count = 0;
  std::size_t active = 0;  // runs that had not yet terminated at this generation
};

struct EnsembleStats {
  std::vector<GenerationStat> generations;
  double alpha_mean = 0.0;
  double alpha_stddev = 0.0;
  std::size_t alpha_count = 0;
  std::map<std::size_t, std::size_t> qc_histogram;
  std::size_t run_count = 0;
};

struct EnsembleOptions {
  /// 0: a run contributes only to generations it reached. N > 0: report
  /// generations 1..N and hold a terminated run at its final mean fitness.
  std::size_t horizon = 0;
};

/// Throws std::invalid_argument for an empty record list.
EnsembleStats ensemble_stats(std::span<const ga::RunRecord> records,
                             std::span<const PreparedState> analyses,
                             const EnsembleOptions& options = {});

struct FitPoint {
  double epsilon = 0.0;
  double q = 0.0;
};

/// Sorts by epsilon and averages consecutive equal-count groups (sizes differ
/// by at most one, larger groups first). Fewer points than bins: one per bin.
std::vector<FitPoint> quantile_bins(std::vector<FitPoint> points, std::size_t bins);

/// Q = a exp(-b eps) + c
struct FitResult {
  double a = 0.0;
  double b = 0.0;
  double c = 0.0;
  double se_a = 0.0;
  double se_b = 0.0;
  double se_c = 0.0;
  double rss = 0.0;
  int iterations = 0;
  bool converged = false;
  std::string message;
};

struct FitOptions {
  /// Overrides the heuristic starting point (a, b, c).
  std::optional<std::array<double, 3>> initial;
  int max_iterations = 200;
  double relative_tolerance = 1e-10;
};

/// Heuristic start: c0 below min Q, then a log-linear regression for (a0, b0).
std::array<double, 3> initial_guess(std::span<const FitPoint> points);

/// Levenberg-Marquardt least squares. Needs >= 4 points with non-negative,
/// not all equal epsilon (std::invalid_argument otherwise). Singular normal
/// equations or the iteration cap give converged == false, not an exception.
FitResult fit_exponential(std::span<const FitPoint> points, const FitOptions& options = {});

double exponential_model(const FitResult& fit, double epsilon);

/// Summary row of a RunRecord, as written by ga::write_summary_rows.
struct RunSummary {
  std::size_t run_id = 0;
  std::uint64_t seed = 0;
  std::size_t q_c = 0;
  double epsilon_opt = 1.0;
  std::string termination;
  std::string best_genome;
};

/// Reads every summary table (header starting run_id,seed,q_c) in a CSV file.
std::vector<RunSummary> read_run_summaries(const std::string& path);

/// (epsilon_opt, q_c) of converged runs.
std::vector<FitPoint> converged_points(std::span<const RunSummary> runs);

}  // namespace unigen::analysis
