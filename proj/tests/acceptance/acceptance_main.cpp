// Acceptance checks. Prints one PASS/FAIL line per criterion (detail lines are
// indented) and exits nonzero if any criterion fails.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <numbers>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "cli/commands.hpp"
#include "cli/config.hpp"
#include "unigen/analysis.hpp"
#include "unigen/ga.hpp"
#include "unigen/genome.hpp"
#include "unigen/linalg.hpp"
#include "unigen/tasks.hpp"

namespace {

namespace fs = std::filesystem;
using namespace unigen;

// Experiment protocol shared by AC1-AC3.
constexpr double kThreshold = 1e-4;
constexpr int kDepth = 15;
constexpr std::size_t kHorizon = 50;
constexpr std::size_t kSeedsSmall = 200;  // AC1, N_pop = 10
constexpr std::size_t kSeedsLarge = 500;  // AC1-AC3, N_pop = 100
constexpr std::size_t kFitBins = 20;

// AC1
constexpr double kSmallPopLow = 0.90;
constexpr double kSmallPopHigh = 0.99;
constexpr double kLargePopMin = 0.98;
constexpr std::size_t kMonotoneFrom = 5;
// AC2
constexpr double kAlphaMaxError = 1e-3;
constexpr double kAlphaBand = 0.01;
constexpr double kBalanceTol = 0.02;
constexpr double kPhiSpan = 3.0;
// AC3
constexpr double kBMin = 10.0, kBMax = 35.0;
constexpr double kCMin = 8.0, kCMax = 25.0;
constexpr std::size_t kMaxQc = 60;
constexpr double kSyntheticRel = 1e-6;
// AC6
constexpr double kUnitarityTol = 1e-12;
constexpr double kClosedFormTol = 1e-12;
constexpr double kTraceTol = 1e-13;

struct Outcome {
  bool pass;
  std::string summary;
  std::vector<std::string> details;
};

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

cli::ExperimentConfig protocol(std::size_t npop, std::size_t seeds) {
  cli::ExperimentConfig cfg;
  cfg.task = "deutsch";
  cfg.npop = npop;
  cfg.depth = kDepth;
  cfg.threshold = kThreshold;
  cfg.mutation = 0.0;
  cfg.elitism = 0;
  cfg.seeds = seeds;
  cfg.base_seed = 1;
  cfg.horizon = kHorizon;
  cfg.bins = kFitBins;
  cfg.alpha_max_error = kAlphaMaxError;
  return cfg;
}

struct Ensemble {
  cli::EnsembleResult runs;
  cli::SweepSummary summary;
};

Ensemble sweep(const cli::ExperimentConfig& cfg) {
  const auto task = tasks::resolve_task(cfg.task);
  Ensemble e;
  e.runs = cli::run_ensemble(cli::to_ga_config(cfg), task, cfg.base_seed, cfg.seeds, cfg.workers);
  e.summary = cli::summarize_sweep(cfg, task, e.runs);
  return e;
}

double mean_at(const cli::SweepSummary& s, std::size_t generation) {
  return s.stats.generations.at(generation - 1).mean;
}

Outcome ac1(const Ensemble& small, const Ensemble& large) {
  const auto& gs = small.summary.stats.generations;
  const double x10 = mean_at(small.summary, kHorizon);
  const double sd10 = gs.at(kHorizon - 1).stddev;
  const double x100 = mean_at(large.summary, kHorizon);
  std::size_t violations = 0;
  std::size_t first_violation = 0;
  const auto& gl = large.summary.stats.generations;
  for (std::size_t g = kMonotoneFrom; g < gl.size(); ++g) {
    // error 1 - mean at generation g+1 must not exceed that at generation g
    if (gl[g].mean < gl[g - 1].mean) {
      if (violations++ == 0) first_violation = g + 1;
    }
  }
  const bool ok_small = x10 >= kSmallPopLow && x10 <= kSmallPopHigh;
  const bool ok_large = x100 >= kLargePopMin;
  const bool ok_mono = violations == 0;
  Outcome o{ok_small && ok_large && ok_mono,
            "convergence: N_pop=10 mean fitness at gen 50 = " + fmt(x10) + " +- " + fmt(sd10) +
                " (want [0.90, 0.99]); N_pop=100 = " + fmt(x100) + " (want >= 0.98); mean error " +
                (ok_mono ? "non-increasing" : "INCREASES") + " after gen 5",
            {}};
  o.details.push_back("N_pop=10: " + std::to_string(small.summary.converged) + "/" +
                      std::to_string(kSeedsSmall) + " runs converged, N_pop=100: " +
                      std::to_string(large.summary.converged) + "/" + std::to_string(kSeedsLarge));
  if (!ok_mono) o.details.push_back("first increase of the mean error at generation " + std::to_string(first_violation));
  return o;
}

Outcome ac2(const Ensemble& large) {
  std::size_t checked = 0;
  std::size_t failing = 0;
  double phi_lo = 10.0, phi_hi = -10.0;
  std::vector<std::string> failures;
  for (const auto& a : large.summary.analyses) {
    const auto& rec = *large.runs.records[a.run_id];
    if (!rec.converged() || rec.epsilon_opt >= kAlphaMaxError) continue;
    ++checked;
    if (!a.prepared.degenerate) {
      phi_lo = std::min(phi_lo, a.prepared.phi);
      phi_hi = std::max(phi_hi, a.prepared.phi);
    }
    if (!analysis::balance_condition_check(a.prepared, kBalanceTol)) {
      ++failing;
      failures.push_back("run " + std::to_string(a.run_id) + " (seed " + std::to_string(rec.seed) +
                         "): alpha = " + fmt(a.prepared.alpha) + ", |alpha - 1/sqrt2| = " +
                         fmt(std::abs(a.prepared.alpha - 1.0 / std::numbers::sqrt2)) +
                         ", epsilon_opt = " + fmt(rec.epsilon_opt));
    }
  }
  const auto& st = large.summary.stats;
  const bool ok_mean = std::abs(st.alpha_mean - 1.0 / std::numbers::sqrt2) <= kAlphaBand;
  const bool ok_each = checked > 0 && failing == 0;
  const double span = phi_hi - phi_lo;
  const bool ok_phi = span >= kPhiSpan;
  Outcome o{ok_mean && ok_each && ok_phi,
            "balanced superposition: alpha = " + fmt(st.alpha_mean) + " +- " + fmt(st.alpha_stddev) +
                " over " + std::to_string(checked) + " runs with epsilon_opt < 1e-3 (want 0.70711 +- 0.01); " +
                std::to_string(checked - failing) + "/" + std::to_string(checked) +
                " pass tol 0.02; phi span " + fmt(span) + " rad (want >= 3)",
            std::move(failures)};
  if (!ok_each) {
    o.details.push_back("a run with error epsilon can have |alpha - 1/sqrt2| up to about sqrt(epsilon / 2),"
                        " i.e. 0.022 at epsilon = 1e-3");
  }
  return o;
}

Outcome ac3(const Ensemble& large) {
  std::size_t max_qc = 0;
  for (const auto& rec : large.runs.records) {
    if (rec && rec->converged()) max_qc = std::max(max_qc, rec->generations);
  }
  const bool ok_qc = max_qc <= kMaxQc;

  bool band = false;
  std::string band_text;
  if (large.summary.fit) {
    const auto& f = *large.summary.fit;
    band = f.converged && f.b >= kBMin && f.b <= kBMax && f.c >= kCMin && f.c <= kCMax;
    band_text = std::string(f.converged ? "converged" : "NOT converged") + ", a = " + fmt(f.a) +
                ", b = " + fmt(f.b) + " +- " + fmt(f.se_b) + ", c = " + fmt(f.c) + " +- " + fmt(f.se_c);
  } else {
    band_text = "no fit (" + std::to_string(large.summary.fit_points.size()) + " points)";
  }

  // Synthetic oracle: exact model data must be recovered.
  std::vector<analysis::FitPoint> pts;
  for (int i = 0; i <= 20; ++i) {
    const double eps = 0.01 * i;
    pts.push_back({eps, 16.0 * std::exp(-22.0 * eps) + 15.0});
  }
  const auto syn = analysis::fit_exponential(pts);
  const double worst = std::max({std::abs(syn.a - 16.0) / 16.0, std::abs(syn.b - 22.0) / 22.0,
                                 std::abs(syn.c - 15.0) / 15.0});
  const bool gate = syn.converged && worst <= kSyntheticRel;

  Outcome o{gate && ok_qc,
            "run-time/accuracy fit: synthetic recovery rel. error " + fmt(worst) + " (hard gate, want <= 1e-6); max Q_c " +
                std::to_string(max_qc) + " (want <= 60); ensemble band " + (band ? "met" : "NOT met"),
            {}};
  o.details.push_back("ensemble fit on " + std::to_string(large.summary.fit_points.size()) +
                      " equal-count bins: " + band_text + " (band b in [10, 35], c in [8, 25])");
  if (!band) {
    o.details.push_back("the stochastic band is reported, not gated; the synthetic oracle is the gate");
  }
  return o;
}

Outcome ac4() {
  std::size_t failures = 0;
  for (int depth = 1; depth <= 12; ++depth) {
    const genome::CodecConfig cfg{.depth = depth};
    const std::uint64_t n = std::uint64_t{1} << depth;
    std::vector<double> values;
    for (std::uint64_t k = 0; k < n; ++k) {
      std::string bits(static_cast<std::size_t>(depth), '0');
      for (int l = 0; l < depth; ++l) bits[static_cast<std::size_t>(l)] = ((k >> (depth - 1 - l)) & 1U) ? '1' : '0';
      const auto c = genome::Chromosome::from_string(bits);
      values.push_back(genome::decode(c, cfg));
      if (genome::decode(c.complement(), cfg) != -values.back()) ++failures;
    }
    if (std::set<double>(values.begin(), values.end()).size() != n) ++failures;
    const double gap = cfg.half_range * std::ldexp(1.0, 1 - depth);
    for (std::uint64_t k = 1; k < n; ++k) {
      if (std::abs(values[k] - values[k - 1] - gap) > 1e-15 * cfg.half_range) ++failures;
    }
    if (values.front() != -values.back()) ++failures;
  }
  return {failures == 0,
          "decoder: L = 1..12 exhaustive, distinct, spacing R*2^(1-L) within 1e-15 R, symmetric; " +
              std::to_string(failures) + " violations",
          {}};
}

Outcome ac5() {
  std::size_t identity_failures = 0;
  for (std::size_t n = 2; n <= 400; ++n) {
    const auto p = ga::selection_probabilities(n);
    if (p.back() != p.front() / static_cast<double>(n)) ++identity_failures;
  }
  std::size_t outside = 0;
  double worst_z = 0.0;
  std::vector<std::string> details;
  for (std::size_t n : {10u, 100u}) {
    const auto p = ga::selection_probabilities(n);
    Rng rng(1234 + n);
    std::vector<int> counts(n);
    const int draws = 100000;
    for (int i = 0; i < draws; ++i) ++counts[ga::sample_rank(p, rng)];
    double chi2 = 0.0;
    for (std::size_t r = 0; r < n; ++r) {
      const double sigma = std::sqrt(draws * p[r] * (1.0 - p[r]));
      const double z = std::abs(counts[r] - draws * p[r]) / sigma;
      worst_z = std::max(worst_z, z);
      if (z > 3.0) {
        ++outside;
        details.push_back("N = " + std::to_string(n) + ", rank " + std::to_string(r + 1) + ": " + fmt(z) + " sigma");
      }
      chi2 += (counts[r] - draws * p[r]) * (counts[r] - draws * p[r]) / (draws * p[r]);
    }
    details.push_back("N = " + std::to_string(n) + ": chi-square " + fmt(chi2) + " on " + std::to_string(n - 1) +
                      " degrees of freedom; chance that a correct sampler puts some rank beyond 3 sigma is about " +
                      fmt(1.0 - std::pow(0.9973, static_cast<double>(n))));
  }
  return {identity_failures == 0 && outside == 0,
          "selection law: P(N) = P(1)/N exact for N = 2..400 (" + std::to_string(identity_failures) +
              " failures); 1e5-draw histograms for N = 10, 100: " + std::to_string(outside) +
              " ranks beyond 3 sigma (worst " + fmt(worst_z) + " sigma)",
          std::move(details)};
}

Outcome ac6() {
  Rng rng(2024);
  double unitarity = 0.0;
  for (std::size_t d : {2u, 3u, 4u}) {
    for (int t = 0; t < 1000; ++t) {
      linalg::ParameterVector p;
      for (std::size_t k = 0; k < d * d - 1; ++k) p.components.push_back(std::numbers::pi * (2.0 * rng.uniform01() - 1.0));
      unitarity = std::max(unitarity, linalg::unitarity_defect(linalg::unitary_from_params(p, d)));
    }
  }
  const auto gens2 = linalg::gell_mann_generators(2);
  double closed = 0.0;
  for (int t = 0; t < 10000; ++t) {
    linalg::ParameterVector p;
    for (int k = 0; k < 3; ++k) p.components.push_back(std::numbers::pi * (2.0 * rng.uniform01() - 1.0));
    closed = std::max(closed, linalg::max_abs_diff(linalg::su2_closed_form(p), linalg::unitary_from_params(p, gens2)));
  }
  double ortho = 0.0;
  for (std::size_t d : {2u, 3u, 4u}) {
    const auto s = linalg::gell_mann_generators(d);
    for (std::size_t a = 0; a < s.size(); ++a) {
      ortho = std::max(ortho, std::abs(linalg::trace(s[a])));
      for (std::size_t b = 0; b < s.size(); ++b) {
        const double want = a == b ? 2.0 : 0.0;
        ortho = std::max(ortho, std::abs(linalg::trace(linalg::matmul(s[a], s[b])) - want));
      }
    }
  }
  return {unitarity <= kUnitarityTol && closed <= kClosedFormTol && ortho <= kTraceTol,
          "linear algebra: max unitarity defect " + fmt(unitarity) + " (<= 1e-12); SU(2) closed form vs eigen path " +
              fmt(closed) + " over 1e4 samples (<= 1e-12); trace orthogonality " + fmt(ortho) + " (<= 1e-13)",
          {}};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

Outcome ac7() {
  const fs::path root = fs::temp_directory_path() / "unigen_acceptance_ac7";
  fs::remove_all(root);
  auto cfg = protocol(100, 40);
  std::ostringstream err;
  cfg.out = (root / "w1").string();
  cfg.workers = 1;
  const int c1 = cli::cmd_sweep(cfg, err);
  cfg.out = (root / "w4").string();
  cfg.workers = 4;
  const int c4 = cli::cmd_sweep(cfg, err);

  std::size_t compared = 0;
  std::vector<std::string> differing;
  if (fs::exists(root / "w1")) {
    for (const auto& entry : fs::directory_iterator(root / "w1")) {
      if (entry.path().extension() != ".csv") continue;
      ++compared;
      const auto other = root / "w4" / entry.path().filename();
      if (!fs::exists(other) || slurp(entry.path()) != slurp(other)) differing.push_back(entry.path().filename().string());
    }
  }
  fs::remove_all(root);
  const bool ok = c1 != cli::kExitError && c1 == c4 && compared >= 5 && differing.empty();
  std::string summary = "determinism: sweep with 1 and 4 workers, " + std::to_string(compared) +
                        " CSV files compared, " + std::to_string(differing.size()) + " differ";
  if (c1 == cli::kExitError || c4 == cli::kExitError) summary += "; sweep failed: " + err.str();
  return {ok, summary, differing};
}

Outcome ac8() {
  const auto task = tasks::deutsch_task();
  const genome::CodecConfig codec{.depth = kDepth};
  const double angle = std::numbers::pi / (2.0 * std::numbers::sqrt2);
  const linalg::ParameterVector hadamard{{angle, 0.0, angle}};
  genome::Genome g;
  g.vectors = {genome::encode_nearest(hadamard, codec), genome::encode_nearest(hadamard, codec)};
  const double fitness = ga::FitnessFunction(task, codec)(g);
  const double bound = genome::rounding_error_bound(codec, 2);
  return {fitness >= 1.0 - bound,
          "known solution: nearest-grid Hadamard genome scores " + fmt(fitness) + " (1 - fitness = " +
              fmt(1.0 - fitness) + ", bound " + fmt(bound) + ")",
          {}};
}

}  // namespace

int main() {
  std::cout << "unigen acceptance: deutsch task, L = 15, h = 1e-4, p_mut = 0, no elitism\n" << std::flush;
  const auto small = sweep(protocol(10, kSeedsSmall));
  const auto large = sweep(protocol(100, kSeedsLarge));

  const std::vector<std::pair<const char*, Outcome>> results{
      {"AC1", ac1(small, large)}, {"AC2", ac2(large)}, {"AC3", ac3(large)}, {"AC4", ac4()},
      {"AC5", ac5()},             {"AC6", ac6()},      {"AC7", ac7()},      {"AC8", ac8()},
  };
  int failed = 0;
  for (const auto& [id, o] : results) {
    std::cout << id << ' ' << (o.pass ? "PASS" : "FAIL") << "  " << o.summary << '\n';
    for (const auto& d : o.details) std::cout << "      " << d << '\n';
    failed += o.pass ? 0 : 1;
  }
  std::cout << (results.size() - static_cast<std::size_t>(failed)) << '/' << results.size()
            << " criteria passed\n";
  return failed == 0 ? 0 : 1;
}
