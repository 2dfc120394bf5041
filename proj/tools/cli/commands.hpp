#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "cli/config.hpp"
#include "unigen/analysis.hpp"
#include "unigen/ga.hpp"
#include "unigen/tasks.hpp"

namespace unigen::cli {

enum ExitCode : int { kExitOk = 0, kExitError = 1, kExitFlagged = 2 };

/// Files staged in memory and written together by commit(); nothing touches
/// the disk before that, so a failed command leaves no partial output.
class OutputSet {
 public:
  explicit OutputSet(std::filesystem::path dir) : dir_(std::move(dir)) {}
  std::ostream& file(const std::string& name);
  /// Writes name.tmp files then renames them into place.
  void commit() const;
  [[nodiscard]] const std::filesystem::path& dir() const noexcept { return dir_; }

 private:
  std::filesystem::path dir_;
  std::map<std::string, std::ostringstream> files_;
};

struct EnsembleResult {
  std::vector<std::optional<ga::RunRecord>> records;  // indexed by run, empty on failure
  std::vector<std::string> errors;                    // same indexing, empty on success
};

/// Runs seeds base_seed .. base_seed + count - 1 on up to `workers` threads.
/// The result depends only on the inputs, never on scheduling.
EnsembleResult run_ensemble(const ga::GAConfig& cfg, const tasks::TaskSpec& task,
                            std::uint64_t base_seed, std::size_t count, std::size_t workers);

struct RunAnalysis {
  std::size_t run_id = 0;
  analysis::PreparedState prepared;
  std::optional<tasks::DecisionOutcome> decision;
};

/// Prepared state of the first slot and the decision outcome, when the task
/// is a qubit task whose first slot is trainable.
std::optional<RunAnalysis> analyse_run(const ga::RunRecord& record, const tasks::TaskSpec& task,
                                       std::size_t run_id);

struct SweepSummary {
  analysis::EnsembleStats stats;
  std::vector<RunAnalysis> analyses;  // every successful run that supports it
  std::vector<analysis::FitPoint> fit_points;
  std::optional<analysis::FitResult> fit;
  std::size_t succeeded = 0;
  std::size_t failed = 0;
  std::size_t converged = 0;
  std::size_t capped = 0;
};

SweepSummary summarize_sweep(const ExperimentConfig& cfg, const tasks::TaskSpec& task,
                             const EnsembleResult& ensemble);

/// Runs one sweep and stages its CSVs into `out`. Throws on config errors.
SweepSummary sweep_into(const ExperimentConfig& cfg, OutputSet& out, std::ostream& err);

int cmd_run(const ExperimentConfig& cfg, std::ostream& err);
int cmd_sweep(const ExperimentConfig& cfg, std::ostream& err);

struct FitCommand {
  std::string input;
  std::string output;
  std::size_t bins = 20;
};
int cmd_fit(const FitCommand& command, std::ostream& err);

/// Defaults for `reproduce`: 1000 seeds, h = 1e-4, 50-generation horizon.
ExperimentConfig reproduce_defaults();
int cmd_reproduce(const std::string& figure, const ExperimentConfig& cfg, std::ostream& err);

void write_fit_csv(std::ostream& out, const analysis::FitResult& fit, std::size_t points);

}  // namespace unigen::cli
