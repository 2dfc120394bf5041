#include "cli/commands.hpp"

#include <algorithm>
#include <atomic>
#include <fstream>
#include <numbers>
#include <ostream>
#include <thread>

#include <json.hpp>

#include "unigen/csv.hpp"
#include "unigen/error.hpp"
#include "unigen/genome.hpp"
#include "unigen/version.hpp"

namespace unigen::cli {

namespace fs = std::filesystem;
using csv::format_double;

namespace {

constexpr double kBalanceTol = 0.02;

std::size_t first_trainable_index(const tasks::TaskSpec& task) {
  const auto& front = task.circuit.slots.front();
  return front.kind == tasks::Slot::Kind::kTrainable ? front.index : 0;
}

// First pair targeting |0> and first pair targeting |1>, if both exist.
std::optional<std::pair<std::size_t, std::size_t>> decision_pairs(const tasks::TaskSpec& task) {
  if (task.circuit.dim != 2) return std::nullopt;
  const auto zero = linalg::StateVector::basis(2, 0);
  const auto one = linalg::StateVector::basis(2, 1);
  std::optional<std::size_t> c, b;
  for (std::size_t i = 0; i < task.pairs.size(); ++i) {
    if (!c && linalg::fidelity(task.pairs[i].target, zero) == 1.0) c = i;
    if (!b && linalg::fidelity(task.pairs[i].target, one) == 1.0) b = i;
  }
  if (!c || !b) return std::nullopt;
  return std::make_pair(*c, *b);
}

void write_fit_points(std::ostream& out, const std::vector<analysis::FitPoint>& points) {
  out << "epsilon,q_c\n";
  for (const auto& p : points) out << format_double(p.epsilon) << ',' << format_double(p.q) << '\n';
}

std::vector<analysis::FitPoint> read_fit_input(const std::string& path, std::size_t bins) {
  std::vector<analysis::FitPoint> points;
  bool found = false;
  for (const auto& table : csv::read_tables_file(path)) {
    const auto eps = table.column("epsilon");
    const auto q = table.column("q_c");
    if (eps && q && !table.column("epsilon_opt")) {
      found = true;
      for (const auto& row : table.rows) {
        points.push_back({csv::parse_double(row[*eps]), csv::parse_double(row[*q])});
      }
    }
  }
  if (found) return points;

  const auto runs = analysis::read_run_summaries(path);
  if (runs.empty()) {
    throw FormatError("'" + path + "' has neither an epsilon,q_c table nor run summaries");
  }
  return analysis::quantile_bins(analysis::converged_points(runs), bins);
}

}  // namespace

std::ostream& OutputSet::file(const std::string& name) { return files_[name]; }

void OutputSet::commit() const {
  fs::create_directories(dir_);
  for (const auto& [name, content] : files_) {
    const fs::path target = dir_ / name;
    fs::create_directories(target.parent_path());
    const fs::path staging = target.string() + ".tmp";
    {
      std::ofstream out(staging, std::ios::binary | std::ios::trunc);
      if (!out) throw FormatError("cannot write '" + staging.string() + "'");
      out << content.str();
    }
    fs::rename(staging, target);
  }
}

EnsembleResult run_ensemble(const ga::GAConfig& cfg, const tasks::TaskSpec& task,
                            std::uint64_t base_seed, std::size_t count, std::size_t workers) {
  EnsembleResult result;
  result.records.resize(count);
  result.errors.resize(count);
  std::atomic<std::size_t> next{0};

  auto worker = [&] {
    for (std::size_t i = next++; i < count; i = next++) {
      try {
        result.records[i] = ga::run(cfg, task, base_seed + i);
      } catch (const std::exception& e) {
        result.errors[i] = e.what();
      }
    }
  };
  const std::size_t threads = std::clamp<std::size_t>(workers, 1, std::max<std::size_t>(count, 1));
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(threads);
    for (std::size_t t = 0; t < threads; ++t) pool.emplace_back(worker);
  }
  return result;
}

std::optional<RunAnalysis> analyse_run(const ga::RunRecord& record, const tasks::TaskSpec& task,
                                       std::size_t run_id) {
  const std::size_t slot = first_trainable_index(task);
  if (task.circuit.dim != 2 || slot == 0) return std::nullopt;
  const tasks::UnitaryBuilder builder(record.config.codec);
  const auto unitaries = builder.build(record.best_genome);

  RunAnalysis out;
  out.run_id = run_id;
  out.prepared = analysis::prepared_state(unitaries[slot - 1], task.initial_state);
  if (const auto pairs = decision_pairs(task)) {
    const auto out_c =
        tasks::propagate(task.circuit, unitaries, task.initial_state, task.pairs[pairs->first].input);
    const auto out_b =
        tasks::propagate(task.circuit, unitaries, task.initial_state, task.pairs[pairs->second].input);
    out.decision = tasks::decision_outcome(out_c, out_b);
  }
  return out;
}

SweepSummary summarize_sweep(const ExperimentConfig& cfg, const tasks::TaskSpec& task,
                             const EnsembleResult& ensemble) {
  SweepSummary summary;
  std::vector<ga::RunRecord> ok;
  std::vector<analysis::PreparedState> alpha_sample;
  std::vector<analysis::FitPoint> converged;

  for (std::size_t i = 0; i < ensemble.records.size(); ++i) {
    const auto& rec = ensemble.records[i];
    if (!rec) {
      ++summary.failed;
      continue;
    }
    ++summary.succeeded;
    if (rec->converged()) {
      ++summary.converged;
      converged.push_back({rec->epsilon_opt, static_cast<double>(rec->generations)});
    } else {
      ++summary.capped;
    }
    if (auto a = analyse_run(*rec, task, i)) {
      if (rec->converged() && rec->epsilon_opt < cfg.alpha_max_error) {
        alpha_sample.push_back(a->prepared);
      }
      summary.analyses.push_back(std::move(*a));
    }
    ok.push_back(*rec);
  }
  if (ok.empty()) return summary;

  summary.stats = analysis::ensemble_stats(ok, alpha_sample, {.horizon = cfg.horizon});
  if (cfg.bins > 0 && !converged.empty()) {
    summary.fit_points = analysis::quantile_bins(converged, cfg.bins);
  }
  if (summary.fit_points.size() >= 4) {
    try {
      summary.fit = analysis::fit_exponential(summary.fit_points);
    } catch (const std::invalid_argument&) {
      // all bins share one epsilon: nothing to fit
    }
  }
  return summary;
}

void write_fit_csv(std::ostream& out, const analysis::FitResult& fit, std::size_t points) {
  out << "a,b,c,se_a,se_b,se_c,rss,converged,iterations,points,message\n"
      << format_double(fit.a) << ',' << format_double(fit.b) << ',' << format_double(fit.c) << ','
      << format_double(fit.se_a) << ',' << format_double(fit.se_b) << ','
      << format_double(fit.se_c) << ',' << format_double(fit.rss) << ','
      << (fit.converged ? "true" : "false") << ',' << fit.iterations << ',' << points << ','
      << fit.message << '\n';
}

SweepSummary sweep_into(const ExperimentConfig& cfg, OutputSet& out, std::ostream& err) {
  if (cfg.seeds == 0) throw FormatError("a sweep needs at least one seed (--seeds >= 1)");
  const auto task = tasks::resolve_task(cfg.task);
  const auto gcfg = to_ga_config(cfg);
  const auto ensemble = run_ensemble(gcfg, task, cfg.base_seed, cfg.seeds, cfg.workers);
  const auto summary = summarize_sweep(cfg, task, ensemble);
  const auto meta = result_metadata(cfg);

  auto& runs = out.file("runs.csv");
  meta.write(runs);
  bool header = true;
  for (std::size_t i = 0; i < ensemble.records.size(); ++i) {
    if (ensemble.records[i]) {
      ga::write_generation_rows(runs, *ensemble.records[i], i, header);
      header = false;
    }
  }
  runs << '\n';
  header = true;
  for (std::size_t i = 0; i < ensemble.records.size(); ++i) {
    if (ensemble.records[i]) {
      ga::write_summary_rows(runs, *ensemble.records[i], i, header);
      header = false;
    }
  }
  bool any_failure = false;
  for (std::size_t i = 0; i < ensemble.errors.size(); ++i) {
    if (ensemble.errors[i].empty()) continue;
    if (!any_failure) runs << "\nrun_id,seed,error\n";
    any_failure = true;
    runs << i << ',' << (cfg.base_seed + i) << ',' << ensemble.errors[i] << '\n';
    err << "run " << i << " (seed " << cfg.base_seed + i << ") failed: " << ensemble.errors[i] << '\n';
  }
  if (summary.succeeded == 0) return summary;

  auto& stats = out.file("stats.csv");
  meta.write(stats);
  stats << "generation,mean,std,n,active\n";
  for (const auto& g : summary.stats.generations) {
    stats << g.generation << ',' << format_double(g.mean) << ',' << format_double(g.stddev) << ','
          << g.count << ',' << g.active << '\n';
  }

  if (!summary.analyses.empty()) {
    auto& ap = out.file("alpha_phi.csv");
    meta.write(ap);
    ap << "run_id,alpha,phi,epsilon_opt\n";
    for (const auto& a : summary.analyses) {
      ap << a.run_id << ',' << format_double(a.prepared.alpha) << ','
         << format_double(a.prepared.phi) << ','
         << format_double(ensemble.records[a.run_id]->epsilon_opt) << '\n';
    }
  }

  auto& ens = out.file("ensemble.csv");
  meta.write(ens);
  std::size_t balanced = 0;
  std::size_t alpha_runs = 0;
  for (const auto& a : summary.analyses) {
    const auto& rec = *ensemble.records[a.run_id];
    if (rec.converged() && rec.epsilon_opt < cfg.alpha_max_error) {
      ++alpha_runs;
      if (analysis::balance_condition_check(a.prepared, kBalanceTol)) ++balanced;
    }
  }
  ens << "quantity,value\n"
      << "runs," << cfg.seeds << '\n'
      << "succeeded," << summary.succeeded << '\n'
      << "failed," << summary.failed << '\n'
      << "converged," << summary.converged << '\n'
      << "generation_cap," << summary.capped << '\n'
      << "alpha_mean," << format_double(summary.stats.alpha_mean) << '\n'
      << "alpha_std," << format_double(summary.stats.alpha_stddev) << '\n'
      << "alpha_count," << summary.stats.alpha_count << '\n'
      << "balance_tol," << format_double(kBalanceTol) << '\n'
      << "balance_pass," << balanced << '\n'
      << "balance_checked," << alpha_runs << '\n'
      << '\n'
      << "q_c,count\n";
  for (const auto& [qc, count] : summary.stats.qc_histogram) ens << qc << ',' << count << '\n';

  if (!summary.fit_points.empty()) {
    auto& fp = out.file("fit_points.csv");
    meta.write(fp);
    write_fit_points(fp, summary.fit_points);
  }
  if (summary.fit) {
    auto& fit = out.file("fit.csv");
    meta.write(fit);
    write_fit_csv(fit, *summary.fit, summary.fit_points.size());
  }
  return summary;
}

int cmd_run(const ExperimentConfig& cfg, std::ostream& err) {
  ga::RunRecord record;
  tasks::TaskSpec task;
  try {
    task = tasks::resolve_task(cfg.task);
    record = ga::run(to_ga_config(cfg), task, cfg.base_seed);
  } catch (const std::exception& e) {
    err << "unigen run: " << e.what() << '\n';
    return kExitError;
  }

  auto meta = result_metadata(cfg);
  meta.add("seed", std::to_string(record.seed))
      .add("rounding_error_bound",
           genome::rounding_error_bound(record.config.codec, task.circuit.trainable_count()));

  OutputSet out(cfg.out);
  auto& run_csv = out.file("run.csv");
  meta.write(run_csv);
  ga::write_run_csv(run_csv, record, 0);

  const tasks::UnitaryBuilder builder(record.config.codec);
  const auto params = genome::decode_genome(record.best_genome, record.config.codec);
  const auto unitaries = builder.build(record.best_genome);

  nlohmann::json doc;
  doc["generator"] = std::string("unigen ") + kVersion;
  doc["task"] = task.name;
  doc["seed"] = record.seed;
  doc["slot_convention"] = tasks::kSlotConvention;
  doc["codec"] = {{"depth", record.config.codec.depth},
                  {"half_range", record.config.codec.half_range},
                  {"dim", record.config.codec.dim}};
  doc["fitness"] = record.best_final_fitness;
  doc["slots"] = nlohmann::json::array();
  for (std::size_t j = 0; j < record.best_genome.vectors.size(); ++j) {
    nlohmann::json slot;
    slot["slot"] = j + 1;
    slot["chromosomes"] = nlohmann::json::array();
    for (const auto& c : record.best_genome.vectors[j].chromosomes) slot["chromosomes"].push_back(c.to_string());
    slot["parameters"] = params[j].components;
    doc["slots"].push_back(std::move(slot));
  }
  out.file("genome.json") << doc.dump(2) << '\n';

  auto& side = out.file("analysis.csv");
  meta.write(side);
  side << "input,fidelity\n";
  const auto fids = tasks::pair_fidelities(task, unitaries);
  for (std::size_t i = 0; i < fids.size(); ++i) side << task.pairs[i].input << ',' << format_double(fids[i]) << '\n';
  if (task.circuit.dim == 2) {
    side << "\nslot,theta,axis_x,axis_y,axis_z,phase_re,phase_im,residual,degenerate\n";
    for (std::size_t j = 0; j < unitaries.size(); ++j) {
      const auto b = analysis::bloch_decompose(unitaries[j]);
      side << (j + 1) << ',' << format_double(b.theta) << ',' << format_double(b.axis[0]) << ','
           << format_double(b.axis[1]) << ',' << format_double(b.axis[2]) << ','
           << format_double(b.global_phase.real()) << ',' << format_double(b.global_phase.imag())
           << ',' << format_double(b.residual) << ',' << (b.degenerate ? "true" : "false") << '\n';
    }
  }
  if (const auto a = analyse_run(record, task, 0)) {
    side << "\nalpha,phi,degenerate,balance_ok\n"
         << format_double(a->prepared.alpha) << ',' << format_double(a->prepared.phi) << ','
         << (a->prepared.degenerate ? "true" : "false") << ','
         << (analysis::balance_condition_check(a->prepared, kBalanceTol) ? "true" : "false") << '\n';
    if (a->decision) {
      side << "\nsuccess_constant,success_balanced,orthogonality_defect\n"
           << format_double(a->decision->success_constant) << ','
           << format_double(a->decision->success_balanced) << ','
           << format_double(a->decision->orthogonality_defect) << '\n';
    }
  }

  try {
    out.commit();
  } catch (const std::exception& e) {
    err << "unigen run: " << e.what() << '\n';
    return kExitError;
  }
  return record.converged() ? kExitOk : kExitFlagged;
}

int cmd_sweep(const ExperimentConfig& cfg, std::ostream& err) {
  try {
    OutputSet out(cfg.out);
    const auto summary = sweep_into(cfg, out, err);
    out.file("effective_config.txt") << echo_config(cfg);
    if (summary.succeeded == 0) {
      err << "unigen sweep: every run failed\n";
      return kExitError;
    }
    out.commit();
    return (summary.failed > 0 || summary.capped > 0) ? kExitFlagged : kExitOk;
  } catch (const std::exception& e) {
    err << "unigen sweep: " << e.what() << '\n';
    return kExitError;
  }
}

int cmd_fit(const FitCommand& command, std::ostream& err) {
  std::vector<analysis::FitPoint> points;
  analysis::FitResult fit;
  try {
    points = read_fit_input(command.input, command.bins);
    fit = analysis::fit_exponential(points);
  } catch (const std::exception& e) {
    err << "unigen fit: " << e.what() << '\n';
    return kExitError;
  }
  csv::Metadata meta;
  meta.add("generator", std::string("unigen ") + kVersion)
      .add("input", command.input)
      .add("bins", std::to_string(command.bins))
      .add("model", "q_c = a * exp(-b * epsilon) + c");
  try {
    const fs::path target(command.output);
    OutputSet out(target.has_parent_path() ? target.parent_path() : fs::path("."));
    auto& f = out.file(target.filename().string());
    meta.write(f);
    write_fit_csv(f, fit, points.size());
    out.commit();
  } catch (const std::exception& e) {
    err << "unigen fit: " << e.what() << '\n';
    return kExitError;
  }
  if (!fit.converged) err << "unigen fit: fit did not converge (" << fit.message << ")\n";
  return fit.converged ? kExitOk : kExitFlagged;
}

ExperimentConfig reproduce_defaults() {
  ExperimentConfig cfg;
  cfg.seeds = 1000;
  cfg.threshold = 1e-4;
  cfg.horizon = 50;
  return cfg;
}

int cmd_reproduce(const std::string& figure, const ExperimentConfig& cfg, std::ostream& err) {
  try {
    OutputSet out(fs::path(cfg.out) / figure);
    int status = kExitOk;
    out.file("effective_config.txt") << echo_config(cfg);

    auto sweep_for = [&](std::size_t npop, const std::string& subdir) {
      ExperimentConfig c = cfg;
      c.npop = npop;
      OutputSet sub(out.dir() / subdir);
      auto summary = sweep_into(c, sub, err);
      if (summary.succeeded == 0) throw NumericFailure("every run failed for npop " + std::to_string(npop));
      sub.commit();
      return summary;
    };

    if (figure == "fig5") {
      auto& curves = out.file("curves.csv");
      result_metadata(cfg).write(curves);
      curves << "npop,generation,mean_fitness,std,mean_error,n,active\n";
      for (const std::size_t npop : {10, 50, 100}) {
        const auto s = sweep_for(npop, "npop_" + std::to_string(npop));
        for (const auto& g : s.stats.generations) {
          curves << npop << ',' << g.generation << ',' << format_double(g.mean) << ','
                 << format_double(g.stddev) << ',' << format_double(1.0 - g.mean) << ',' << g.count
                 << ',' << g.active << '\n';
        }
      }
    } else if (figure == "fig6") {
      const auto s = sweep_for(cfg.npop, "npop_" + std::to_string(cfg.npop));
      auto& summary = out.file("alpha_summary.csv");
      result_metadata(cfg).write(summary);
      summary << "npop,alpha_mean,alpha_std,alpha_count,target\n"
              << cfg.npop << ',' << format_double(s.stats.alpha_mean) << ','
              << format_double(s.stats.alpha_stddev) << ',' << s.stats.alpha_count << ','
              << format_double(1.0 / std::numbers::sqrt2) << '\n';
    } else if (figure == "fig7") {
      auto& fits = out.file("fits.csv");
      result_metadata(cfg).write(fits);
      fits << "npop,a,b,c,se_a,se_b,se_c,rss,converged,points,max_q_c\n";
      for (const std::size_t npop : {100, 200, 300, 400}) {
        const auto s = sweep_for(npop, "npop_" + std::to_string(npop));
        std::size_t max_qc = 0;
        for (const auto& [qc, count] : s.stats.qc_histogram) max_qc = std::max(max_qc, qc);
        if (!s.fit) {
          fits << npop << ",,,,,,,,false," << s.fit_points.size() << ',' << max_qc << '\n';
          status = kExitFlagged;
          continue;
        }
        const auto& f = *s.fit;
        fits << npop << ',' << format_double(f.a) << ',' << format_double(f.b) << ','
             << format_double(f.c) << ',' << format_double(f.se_a) << ',' << format_double(f.se_b)
             << ',' << format_double(f.se_c) << ',' << format_double(f.rss) << ','
             << (f.converged ? "true" : "false") << ',' << s.fit_points.size() << ',' << max_qc << '\n';
        if (!f.converged) status = kExitFlagged;
      }
    } else {
      err << "unigen reproduce: unknown figure '" << figure << "' (expected fig5, fig6 or fig7)\n";
      return kExitError;
    }
    out.commit();
    return status;
  } catch (const std::exception& e) {
    err << "unigen reproduce: " << e.what() << '\n';
    return kExitError;
  }
}

}  // namespace unigen::cli
