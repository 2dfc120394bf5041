#include "unigen/tasks.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "unigen/error.hpp"

namespace unigen::tasks {

namespace {

constexpr double kUnitaryTol = 1e-12;
constexpr double kNormTol = 1e-10;

const ComplexMatrix& slot_matrix(const CircuitTemplate& circuit, const Slot& slot,
                                 std::span<const ComplexMatrix> trainable, const std::string& x) {
  if (slot.kind == Slot::Kind::kTrainable) {
    if (slot.index == 0 || slot.index > trainable.size()) {
      throw InvalidDimension("no unitary supplied for trainable slot " + std::to_string(slot.index));
    }
    return trainable[slot.index - 1];
  }
  const auto& family = circuit.oracles.at(slot.index);
  const auto it = family.table.find(x);
  if (it == family.table.end()) {
    throw FormatError("oracle '" + family.name + "' cannot resolve input label '" + x + "'");
  }
  return it->second;
}

}  // namespace

std::size_t CircuitTemplate::trainable_count() const {
  return static_cast<std::size_t>(std::count_if(slots.begin(), slots.end(), [](const Slot& s) {
    return s.kind == Slot::Kind::kTrainable;
  }));
}

void CircuitTemplate::validate() const {
  if (dim < 2) throw FormatError("task dimension must be >= 2");
  const std::size_t n_u = trainable_count();
  if (n_u == 0) throw FormatError("circuit needs at least one trainable slot");

  std::vector<bool> seen(n_u + 1, false);
  for (const auto& s : slots) {
    if (s.kind == Slot::Kind::kTrainable) {
      if (s.index < 1 || s.index > n_u || seen[s.index]) {
        throw FormatError("trainable slot indices must be 1..N_u without gaps or repeats");
      }
      seen[s.index] = true;
    } else if (s.index >= oracles.size()) {
      throw FormatError("oracle slot refers to unknown oracle family " + std::to_string(s.index));
    }
  }
  for (const auto& family : oracles) {
    for (const auto& [label, m] : family.table) {
      if (m.dim() != dim) {
        throw FormatError("oracle '" + family.name + "' image for '" + label + "' has wrong size");
      }
      if (linalg::unitarity_defect(m) > kUnitaryTol) {
        throw FormatError("oracle '" + family.name + "' image for '" + label + "' is not unitary");
      }
    }
  }
}

void TaskSpec::validate() const {
  circuit.validate();
  if (initial_state.dim() != circuit.dim ||
      std::abs(initial_state.norm() - 1.0) > kNormTol) {
    throw FormatError("initial state must be a normalized vector of dimension d");
  }
  if (pairs.empty()) throw FormatError("task needs at least one input-target pair");
  for (const auto& pair : pairs) {
    if (pair.target.dim() != circuit.dim || std::abs(pair.target.norm() - 1.0) > kNormTol) {
      throw FormatError("target for '" + pair.input + "' must be normalized and of dimension d");
    }
    for (const auto& slot : circuit.slots) {
      if (slot.kind != Slot::Kind::kOracle) continue;
      const auto& family = circuit.oracles[slot.index];
      if (!family.table.contains(pair.input)) {
        throw FormatError("oracle '" + family.name + "' cannot resolve input label '" +
                          pair.input + "'");
      }
    }
  }
}

ComplexMatrix compose_total(const CircuitTemplate& circuit,
                            std::span<const ComplexMatrix> trainable, const std::string& x) {
  ComplexMatrix total = ComplexMatrix::identity(circuit.dim);
  for (const auto& slot : circuit.slots) {
    total = linalg::matmul(slot_matrix(circuit, slot, trainable, x), total);
  }
  return total;
}

ComplexMatrix compose_total(const CircuitTemplate& circuit, const genome::Genome& g,
                            const genome::CodecConfig& codec, const std::string& x) {
  g.check_shape(codec, circuit.trainable_count());
  const auto unitaries = UnitaryBuilder(codec).build(g);
  return compose_total(circuit, unitaries, x);
}

StateVector propagate(const CircuitTemplate& circuit, std::span<const ComplexMatrix> trainable,
                      const StateVector& state, const std::string& x) {
  StateVector s = state;
  for (const auto& slot : circuit.slots) s = linalg::apply(slot_matrix(circuit, slot, trainable, x), s);
  return s;
}

UnitaryBuilder::UnitaryBuilder(genome::CodecConfig codec) : codec_(codec) {
  codec_.validate();
  if (codec_.dim != 2) generators_ = linalg::gell_mann_generators(codec_.dim);
}

ComplexMatrix UnitaryBuilder::build_one(const linalg::ParameterVector& p) const {
  if (codec_.dim == 2) return linalg::su2_closed_form(p);
  return linalg::unitary_from_params(p, generators_);
}

std::vector<ComplexMatrix> UnitaryBuilder::build(const genome::Genome& g) const {
  std::vector<ComplexMatrix> out;
  out.reserve(g.vectors.size());
  for (const auto& v : g.vectors) out.push_back(build_one(genome::decode_vector(v, codec_)));
  return out;
}

std::vector<double> pair_fidelities(const TaskSpec& task, std::span<const ComplexMatrix> trainable) {
  std::vector<double> out;
  out.reserve(task.pairs.size());
  for (const auto& pair : task.pairs) {
    const StateVector output = propagate(task.circuit, trainable, task.initial_state, pair.input);
    out.push_back(linalg::fidelity(pair.target, output));
  }
  return out;
}

double mean_fidelity(const TaskSpec& task, std::span<const ComplexMatrix> trainable) {
  const auto f = pair_fidelities(task, trainable);
  double sum = 0.0;
  for (const double v : f) sum += v;
  return sum / static_cast<double>(f.size());
}

const char* function_label(BooleanFunction f) {
  switch (f) {
    case BooleanFunction::kConst0: return "const0";
    case BooleanFunction::kConst1: return "const1";
    case BooleanFunction::kIdentity: return "identity";
    case BooleanFunction::kNegation: return "negation";
  }
  return "unknown";
}

ComplexMatrix deutsch_oracle(BooleanFunction f) {
  auto value = [f](int k) {
    switch (f) {
      case BooleanFunction::kConst0: return 0;
      case BooleanFunction::kConst1: return 1;
      case BooleanFunction::kIdentity: return k;
      case BooleanFunction::kNegation: return 1 - k;
    }
    return 0;
  };
  // e^{i pi f(k)} is exactly +-1
  const linalg::Complex diag[2] = {value(0) ? -1.0 : 1.0, value(1) ? -1.0 : 1.0};
  return ComplexMatrix::diagonal(diag);
}

TaskSpec deutsch_task(const DeutschOptions& options) {
  TaskSpec task;
  task.name = options.all_functions ? "deutsch-all" : "deutsch";
  task.circuit.dim = 2;

  OracleFamily oracle{"deutsch", {}};
  const auto zero = StateVector::basis(2, 0);
  const auto one = StateVector::basis(2, 1);
  auto add = [&](BooleanFunction f, const StateVector& target) {
    oracle.table.emplace(function_label(f), deutsch_oracle(f));
    task.pairs.push_back({function_label(f), target});
  };
  if (options.all_functions) {
    add(BooleanFunction::kConst0, zero);
    add(BooleanFunction::kConst1, zero);
    add(BooleanFunction::kIdentity, one);
    add(BooleanFunction::kNegation, one);
  } else {
    add(options.constant, zero);
    add(options.balanced, one);
  }
  task.circuit.oracles.push_back(std::move(oracle));
  task.circuit.slots = {Slot::trainable(1), Slot::oracle(0), Slot::trainable(2)};
  task.initial_state = zero;
  task.validate();
  return task;
}

DecisionOutcome decision_outcome(const StateVector& out_constant, const StateVector& out_balanced) {
  const auto dim = out_constant.dim();
  return {linalg::fidelity(StateVector::basis(dim, 0), out_constant),
          linalg::fidelity(StateVector::basis(dim, 1), out_balanced),
          linalg::fidelity(out_constant, out_balanced)};
}

bool is_builtin_task(const std::string& name) {
  return name == "deutsch" || name == "deutsch-all";
}

TaskSpec builtin_task(const std::string& name) {
  if (name == "deutsch") return deutsch_task();
  if (name == "deutsch-all") return deutsch_task({.all_functions = true});
  throw FormatError("unknown built-in task '" + name + "'");
}

TaskSpec resolve_task(const std::string& name_or_path) {
  if (is_builtin_task(name_or_path)) return builtin_task(name_or_path);
  return load_task_file(name_or_path);
}

}  // namespace unigen::tasks
