#pragma once

#include <cstddef>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "unigen/genome.hpp"
#include "unigen/linalg.hpp"

namespace unigen::tasks {

using linalg::ComplexMatrix;
using linalg::StateVector;

/// Input label -> fixed unitary. Every image must be unitary within 1e-12.
struct OracleFamily {
  std::string name;
  std::map<std::string, ComplexMatrix> table;
};

struct Slot {
  enum class Kind { kTrainable, kOracle };
  Kind kind = Kind::kTrainable;
  /// Trainable: slot number j in 1..N_u. Oracle: index into CircuitTemplate::oracles.
  std::size_t index = 1;

  static Slot trainable(std::size_t j) { return {Kind::kTrainable, j}; }
  static Slot oracle(std::size_t family) { return {Kind::kOracle, family}; }
};

/// Slot sequence; slots.front() acts first on the state, so the total
/// operator is slots[n-1] ... slots[1] slots[0] ("rightmost-acts-first").
struct CircuitTemplate {
  std::size_t dim = 2;
  std::vector<Slot> slots;
  std::vector<OracleFamily> oracles;

  [[nodiscard]] std::size_t trainable_count() const;
  /// Trainable indices 1..N_u without gaps or repeats, at least one of them,
  /// oracle references in range, oracle images unitary and of size dim.
  void validate() const;
};

struct TrainingPair {
  std::string input;
  StateVector target;
};

struct TaskSpec {
  std::string name;
  CircuitTemplate circuit;
  StateVector initial_state;
  std::vector<TrainingPair> pairs;

  /// Template checks plus: normalized states of size dim, non-empty T, every
  /// label resolvable by every oracle slot. Throws FormatError.
  void validate() const;
};

inline constexpr const char* kSlotConvention = "rightmost-acts-first";

/// Product of the slot matrices for input x, given one unitary per trainable
/// slot (ordered by slot number).
ComplexMatrix compose_total(const CircuitTemplate& circuit,
                            std::span<const ComplexMatrix> trainable, const std::string& x);
ComplexMatrix compose_total(const CircuitTemplate& circuit, const genome::Genome& g,
                            const genome::CodecConfig& codec, const std::string& x);

/// Applies the slots to `state` one by one (no matrix product is formed).
StateVector propagate(const CircuitTemplate& circuit, std::span<const ComplexMatrix> trainable,
                      const StateVector& state, const std::string& x);

/// Decodes a genome into one unitary per trainable slot. d = 2 uses the SU(2)
/// closed form; larger d goes through the eigendecomposition path.
class UnitaryBuilder {
 public:
  explicit UnitaryBuilder(genome::CodecConfig codec);
  [[nodiscard]] std::vector<ComplexMatrix> build(const genome::Genome& g) const;
  [[nodiscard]] ComplexMatrix build_one(const linalg::ParameterVector& p) const;
  [[nodiscard]] const genome::CodecConfig& codec() const noexcept { return codec_; }

 private:
  genome::CodecConfig codec_;
  std::vector<ComplexMatrix> generators_;
};

/// Mean fidelity over T of the outputs against their targets.
double mean_fidelity(const TaskSpec& task, std::span<const ComplexMatrix> trainable);

/// Per-pair fidelities, in the order of task.pairs.
std::vector<double> pair_fidelities(const TaskSpec& task, std::span<const ComplexMatrix> trainable);

enum class BooleanFunction { kConst0, kConst1, kIdentity, kNegation };

const char* function_label(BooleanFunction f);
/// U|k> = exp(i pi f(k)) |k>, k in {0, 1}.
ComplexMatrix deutsch_oracle(BooleanFunction f);

struct DeutschOptions {
  BooleanFunction constant = BooleanFunction::kConst0;
  BooleanFunction balanced = BooleanFunction::kIdentity;
  /// Train on all four one-bit functions instead of one representative each.
  bool all_functions = false;
};

/// d = 2, slots [U_1, oracle, U_3], |psi_in> = |0>, constant -> |0>, balanced -> |1>.
TaskSpec deutsch_task(const DeutschOptions& options = {});

struct DecisionOutcome {
  double success_constant = 0.0;  // |<0|out_c>|^2
  double success_balanced = 0.0;  // |<1|out_b>|^2
  double orthogonality_defect = 0.0;  // |<out_c|out_b>|^2
};

DecisionOutcome decision_outcome(const StateVector& out_constant, const StateVector& out_balanced);

/// Built-in tasks by name ("deutsch", "deutsch-all"). Throws FormatError if unknown.
TaskSpec builtin_task(const std::string& name);
bool is_builtin_task(const std::string& name);

/// Task files are JSON; see README for the schema.
TaskSpec parse_task(const std::string& json_text);
TaskSpec load_task_file(const std::string& path);
std::string task_to_json(const TaskSpec& task);

/// A built-in name or a path to a task file.
TaskSpec resolve_task(const std::string& name_or_path);

}  // namespace unigen::tasks
