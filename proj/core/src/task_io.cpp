#include <fstream>
#include <sstream>

#include <json.hpp>

#include "unigen/error.hpp"
#include "unigen/tasks.hpp"

namespace unigen::tasks {

namespace {

using nlohmann::json;
using linalg::Complex;

Complex parse_complex(const json& j) {
  if (j.is_number()) return {j.get<double>(), 0.0};
  if (!j.is_array() || j.size() != 2) throw FormatError("complex values are [re, im] pairs");
  return {j[0].get<double>(), j[1].get<double>()};
}

json complex_json(Complex z) { return json::array({z.real(), z.imag()}); }

StateVector parse_state(const json& j, std::size_t dim) {
  if (!j.is_array() || j.size() != dim) throw FormatError("state vector must have d entries");
  std::vector<Complex> amps;
  for (const auto& z : j) amps.push_back(parse_complex(z));
  return StateVector(std::move(amps));
}

json state_json(const StateVector& s) {
  json out = json::array();
  for (const auto& z : s.amplitudes()) out.push_back(complex_json(z));
  return out;
}

ComplexMatrix parse_matrix(const json& j, std::size_t dim) {
  if (!j.is_array() || j.size() != dim) throw FormatError("matrix must have d rows");
  std::vector<Complex> entries;
  for (const auto& row : j) {
    if (!row.is_array() || row.size() != dim) throw FormatError("matrix rows must have d entries");
    for (const auto& z : row) entries.push_back(parse_complex(z));
  }
  return ComplexMatrix(dim, std::move(entries));
}

json matrix_json(const ComplexMatrix& m) {
  json out = json::array();
  for (std::size_t r = 0; r < m.dim(); ++r) {
    json row = json::array();
    for (std::size_t c = 0; c < m.dim(); ++c) row.push_back(complex_json(m(r, c)));
    out.push_back(std::move(row));
  }
  return out;
}

}  // namespace

TaskSpec parse_task(const std::string& json_text) {
  TaskSpec task;
  try {
    const json doc = json::parse(json_text);
    task.name = doc.value("name", std::string("custom"));
    if (doc.contains("convention") && doc.at("convention").get<std::string>() != kSlotConvention) {
      throw FormatError(std::string("unsupported slot convention; expected '") + kSlotConvention + "'");
    }
    const auto dim = doc.at("dimension").get<std::size_t>();
    if (dim < 2) throw FormatError("task dimension must be >= 2");
    task.circuit.dim = dim;

    std::map<std::string, std::size_t> family_index;
    if (doc.contains("oracles")) {
      for (const auto& [name, table] : doc.at("oracles").items()) {
        OracleFamily family{name, {}};
        for (const auto& [label, m] : table.items()) family.table.emplace(label, parse_matrix(m, dim));
        family_index.emplace(name, task.circuit.oracles.size());
        task.circuit.oracles.push_back(std::move(family));
      }
    }
    for (const auto& s : doc.at("slots")) {
      if (s.contains("trainable")) {
        task.circuit.slots.push_back(Slot::trainable(s.at("trainable").get<std::size_t>()));
      } else if (s.contains("oracle")) {
        const auto name = s.at("oracle").get<std::string>();
        const auto it = family_index.find(name);
        if (it == family_index.end()) throw FormatError("slot refers to unknown oracle '" + name + "'");
        task.circuit.slots.push_back(Slot::oracle(it->second));
      } else {
        throw FormatError("slot entries need a 'trainable' or 'oracle' key");
      }
    }
    task.initial_state = parse_state(doc.at("initial_state"), dim);
    for (const auto& p : doc.at("pairs")) {
      task.pairs.push_back({p.at("input").get<std::string>(), parse_state(p.at("target"), dim)});
    }
  } catch (const json::exception& e) {
    throw FormatError(std::string("task file: ") + e.what());
  } catch (const InvalidDimension& e) {
    throw FormatError(std::string("task file: ") + e.what());
  }
  task.validate();
  return task;
}

TaskSpec load_task_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw FormatError("cannot open task file '" + path + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_task(buffer.str());
}

std::string task_to_json(const TaskSpec& task) {
  json doc;
  doc["name"] = task.name;
  doc["dimension"] = task.circuit.dim;
  doc["convention"] = kSlotConvention;
  json oracles = json::object();
  for (const auto& family : task.circuit.oracles) {
    json table = json::object();
    for (const auto& [label, m] : family.table) table[label] = matrix_json(m);
    oracles[family.name] = std::move(table);
  }
  doc["oracles"] = std::move(oracles);
  json slots = json::array();
  for (const auto& s : task.circuit.slots) {
    if (s.kind == Slot::Kind::kTrainable) {
      slots.push_back({{"trainable", s.index}});
    } else {
      slots.push_back({{"oracle", task.circuit.oracles[s.index].name}});
    }
  }
  doc["slots"] = std::move(slots);
  doc["initial_state"] = state_json(task.initial_state);
  json pairs = json::array();
  for (const auto& p : task.pairs) pairs.push_back({{"input", p.input}, {"target", state_json(p.target)}});
  doc["pairs"] = std::move(pairs);
  return doc.dump(2);
}

}  // namespace unigen::tasks
