// Copyright 2026 The zne-lab Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "zne/json_io.hpp"

#include <cerrno>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <sstream>

namespace zne {

namespace {

using nlohmann::json;

const json& require_field(const json& j, const char* field) {
  if (!j.is_object() || !j.contains(field)) {
    throw ValidationError(std::string("missing field '") + field + "'");
  }
  return j.at(field);
}

double number_field(const json& v, const char* field) {
  if (v.is_number()) return v.get<double>();
  if (v.is_string()) return parse_bracketed(v.get<std::string>());
  throw ValidationError(std::string("field '") + field +
                        "' must be a number or bracketed string");
}

double number_member(const json& j, const char* field) {
  return number_field(require_field(j, field), field);
}

std::vector<double> number_array(const json& v, const char* field) {
  if (!v.is_array()) {
    throw ValidationError(std::string("field '") + field +
                          "' must be an array");
  }
  std::vector<double> out;
  out.reserve(v.size());
  for (const auto& x : v) out.push_back(number_field(x, field));
  return out;
}

long long integer_field(const json& j, const char* field) {
  const json& v = require_field(j, field);
  if (!v.is_number_integer()) {
    throw ValidationError(std::string("field '") + field +
                          "' must be an integer");
  }
  return v.get<long long>();
}

std::string string_field(const json& j, const char* field) {
  const json& v = require_field(j, field);
  if (!v.is_string()) {
    throw ValidationError(std::string("field '") + field +
                          "' must be a string");
  }
  return v.get<std::string>();
}

json complex_to_json(const std::complex<double>& z) {
  return json::array({z.real(), z.imag()});
}

std::complex<double> complex_from_json(const json& v) {
  if (!v.is_array() || v.size() != 2 || !v[0].is_number() ||
      !v[1].is_number()) {
    throw ValidationError("field 'matrix' entries must be [re, im] pairs");
  }
  return {v[0].get<double>(), v[1].get<double>()};
}

}  // namespace

nlohmann::json circuit_to_json(const Circuit& circuit) {
  json gates = json::array();
  for (const auto& gate : circuit.gates()) {
    if (const auto* cx = std::get_if<CnotGate>(&gate)) {
      gates.push_back({{"type", "cnot"},
                       {"control", cx->control},
                       {"target", cx->target}});
    } else {
      const auto& u = std::get<OneQubitGate>(gate);
      gates.push_back(
          {{"type", "u1q"},
           {"qubit", u.qubit},
           {"matrix",
            json::array({json::array({complex_to_json(u.matrix(0, 0)),
                                      complex_to_json(u.matrix(0, 1))}),
                         json::array({complex_to_json(u.matrix(1, 0)),
                                      complex_to_json(u.matrix(1, 1))})})}});
    }
  }
  return {{"n_qubits", circuit.n_qubits()},
          {"initial_state", circuit.initial_state()},
          {"gates", gates}};
}

Circuit circuit_from_json(const nlohmann::json& j) {
  const long long n_qubits = integer_field(j, "n_qubits");
  if (n_qubits < 1) {
    throw ValidationError("field 'n_qubits' must be positive");
  }
  Circuit circuit(static_cast<std::size_t>(n_qubits),
                  string_field(j, "initial_state"));
  const json& gates = require_field(j, "gates");
  if (!gates.is_array()) {
    throw ValidationError("field 'gates' must be an array");
  }
  for (const auto& g : gates) {
    const std::string type = string_field(g, "type");
    if (type == "cnot") {
      const long long control = integer_field(g, "control");
      const long long target = integer_field(g, "target");
      if (control < 0 || target < 0) {
        throw ValidationError("field 'control'/'target' must be non-negative");
      }
      circuit.append(CnotGate{static_cast<QubitId>(control),
                              static_cast<QubitId>(target)});
    } else if (type == "u1q") {
      const long long qubit = integer_field(g, "qubit");
      if (qubit < 0) {
        throw ValidationError("field 'qubit' must be non-negative");
      }
      const json& m = require_field(g, "matrix");
      if (!m.is_array() || m.size() != 2 || !m[0].is_array() ||
          !m[1].is_array() || m[0].size() != 2 || m[1].size() != 2) {
        throw ValidationError("field 'matrix' must be a 2x2 array");
      }
      Eigen::Matrix2cd u;
      for (int r = 0; r < 2; ++r) {
        for (int c = 0; c < 2; ++c) {
          u(r, c) = complex_from_json(m[static_cast<std::size_t>(r)]
                                       [static_cast<std::size_t>(c)]);
        }
      }
      circuit.append(OneQubitGate{static_cast<QubitId>(qubit), u});
    } else {
      throw ValidationError("field 'type' must be 'cnot' or 'u1q'");
    }
  }
  return circuit;
}

nlohmann::json method_to_json(const Method& method) {
  struct Visitor {
    json operator()(const UnmitigatedMethod&) const {
      return {{"name", "none"}};
    }
    json operator()(const FiimMethod& m) const {
      return {{"name", "fiim"}, {"order", m.order}};
    }
    json operator()(const RiimMethod&) const { return {{"name", "riim"}}; }
    json operator()(const LiimFiimMethod& m) const {
      return {{"name", "liim_fiim"}, {"list", m.list}};
    }
    json operator()(const LiimRiimMethod& m) const {
      return {{"name", "liim_riim"}, {"list", m.list}};
    }
    json operator()(const SiimMethod& m) const {
      return {{"name", "siim"}, {"sets", m.n_sets}};
    }
  };
  return std::visit(Visitor{}, method);
}

nlohmann::json plan_to_json(const MitigationPlan& plan) {
  json entries = json::array();
  for (const auto& entry : plan.entries) {
    const auto [num, den] = to_int64_pair(entry.coefficient);
    entries.push_back({{"label", entry.label},
                       {"coefficient", {{"num", num}, {"den", den}}},
                       {"replication", entry.replication},
                       {"circuit", circuit_to_json(entry.circuit)}});
  }
  return {{"schema_version", 1},
          {"method", method_to_json(plan.method)},
          {"base", circuit_to_json(plan.base)},
          {"entries", entries}};
}

nlohmann::json shot_result_to_json(const ShotResult& result) {
  json counts = json::object();
  for (const auto& [bits, count] : result.counts) counts[bits] = count;
  return {{"shots", result.shots}, {"seed", result.seed}, {"counts", counts}};
}

ShotResult shot_result_from_json(const nlohmann::json& j) {
  ShotResult result;
  result.shots = integer_field(j, "shots");
  const json& seed = require_field(j, "seed");
  if (!seed.is_number_unsigned() && !seed.is_number_integer()) {
    throw ValidationError("field 'seed' must be an integer");
  }
  result.seed = seed.get<std::uint64_t>();
  const json& counts = require_field(j, "counts");
  if (!counts.is_object()) {
    throw ValidationError("field 'counts' must be an object");
  }
  long long total = 0;
  for (const auto& [bits, count] : counts.items()) {
    if (!count.is_number_integer() || count.get<long long>() < 0) {
      throw ValidationError("field 'counts' values must be non-negative "
                            "integers");
    }
    result.counts[bits] = count.get<long long>();
    total += count.get<long long>();
  }
  if (total != result.shots) {
    throw ValidationError("field 'counts' must sum to 'shots'");
  }
  return result;
}

nlohmann::json estimate_to_json(const Estimate& estimate) {
  return {{"value", estimate.value},
          {"std_error", std::sqrt(estimate.variance)},
          {"shots_used", estimate.shots_used}};
}

nlohmann::json profiles_to_json(const std::vector<DeviceProfile>& profiles) {
  json systems = json::array();
  for (const auto& p : profiles) {
    json system = {{"name", p.name}};
    if (p.retired) {
      system["retired"] = true;
      systems.push_back(system);
      continue;
    }
    json qubits = json::array();
    for (std::size_t q = 0; q < p.t1_us.size(); ++q) {
      qubits.push_back({{"t1_us", p.t1_us[q]},
                        {"t2_us", p.t2_us[q]},
                        {"frequency_ghz", p.frequency_ghz[q]},
                        {"p0_given_1", p.p0_given_1[q]},
                        {"p1_given_0", p.p1_given_0[q]}});
    }
    json cx = json::array();
    for (const auto& [pair, e] : p.cx_error) {
      json item = {{"pair", {pair.first, pair.second}}, {"error", e}};
      const auto len = p.cx_length_ns.find(pair);
      if (len != p.cx_length_ns.end()) item["length_ns"] = len->second;
      cx.push_back(item);
    }
    system["retired"] = false;
    system["qubits"] = qubits;
    system["x_error"] = p.x_error;
    system["x_length_ns"] = p.x_length_ns;
    system["cx"] = cx;
    systems.push_back(system);
  }
  return {{"systems", systems}};
}

std::vector<DeviceProfile> profiles_from_json(const nlohmann::json& j) {
  const json& systems = require_field(j, "systems");
  if (!systems.is_array() || systems.empty()) {
    throw ValidationError("field 'systems' must be a non-empty array");
  }
  std::vector<DeviceProfile> out;
  for (const auto& system : systems) {
    DeviceProfile p;
    p.name = string_field(system, "name");
    if (system.contains("retired")) {
      const json& r = system.at("retired");
      if (!r.is_boolean()) {
        throw ValidationError("field 'retired' must be a boolean");
      }
      p.retired = r.get<bool>();
    }
    if (p.retired) {
      out.push_back(std::move(p));
      continue;
    }
    const json& qubits = require_field(system, "qubits");
    if (!qubits.is_array() || qubits.empty()) {
      throw ValidationError("field 'qubits' must be a non-empty array");
    }
    for (const auto& q : qubits) {
      p.t1_us.push_back(number_member(q, "t1_us"));
      p.t2_us.push_back(number_member(q, "t2_us"));
      p.frequency_ghz.push_back(number_member(q, "frequency_ghz"));
      p.p0_given_1.push_back(number_member(q, "p0_given_1"));
      p.p1_given_0.push_back(number_member(q, "p1_given_0"));
    }
    p.x_error = number_array(require_field(system, "x_error"), "x_error");
    p.x_length_ns = number_member(system, "x_length_ns");
    const json& cx = require_field(system, "cx");
    if (!cx.is_array()) {
      throw ValidationError("field 'cx' must be an array");
    }
    for (const auto& item : cx) {
      const json& pair = require_field(item, "pair");
      if (!pair.is_array() || pair.size() != 2 ||
          !pair[0].is_number_integer() || !pair[1].is_number_integer()) {
        throw ValidationError("field 'pair' must be two qubit indices");
      }
      const auto a = pair[0].get<long long>();
      const auto b = pair[1].get<long long>();
      if (a < 0 || b < 0 || a == b) {
        throw ValidationError("field 'pair' must name two distinct qubits");
      }
      const auto lo = static_cast<std::size_t>(std::min(a, b));
      const auto hi = static_cast<std::size_t>(std::max(a, b));
      const double error = number_member(item, "error");
      const auto existing = p.cx_error.find({lo, hi});
      if (existing != p.cx_error.end() && existing->second != error) {
        throw ValidationError("field 'cx' assigns pair (" +
                              std::to_string(lo) + ", " + std::to_string(hi) +
                              ") two different errors");
      }
      p.cx_error[{lo, hi}] = error;
      if (item.contains("length_ns")) {
        p.cx_length_ns[{lo, hi}] = number_member(item, "length_ns");
      }
    }
    p.validate();
    out.push_back(std::move(p));
  }
  return out;
}

double parse_bracketed(const std::string& text) {
  std::string rewritten;
  const auto open = text.find('[');
  if (open == std::string::npos) {
    rewritten = text;
  } else {
    if (text.back() != ']' || open == 0) {
      throw ValidationError("bad bracketed number '" + text + "'");
    }
    rewritten = text.substr(0, open) + "e" +
                text.substr(open + 1, text.size() - open - 2);
  }
  errno = 0;
  char* end = nullptr;
  const double value = std::strtod(rewritten.c_str(), &end);
  if (end == rewritten.c_str() || *end != '\0' || errno == ERANGE) {
    throw ValidationError("bad bracketed number '" + text + "'");
  }
  return value;
}

std::vector<DeviceProfile> convert_property_table(const std::string& text) {
  enum class Section { kNone, kQubits, kGates, kRetired };
  Section section = Section::kNone;

  struct Row {
    std::vector<std::string> tokens;
  };
  std::map<std::string, Row> qubit_rows;
  std::map<std::string, Row> gate_rows;
  std::vector<std::string> order;  // systems in first-seen order
  std::vector<std::string> retired;

  std::istringstream stream(text);
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(stream, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    std::istringstream ls(line);
    std::vector<std::string> tokens;
    std::string tok;
    while (ls >> tok) tokens.push_back(tok);
    if (tokens.empty()) continue;
    if (tokens[0] == "[qubits]") {
      section = Section::kQubits;
      continue;
    }
    if (tokens[0] == "[gates]") {
      section = Section::kGates;
      continue;
    }
    if (tokens[0] == "[retired]") {
      section = Section::kRetired;
      continue;
    }
    const std::string where = " (line " + std::to_string(line_no) + ")";
    switch (section) {
      case Section::kNone:
        throw ValidationError("table: data before any section header" + where);
      case Section::kQubits:
        if (tokens.size() != 6) {
          throw ValidationError("table: qubit rows need name plus five "
                                "value pairs" + where);
        }
        if (!qubit_rows.emplace(tokens[0], Row{tokens}).second) {
          throw ValidationError("table: duplicate system '" + tokens[0] +
                                "'" + where);
        }
        order.push_back(tokens[0]);
        break;
      case Section::kGates:
        if (tokens.size() != 5) {
          throw ValidationError("table: gate rows need name plus four "
                                "values" + where);
        }
        if (!gate_rows.emplace(tokens[0], Row{tokens}).second) {
          throw ValidationError("table: duplicate system '" + tokens[0] +
                                "'" + where);
        }
        break;
      case Section::kRetired:
        if (tokens.size() != 1) {
          throw ValidationError("table: retired rows hold one name" + where);
        }
        retired.push_back(tokens[0]);
        break;
    }
  }

  const auto split_pair = [](const std::string& s) {
    const auto comma = s.find(',');
    if (comma == std::string::npos || comma == 0 || comma + 1 == s.size()) {
      throw ValidationError("table: expected 'a,b' value pair, got '" + s +
                            "'");
    }
    return std::pair<double, double>{parse_bracketed(s.substr(0, comma)),
                                     parse_bracketed(s.substr(comma + 1))};
  };

  std::vector<DeviceProfile> out;
  for (const auto& name : order) {
    const auto gates = gate_rows.find(name);
    if (gates == gate_rows.end()) {
      throw ValidationError("table: system '" + name + "' has no gate row");
    }
    const auto& q = qubit_rows.at(name).tokens;
    const auto& g = gates->second.tokens;
    DeviceProfile p;
    p.name = name;
    const auto t1 = split_pair(q[1]);
    const auto t2 = split_pair(q[2]);
    const auto freq = split_pair(q[3]);
    const auto p01 = split_pair(q[4]);
    const auto p10 = split_pair(q[5]);
    p.t1_us = {t1.first, t1.second};
    p.t2_us = {t2.first, t2.second};
    p.frequency_ghz = {freq.first, freq.second};
    p.p0_given_1 = {p01.first, p01.second};
    p.p1_given_0 = {p10.first, p10.second};
    const auto xerr = split_pair(g[1]);
    p.x_error = {xerr.first, xerr.second};
    p.x_length_ns = parse_bracketed(g[2]);
    p.cx_error[{0, 1}] = parse_bracketed(g[3]);
    p.cx_length_ns[{0, 1}] = parse_bracketed(g[4]);
    p.validate();
    out.push_back(std::move(p));
  }
  for (const auto& name : retired) {
    DeviceProfile p;
    p.name = name;
    p.retired = true;
    out.push_back(std::move(p));
  }
  if (out.empty()) {
    throw ValidationError("table: no systems found");
  }
  return out;
}

std::vector<DeviceProfile> load_device_profiles(const std::string& path) {
  return profiles_from_json(read_json_file(path));
}

nlohmann::json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw ValidationError("cannot open file '" + path + "'");
  }
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw ValidationError("malformed JSON in '" + path + "': " + e.what());
  }
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) {
    throw ValidationError("cannot write file '" + path + "'");
  }
  out << text;
  if (!out) {
    throw ValidationError("failed writing file '" + path + "'");
  }
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw ValidationError("cannot open file '" + path + "'");
  }
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

}  // namespace zne
