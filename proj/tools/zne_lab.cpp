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

#include <CLI11.hpp>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <ctime>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include "zne/ensemble.hpp"
#include "zne/estimator.hpp"
#include "zne/insertion.hpp"
#include "zne/json_io.hpp"
#include "zne/parallel.hpp"
#include "zne/rng.hpp"

namespace {

using nlohmann::json;
using namespace zne;

constexpr std::uint64_t kSweepStreamTag = 0x73776565703a3031ull;
constexpr std::uint64_t kRunStreamTag = 0x72756e3a30313233ull;

#ifndef ZNE_LAB_DEFAULT_DATA
#define ZNE_LAB_DEFAULT_DATA ""
#endif

// Resolution order: explicit flag, ZNE_LAB_DATA, compiled-in default.
std::string resolve_data_path(const std::string& flag_value) {
  if (!flag_value.empty()) return flag_value;
  if (const char* env = std::getenv("ZNE_LAB_DATA"); env && *env) return env;
  const std::string compiled = ZNE_LAB_DEFAULT_DATA;
  if (!compiled.empty()) return compiled;
  throw ValidationError("no device dataset: pass --data or set ZNE_LAB_DATA");
}

std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

void emit(const std::string& output_path, const std::string& text) {
  if (output_path.empty() || output_path == "-") {
    std::cout << text;
    if (text.empty() || text.back() != '\n') std::cout << '\n';
  } else {
    write_text_file(output_path, text);
  }
}

std::string utc_timestamp() {
  std::time_t now = std::time(nullptr);
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

std::vector<std::size_t> parse_index_list(const std::string& text) {
  std::vector<std::size_t> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    std::size_t pos = 0;
    unsigned long v = 0;
    try {
      v = std::stoul(item, &pos);
    } catch (const std::exception&) {
      throw ValidationError("bad gate list entry '" + item + "'");
    }
    if (pos != item.size()) {
      throw ValidationError("bad gate list entry '" + item + "'");
    }
    out.push_back(v);
  }
  if (out.empty()) throw ValidationError("gate list is empty");
  return out;
}

// Flags shared by plan/run for choosing the base circuit.
struct CircuitFlags {
  std::string file;
  long long chain = 0;
  long long ladder = 0;
  long long qubits = 3;
  std::string init;

  void attach(CLI::App* cmd) {
    cmd->add_option("--circuit", file, "circuit JSON file");
    cmd->add_option("--chain", chain,
                    "two-qubit alternating CNOT chain of this length");
    cmd->add_option("--ladder", ladder,
                    "nearest-neighbour CNOT ladder of this length");
    cmd->add_option("--qubits", qubits, "register size for --ladder");
    cmd->add_option("--init", init, "initial bitstring (qubit 0 first)");
  }

  Circuit resolve() const {
    const int sources =
        (file.empty() ? 0 : 1) + (chain > 0 ? 1 : 0) + (ladder > 0 ? 1 : 0);
    if (sources != 1) {
      throw ValidationError(
          "choose exactly one of --circuit, --chain, --ladder");
    }
    if (!file.empty()) return circuit_from_json(read_json_file(file));
    if (chain > 0) {
      return generate_cnot_chain(static_cast<std::size_t>(chain),
                                 init.empty() ? "11" : init);
    }
    if (qubits < 2) throw ValidationError("--qubits must be at least 2");
    const auto nq = static_cast<std::size_t>(qubits);
    return generate_pair_ladder(nq, static_cast<std::size_t>(ladder),
                                init.empty() ? std::string(nq, '1') : init);
  }
};

struct MethodFlags {
  std::string name = "fiim";
  int order = 1;
  long long sets = 1;
  std::string list;

  void attach(CLI::App* cmd) {
    cmd->add_option("--method", name,
                    "none|fiim|riim|siim|liim-fiim|liim-riim");
    cmd->add_option("--order", order, "extrapolation order for fiim");
    cmd->add_option("--sets", sets, "set count for siim");
    cmd->add_option("--list", list, "comma-separated CNOT ordinals for liim");
  }

  Method resolve() const {
    if (name == "none") return UnmitigatedMethod{};
    if (name == "fiim") return FiimMethod{order};
    if (name == "riim") return RiimMethod{};
    if (name == "siim") {
      if (sets < 1) throw ValidationError("--sets must be positive");
      return SiimMethod{static_cast<std::size_t>(sets)};
    }
    if (name == "liim-fiim") return LiimFiimMethod{parse_index_list(list)};
    if (name == "liim-riim") return LiimRiimMethod{parse_index_list(list)};
    throw ValidationError("unknown method '" + name + "'");
  }
};

Observable resolve_observable(const std::string& text,
                              const Circuit& circuit) {
  if (text.empty() || text == "bitvalue") return BitValue{};
  if (text == "ideal-prob") {
    return TargetProbability{ideal_output_bits(circuit)};
  }
  if (text.rfind("prob:", 0) == 0) {
    return TargetProbability{text.substr(5)};
  }
  throw ValidationError("unknown observable '" + text +
                        "' (use bitvalue, ideal-prob, or prob:BITS)");
}

json observable_to_json(const Observable& obs) {
  if (std::holds_alternative<BitValue>(obs)) return "bitvalue";
  return json{{"target_probability",
               std::get<TargetProbability>(obs).bitstring}};
}

AllocationMode parse_allocation(const std::string& text) {
  if (text == "self_consistent") return AllocationMode::kSelfConsistent;
  if (text == "paper_table") return AllocationMode::kPaperTable;
  throw ValidationError("unknown allocation mode '" + text + "'");
}

// ---------------------------------------------------------------------------
// plan

int cmd_plan(const CircuitFlags& circuit_flags, const MethodFlags& method_flags,
             const std::string& output) {
  const Circuit circuit = circuit_flags.resolve();
  const MitigationPlan plan = build_plan(circuit, method_flags.resolve());
  emit(output, plan_to_json(plan).dump(2) + "\n");
  return 0;
}

// ---------------------------------------------------------------------------
// run

struct RunFlags {
  double epsilon = -1.0;
  std::string device;
  std::string data;
  bool damping = false;
  double t1_us = 0.0;
  double cnot_ns = -1.0;
  long long shots = 8192;
  long long shots_aux = -1;
  std::string allocation = "self_consistent";
  bool exact = false;
  std::uint64_t seed = 1;
  std::string observable = "bitvalue";
};

NoiseModel resolve_run_noise(const RunFlags& flags) {
  const bool has_eps = flags.epsilon >= 0.0;
  const bool has_device = !flags.device.empty();
  if (has_eps == has_device) {
    throw ValidationError("choose exactly one of --epsilon, --device");
  }
  if (has_eps) {
    NoiseModel nm = NoiseModel::uniform_depolarizing(flags.epsilon);
    const bool has_t1 = flags.t1_us > 0.0;
    const bool has_dur = flags.cnot_ns >= 0.0;
    if (has_t1 != has_dur) {
      throw ValidationError("--t1-us and --cnot-ns go together");
    }
    if (has_t1) nm.set_damping(DampingSpec{{flags.t1_us}, flags.cnot_ns});
    return nm;
  }
  const auto profiles = load_device_profiles(resolve_data_path(flags.data));
  for (const auto& p : profiles) {
    if (p.name == flags.device) {
      if (p.retired) {
        throw ValidationError("device '" + flags.device + "' is retired");
      }
      return noise_model_of(p, flags.damping);
    }
  }
  throw ValidationError("device '" + flags.device + "' not in dataset");
}

int cmd_run(const CircuitFlags& circuit_flags, const MethodFlags& method_flags,
            const RunFlags& flags, const std::string& output) {
  const Circuit circuit = circuit_flags.resolve();
  const Observable obs = resolve_observable(flags.observable, circuit);
  const NoiseModel noise = resolve_run_noise(flags);
  const MitigationPlan plan = build_plan(circuit, method_flags.resolve());
  const MitigationPlan bare = unmitigated_plan(circuit);

  const double ideal =
      expectation_exact(circuit, NoiseModel::noiseless(), obs);
  const Estimate exact_unmitigated = run_plan_exact(bare, noise, obs);
  const Estimate exact_mitigated = run_plan_exact(plan, noise, obs);

  json report{{"schema_version", 1},
              {"method", method_to_json(plan.method)},
              {"observable", observable_to_json(obs)},
              {"n_cnot", circuit.n_cnots()},
              {"seed", flags.seed},
              {"exact",
               {{"ideal", ideal},
                {"unmitigated", exact_unmitigated.value},
                {"mitigated", exact_mitigated.value}}}};

  if (flags.exact) {
    report["unmitigated"] = estimate_to_json(exact_unmitigated);
    report["mitigated"] = estimate_to_json(exact_mitigated);
  } else {
    const ShotBudget budget{flags.shots, flags.shots_aux >= 0
                                             ? flags.shots_aux
                                             : flags.shots};
    const AllocationMode mode = parse_allocation(flags.allocation);
    const auto plan_shots = allocate_shots(plan, budget, mode);
    const auto bare_shots = allocate_shots(bare, budget, mode);
    const Estimate mitigated =
        run_plan(plan, noise, plan_shots,
                 rng::derive_stream(flags.seed, {kRunStreamTag, 1}), obs);
    const Estimate unmitigated =
        run_plan(bare, noise, bare_shots,
                 rng::derive_stream(flags.seed, {kRunStreamTag, 0}), obs);
    report["unmitigated"] = estimate_to_json(unmitigated);
    report["mitigated"] = estimate_to_json(mitigated);
    report["allocation"] = {{"mode", flags.allocation},
                            {"per_entry", plan_shots}};
  }
  emit(output, report.dump(2) + "\n");
  return 0;
}

// ---------------------------------------------------------------------------
// devices

int cmd_devices_list(const std::string& data) {
  const auto profiles = load_device_profiles(resolve_data_path(data));
  if (profiles.empty()) {
    throw ValidationError("device dataset is empty");
  }
  std::ostringstream out;
  for (const auto& p : profiles) {
    if (p.retired) {
      out << p.name << "  retired\n";
      continue;
    }
    double error = 0.0, length = 0.0;
    for (const auto& [pair, e] : p.cx_error) error += e;
    for (const auto& [pair, l] : p.cx_length_ns) length += l;
    const auto n = static_cast<double>(p.cx_error.size());
    out << p.name << "  qubits=" << p.t1_us.size()
        << "  cx_error=" << format_double(error / n)
        << "  cx_length_ns=" << format_double(length / n) << "\n";
  }
  std::cout << out.str();
  return 0;
}

int cmd_devices_convert(const std::string& input, const std::string& output) {
  const auto profiles = convert_property_table(read_text_file(input));
  emit(output, profiles_to_json(profiles).dump(2) + "\n");
  return 0;
}

// ---------------------------------------------------------------------------
// sweep

struct EpsilonAxis {
  std::vector<double> values;
  std::optional<DampingSpec> damping;
};

struct SyntheticAxis {
  double mu = 0.0;
  std::vector<double> sigmas;
  std::size_t devices = 0;
  bool sharded = false;
};

struct ProfileAxis {
  std::vector<DeviceProfile> profiles;
  bool sharded = false;
  bool damping = false;
};

using NoiseAxis = std::variant<EpsilonAxis, SyntheticAxis, ProfileAxis>;

struct SweepConfig {
  std::uint64_t seed = 1;
  std::string observable = "bitvalue";
  std::vector<Circuit> points;
  std::vector<Method> methods;
  NoiseAxis axis;
  bool exact = false;
  ShotBudget budget{};
  AllocationMode mode = AllocationMode::kSelfConsistent;
  std::string output;
  std::string data_file;  // provenance for the sidecar
};

Method method_from_spec(const json& m) {
  if (m.is_string()) {
    const std::string s = m.get<std::string>();
    if (s == "none") return UnmitigatedMethod{};
    if (s == "riim") return RiimMethod{};
    if (s.rfind("fiim", 0) == 0 && s.size() > 4) {
      return FiimMethod{std::stoi(s.substr(4))};
    }
    if (s.rfind("siim", 0) == 0 && s.size() > 4) {
      return SiimMethod{std::stoul(s.substr(4))};
    }
    throw ValidationError("unknown method '" + s + "' in sweep spec");
  }
  if (!m.is_object() || !m.contains("name")) {
    throw ValidationError("sweep spec: method entries need a 'name'");
  }
  const std::string name = m.at("name").get<std::string>();
  if (name == "none") return UnmitigatedMethod{};
  if (name == "riim") return RiimMethod{};
  if (name == "fiim") {
    return FiimMethod{m.value("order", 1)};
  }
  if (name == "siim") {
    if (!m.contains("sets")) {
      throw ValidationError("sweep spec: siim needs 'sets'");
    }
    return SiimMethod{m.at("sets").get<std::size_t>()};
  }
  if (name == "liim_fiim" || name == "liim_riim") {
    if (!m.contains("list") || !m.at("list").is_array()) {
      throw ValidationError("sweep spec: liim methods need a 'list' array");
    }
    std::vector<std::size_t> list;
    for (const auto& v : m.at("list")) list.push_back(v.get<std::size_t>());
    if (name == "liim_fiim") return LiimFiimMethod{std::move(list)};
    return LiimRiimMethod{std::move(list)};
  }
  throw ValidationError("unknown method '" + name + "' in sweep spec");
}

SweepConfig parse_sweep_spec(const json& spec, const std::string& data_flag) {
  if (!spec.is_object()) {
    throw ValidationError("sweep spec: top level must be an object");
  }
  if (spec.value("schema_version", 0) != 1) {
    throw ValidationError("sweep spec: unsupported 'schema_version'");
  }
  SweepConfig cfg;
  cfg.seed = spec.value("seed", std::uint64_t{1});

  if (spec.contains("observable")) {
    const json& o = spec.at("observable");
    if (o.is_string()) {
      const std::string s = o.get<std::string>();
      if (s != "bitvalue" && s != "ideal_probability") {
        throw ValidationError("sweep spec: unknown observable '" + s + "'");
      }
      cfg.observable = s == "bitvalue" ? "bitvalue" : "ideal-prob";
    } else if (o.is_object() && o.contains("target_probability")) {
      cfg.observable =
          "prob:" + o.at("target_probability").get<std::string>();
    } else {
      throw ValidationError("sweep spec: malformed 'observable'");
    }
  }

  // Circuit axis.
  if (!spec.contains("circuit")) {
    throw ValidationError("sweep spec: missing 'circuit'");
  }
  const json& cj = spec.at("circuit");
  const int sources = (cj.contains("file") ? 1 : 0) +
                      (cj.contains("chain") ? 1 : 0) +
                      (cj.contains("ladder") ? 1 : 0);
  if (sources != 1) {
    throw ValidationError(
        "sweep spec: circuit needs exactly one of file/chain/ladder");
  }
  const bool has_lengths = cj.contains("lengths");
  const bool has_deepen = cj.contains("deepen");
  if (has_lengths && has_deepen) {
    throw ValidationError("sweep spec: 'lengths' and 'deepen' are exclusive");
  }

  const auto base_circuit = [&]() -> Circuit {
    if (cj.contains("file")) {
      return circuit_from_json(read_json_file(cj.at("file").get<std::string>()));
    }
    if (cj.contains("chain")) {
      const json& ch = cj.at("chain");
      return generate_cnot_chain(ch.value("n_cnots", std::size_t{1}),
                                 ch.value("initial_state", std::string("11")));
    }
    const json& ld = cj.at("ladder");
    const auto nq = ld.value("n_qubits", std::size_t{3});
    return generate_pair_ladder(
        nq, ld.value("n_cnots", std::size_t{1}),
        ld.value("initial_state", std::string(nq, '1')));
  };

  if (has_lengths) {
    if (!cj.contains("chain") && !cj.contains("ladder")) {
      throw ValidationError(
          "sweep spec: 'lengths' applies to chain or ladder sources");
    }
    for (const auto& v : cj.at("lengths")) {
      const auto n = v.get<std::size_t>();
      if (cj.contains("chain")) {
        cfg.points.push_back(generate_cnot_chain(
            n, cj.at("chain").value("initial_state", std::string("11"))));
      } else {
        const json& ld = cj.at("ladder");
        const auto nq = ld.value("n_qubits", std::size_t{3});
        cfg.points.push_back(generate_pair_ladder(
            nq, n, ld.value("initial_state", std::string(nq, '1'))));
      }
    }
  } else if (has_deepen) {
    const Circuit base = base_circuit();
    for (const auto& v : cj.at("deepen")) {
      cfg.points.push_back(deepen(base, v.get<int>()));
    }
  } else {
    cfg.points.push_back(base_circuit());
  }
  if (cfg.points.empty()) {
    throw ValidationError("sweep spec: empty circuit axis");
  }

  // Methods.
  if (!spec.contains("methods") || !spec.at("methods").is_array() ||
      spec.at("methods").empty()) {
    throw ValidationError("sweep spec: 'methods' must be a non-empty array");
  }
  for (const auto& m : spec.at("methods")) {
    cfg.methods.push_back(method_from_spec(m));
  }

  // Noise axis.
  const bool has_noise = spec.contains("noise");
  const bool has_ensemble = spec.contains("ensemble");
  if (has_noise == has_ensemble) {
    throw ValidationError(
        "sweep spec: need exactly one of 'noise' and 'ensemble'");
  }
  if (has_noise) {
    const json& nj = spec.at("noise");
    EpsilonAxis axis;
    if (!nj.contains("epsilon") || !nj.at("epsilon").is_array() ||
        nj.at("epsilon").empty()) {
      throw ValidationError(
          "sweep spec: 'noise.epsilon' must be a non-empty array");
    }
    for (const auto& v : nj.at("epsilon")) axis.values.push_back(v.get<double>());
    if (nj.contains("damping")) {
      const json& dj = nj.at("damping");
      axis.damping = DampingSpec{{dj.at("t1_us").get<double>()},
                                 dj.at("cnot_ns").get<double>()};
    }
    cfg.axis = std::move(axis);
  } else {
    const json& ej = spec.at("ensemble");
    const std::string strategy = ej.value("strategy", "replicated");
    if (strategy != "replicated" && strategy != "sharded") {
      throw ValidationError("sweep spec: unknown strategy '" + strategy + "'");
    }
    if (ej.contains("profiles")) {
      ProfileAxis axis;
      std::string source = ej.at("profiles").get<std::string>();
      if (source == "bundled") source = resolve_data_path(data_flag);
      cfg.data_file = source;
      axis.profiles = active_profiles(load_device_profiles(source));
      if (axis.profiles.empty()) {
        throw ValidationError("sweep spec: dataset has no active systems");
      }
      axis.sharded = strategy == "sharded";
      axis.damping = ej.value("damping", false);
      cfg.axis = std::move(axis);
    } else {
      SyntheticAxis axis;
      axis.mu = ej.at("mu").get<double>();
      if (ej.contains("sigma") && ej.at("sigma").is_array()) {
        for (const auto& v : ej.at("sigma")) {
          axis.sigmas.push_back(v.get<double>());
        }
      } else if (ej.contains("sigma")) {
        axis.sigmas.push_back(ej.at("sigma").get<double>());
      } else {
        axis.sigmas.push_back(0.0);
      }
      axis.devices = ej.at("devices").get<std::size_t>();
      axis.sharded = strategy == "sharded";
      cfg.axis = std::move(axis);
    }
  }

  // Shots.
  const bool exact = spec.value("exact", false);
  const bool has_shots = spec.contains("shots");
  if (exact == has_shots) {
    throw ValidationError(
        "sweep spec: need exactly one of 'shots' and 'exact: true'");
  }
  cfg.exact = exact;
  if (has_shots) {
    const json& sj = spec.at("shots");
    cfg.budget.nominal = sj.at("nominal").get<long long>();
    cfg.budget.per_auxiliary =
        sj.value("per_auxiliary", cfg.budget.nominal);
    cfg.mode = parse_allocation(sj.value("allocation",
                                         std::string("self_consistent")));
  }

  cfg.output = spec.value("output", std::string{});
  return cfg;
}

struct SweepRow {
  std::string method;
  std::size_t n_cnot = 0;
  double epsilon_mean = 0.0;
  double epsilon_std = 0.0;
  std::size_t n_devices = 1;
  std::string strategy = "single";
  long long shots_nominal = 0;
  long long shots_aux = 0;
  double estimate = 0.0;
  double std_error = 0.0;
  double exact_value = 0.0;
};

std::string render_csv(const std::vector<SweepRow>& rows) {
  std::ostringstream out;
  out << "method,n_cnot,epsilon_mean,epsilon_std,n_devices,strategy,"
         "shots_nominal,shots_aux,estimate,std_error,exact_value\n";
  for (const auto& r : rows) {
    out << r.method << ',' << r.n_cnot << ',' << format_double(r.epsilon_mean)
        << ',' << format_double(r.epsilon_std) << ',' << r.n_devices << ','
        << r.strategy << ',' << r.shots_nominal << ',' << r.shots_aux << ','
        << format_double(r.estimate) << ',' << format_double(r.std_error)
        << ',' << format_double(r.exact_value) << '\n';
  }
  return out.str();
}

int cmd_sweep(const std::string& spec_path, const std::string& output_flag,
              const std::string& data_flag, unsigned workers) {
  const json spec = read_json_file(spec_path);
  SweepConfig cfg = parse_sweep_spec(spec, data_flag);
  const std::string output = output_flag.empty() ? cfg.output : output_flag;
  if (output.empty()) {
    throw ValidationError("sweep: no output path (spec 'output' or -o)");
  }

  const std::size_t n_noise = std::visit(
      [](const auto& axis) -> std::size_t {
        using T = std::decay_t<decltype(axis)>;
        if constexpr (std::is_same_v<T, EpsilonAxis>) {
          return axis.values.size();
        } else if constexpr (std::is_same_v<T, SyntheticAxis>) {
          return axis.sigmas.size();
        } else {
          return 1;
        }
      },
      cfg.axis);

  struct Task {
    std::size_t point_idx, noise_idx, method_idx;
  };
  std::vector<Task> tasks;
  for (std::size_t p = 0; p < cfg.points.size(); ++p) {
    for (std::size_t n = 0; n < n_noise; ++n) {
      for (std::size_t m = 0; m < cfg.methods.size(); ++m) {
        tasks.push_back({p, n, m});
      }
    }
  }

  std::vector<SweepRow> rows(tasks.size());
  const unsigned inner_workers = tasks.size() > 1 ? 1 : workers;
  const unsigned outer_workers = tasks.size() > 1 ? workers : 1;

  parallel_for(tasks.size(), outer_workers, [&](std::size_t t) {
    const Task& task = tasks[t];
    const Circuit& circuit = cfg.points[task.point_idx];
    const Observable obs = resolve_observable(cfg.observable, circuit);
    const MitigationPlan plan =
        build_plan(circuit, cfg.methods[task.method_idx]);
    // Streams are keyed by (point, method) only: noise-axis points share
    // random numbers so differences along that axis are smooth.
    const std::uint64_t stream = rng::derive_stream(
        cfg.seed, {kSweepStreamTag, task.point_idx, task.method_idx});

    SweepRow row;
    row.method = method_label(cfg.methods[task.method_idx]);
    row.n_cnot = circuit.n_cnots();
    row.exact_value =
        expectation_exact(circuit, NoiseModel::noiseless(), obs);

    std::vector<long long> shots;
    if (!cfg.exact) {
      shots = allocate_shots(plan, cfg.budget, cfg.mode);
      row.shots_nominal = shots[0];
      row.shots_aux = shots.size() > 1 ? shots[1] : 0;
    }

    std::visit(
        [&](const auto& axis) {
          using T = std::decay_t<decltype(axis)>;
          if constexpr (std::is_same_v<T, EpsilonAxis>) {
            const double eps = axis.values[task.noise_idx];
            row.epsilon_mean = eps;
            NoiseModel nm = NoiseModel::uniform_depolarizing(eps);
            if (axis.damping) nm.set_damping(*axis.damping);
            const Estimate est =
                cfg.exact ? run_plan_exact(plan, nm, obs)
                          : run_plan(plan, nm, shots, stream, obs);
            row.estimate = est.value;
            row.std_error = std::sqrt(est.variance);
          } else if constexpr (std::is_same_v<T, SyntheticAxis>) {
            const double sigma = axis.sigmas[task.noise_idx];
            row.epsilon_mean = axis.mu;
            row.epsilon_std = sigma;
            row.n_devices = axis.devices;
            row.strategy = axis.sharded ? "sharded" : "replicated";
            // The ensemble is keyed by the master seed alone, so sigma
            // values reuse the same underlying draws.
            const DeviceEnsemble ensemble = sample_normal_profiles(
                axis.devices, axis.mu, sigma, cfg.seed);
            Estimate est;
            if (axis.sharded) {
              est = cfg.exact
                        ? run_sharded_exact(plan, ensemble, RoundRobin{}, obs)
                        : run_sharded(plan, ensemble, shots, RoundRobin{},
                                      stream, obs,
                                      RunOptions{false, inner_workers});
            } else {
              est = cfg.exact
                        ? run_replicated_exact(plan, ensemble, obs)
                        : run_replicated(plan, ensemble, shots, stream, obs,
                                         RunOptions{false, inner_workers});
            }
            row.estimate = est.value;
            row.std_error = std::sqrt(est.variance);
          } else {
            DeviceEnsemble ensemble{axis.profiles};
            row.n_devices = ensemble.size();
            row.strategy = axis.sharded ? "sharded" : "replicated";
            double mean = 0.0;
            for (const auto& p : ensemble.profiles) {
              double device_mean = 0.0;
              for (const auto& [pair, e] : p.cx_error) device_mean += e;
              mean += device_mean / static_cast<double>(p.cx_error.size());
            }
            mean /= static_cast<double>(ensemble.size());
            double var = 0.0;
            for (const auto& p : ensemble.profiles) {
              double device_mean = 0.0;
              for (const auto& [pair, e] : p.cx_error) device_mean += e;
              device_mean /= static_cast<double>(p.cx_error.size());
              var += (device_mean - mean) * (device_mean - mean);
            }
            var /= static_cast<double>(ensemble.size());
            row.epsilon_mean = mean;
            row.epsilon_std = std::sqrt(var);
            const RunOptions options{axis.damping, inner_workers};
            Estimate est;
            if (axis.sharded) {
              est = cfg.exact
                        ? run_sharded_exact(plan, ensemble, RoundRobin{}, obs,
                                            axis.damping)
                        : run_sharded(plan, ensemble, shots, RoundRobin{},
                                      stream, obs, options);
            } else {
              est = cfg.exact
                        ? run_replicated_exact(plan, ensemble, obs,
                                               axis.damping)
                        : run_replicated(plan, ensemble, shots, stream, obs,
                                         options);
            }
            row.estimate = est.value;
            row.std_error = std::sqrt(est.variance);
          }
        },
        cfg.axis);
    rows[t] = std::move(row);
  });

  emit(output, render_csv(rows));
  if (!output.empty() && output != "-") {
    json meta{{"schema_version", 1},
              {"generated_at", utc_timestamp()},
              {"spec", spec},
              {"rows", rows.size()}};
    if (!cfg.data_file.empty()) meta["data_file"] = cfg.data_file;
    write_text_file(output + ".meta.json", meta.dump(2) + "\n");
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"identity-insertion noise extrapolation laboratory"};
  app.require_subcommand(1);

  CircuitFlags plan_circuit, run_circuit;
  MethodFlags plan_method, run_method;
  std::string plan_output, run_output;

  auto* plan_cmd = app.add_subcommand("plan", "export a mitigation plan");
  plan_circuit.attach(plan_cmd);
  plan_method.attach(plan_cmd);
  plan_cmd->add_option("-o,--output", plan_output, "output file ('-' stdout)");

  auto* run_cmd = app.add_subcommand("run", "estimate one observable");
  RunFlags run_flags;
  run_circuit.attach(run_cmd);
  run_method.attach(run_cmd);
  run_cmd->add_option("--epsilon", run_flags.epsilon,
                      "uniform depolarizing strength");
  run_cmd->add_option("--device", run_flags.device,
                      "use this device's calibration");
  run_cmd->add_option("--data", run_flags.data, "device dataset JSON");
  run_cmd->add_flag("--damping", run_flags.damping,
                    "include T1 damping from the device profile");
  run_cmd->add_option("--t1-us", run_flags.t1_us,
                      "uniform T1 for damping (with --epsilon)");
  run_cmd->add_option("--cnot-ns", run_flags.cnot_ns,
                      "CNOT duration for damping (with --epsilon)");
  run_cmd->add_option("--shots", run_flags.shots, "base nominal shot budget");
  run_cmd->add_option("--shots-aux", run_flags.shots_aux,
                      "base per-auxiliary budget (default: --shots)");
  run_cmd->add_option("--allocation", run_flags.allocation,
                      "self_consistent|paper_table");
  run_cmd->add_flag("--exact", run_flags.exact, "infinite-shot mode");
  run_cmd->add_option("--seed", run_flags.seed, "master seed");
  run_cmd->add_option("--observable", run_flags.observable,
                      "bitvalue|ideal-prob|prob:BITS");
  run_cmd->add_option("-o,--output", run_output, "output file ('-' stdout)");

  auto* sweep_cmd = app.add_subcommand("sweep", "run a sweep specification");
  std::string sweep_spec, sweep_output, sweep_data;
  unsigned sweep_workers = 0;
  sweep_cmd->add_option("--spec", sweep_spec, "sweep spec JSON file")
      ->required();
  sweep_cmd->add_option("-o,--output", sweep_output,
                        "CSV output (overrides the spec)");
  sweep_cmd->add_option("--data", sweep_data, "device dataset JSON");
  sweep_cmd->add_option("--workers", sweep_workers,
                        "worker pool size (0 = all cores)");

  auto* devices_cmd = app.add_subcommand("devices", "device dataset tools");
  devices_cmd->require_subcommand(1);
  auto* list_cmd = devices_cmd->add_subcommand("list", "list profiles");
  std::string list_data;
  list_cmd->add_option("--data", list_data, "device dataset JSON");
  auto* convert_cmd =
      devices_cmd->add_subcommand("convert", "calibration table to JSON");
  std::string convert_input, convert_output;
  convert_cmd->add_option("--input", convert_input, "calibration table file")
      ->required();
  convert_cmd->add_option("-o,--output", convert_output,
                          "output file ('-' stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (plan_cmd->parsed()) {
      return cmd_plan(plan_circuit, plan_method, plan_output);
    }
    if (run_cmd->parsed()) {
      return cmd_run(run_circuit, run_method, run_flags, run_output);
    }
    if (sweep_cmd->parsed()) {
      return cmd_sweep(sweep_spec, sweep_output, sweep_data, sweep_workers);
    }
    if (list_cmd->parsed()) return cmd_devices_list(list_data);
    if (convert_cmd->parsed()) {
      return cmd_devices_convert(convert_input, convert_output);
    }
  } catch (const IntegrityError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
