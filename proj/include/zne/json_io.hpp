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

#pragma once

#include <json.hpp>
#include <string>
#include <vector>

#include "zne/ensemble.hpp"
#include "zne/estimator.hpp"
#include "zne/insertion.hpp"

namespace zne {

// Circuit wire format:
//   {"n_qubits": 2, "initial_state": "10",
//    "gates": [{"type": "cnot", "control": 0, "target": 1},
//              {"type": "u1q", "qubit": 0,
//               "matrix": [[[re, im], [re, im]], [[re, im], [re, im]]]}]}
nlohmann::json circuit_to_json(const Circuit& circuit);
Circuit circuit_from_json(const nlohmann::json& j);

nlohmann::json method_to_json(const Method& method);

// Plan export: base circuit, method, and per-entry label, exact coefficient
// as {"num", "den"}, replication vector, and folded circuit.
nlohmann::json plan_to_json(const MitigationPlan& plan);

nlohmann::json shot_result_to_json(const ShotResult& result);
ShotResult shot_result_from_json(const nlohmann::json& j);

nlohmann::json estimate_to_json(const Estimate& estimate);

// Profile dataset wire format:
//   {"systems": [{"name": "...", "retired": false,
//                 "qubits": [{"t1_us": ..., "t2_us": ..., "frequency_ghz":
//                             ..., "p0_given_1": ..., "p1_given_0": ...}],
//                 "x_error": [...], "x_length_ns": ...,
//                 "cx": [{"pair": [0, 1], "error": ..., "length_ns": ...}]}]}
// Numeric fields accept either JSON numbers or bracketed power-of-ten
// strings like "1.437[-2]".
nlohmann::json profiles_to_json(const std::vector<DeviceProfile>& profiles);
std::vector<DeviceProfile> profiles_from_json(const nlohmann::json& j);

// "1.437[-2]" -> 1.437e-2; "3.556[1]" -> 35.56; plain decimals pass through.
double parse_bracketed(const std::string& text);

// Parses the line-oriented calibration table format (sections [qubits],
// [gates], [retired]; '#' starts a comment) into profiles.  See
// data/ibmq_table.txt for a worked example.
std::vector<DeviceProfile> convert_property_table(const std::string& text);

// File helpers; throw ValidationError on missing files or malformed JSON.
nlohmann::json read_json_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& text);
std::string read_text_file(const std::string& path);

}  // namespace zne
