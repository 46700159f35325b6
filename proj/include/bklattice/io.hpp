// Copyright 2026 The bklattice Authors
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
#ifndef BKLATTICE_IO_HPP
#define BKLATTICE_IO_HPP

// File formats.
//
// Model (JSON):
//   {"omega_atoms": [{"id": 0, "weight": 1.0}, ...],
//    "nabla_atom_count": N,
//    "measure": [[...N positive numbers...], ...K rows...]}
//
// Operator (JSON):
//   {"model": <inline model object> | "path/to/model.json",
//    "fibers": [K matrices, each N rows of N numbers, row-major],
//    "flags": {"positive": bool, "sub_unital": bool}}
//
// Trace (CSV, LF): header "n,fiber,d", one row per (n, fiber), d with 17
// significant digits.
//
// Verdicts (JSON): [{"fiber": k, "verdict": "...", "first_below_2": n|null,
//                    "final_value": x}, ...]

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "bklattice/core_lattice.hpp"
#include "bklattice/operators.hpp"
#include "bklattice/zerotwo.hpp"

namespace bklat::io {

using nlohmann::json;

json model_to_json(const Model& model);
/// Validates on load; throws ParseError or the validator's error.
Model model_from_json(const json& j);

struct OperatorFile {
  Model model;
  FiberedOperator op;
};

json operator_to_json(const FiberedOperator& op, const Model& model);
/// A string "model" field is resolved relative to `base_dir`.
OperatorFile operator_from_json(const json& j, const std::filesystem::path& base_dir = {});

std::string trace_to_csv(const DichotomyTrace& trace);
/// Parses the d matrix back; rows must be in (n, fiber) order.
std::vector<std::vector<double>> trace_from_csv(const std::string& csv);

json verdicts_to_json(const std::vector<FiberVerdict>& verdicts);

/// Formats with 17 significant digits ("%.17g").
std::string format_double(double v);

std::string read_file(const std::filesystem::path& path);
/// Writes to a sibling temporary and renames over `path`.
void write_file_atomic(const std::filesystem::path& path, const std::string& content);

Model load_model(const std::filesystem::path& path);
void save_model(const std::filesystem::path& path, const Model& model);
OperatorFile load_operator(const std::filesystem::path& path);
void save_operator(const std::filesystem::path& path, const FiberedOperator& op, const Model& model);

/// Pretty JSON with a trailing newline.
std::string dump(const json& j);

}  // namespace bklat::io

#endif  // BKLATTICE_IO_HPP
