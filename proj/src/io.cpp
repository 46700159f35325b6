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
#include "bklattice/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace bklat::io {

namespace fs = std::filesystem;

std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

namespace {

json matrix_to_json(const Matrix& m) {
  json rows = json::array();
  for (std::size_t i = 0; i < m.rows(); ++i) rows.push_back(std::vector<double>(m.row(i).begin(), m.row(i).end()));
  return rows;
}

Matrix matrix_from_json(const json& j, const char* what) {
  if (!j.is_array()) throw Error(Errc::ParseError, std::string(what) + " must be an array of rows");
  std::vector<std::vector<double>> rows;
  for (const auto& r : j) {
    if (!r.is_array()) throw Error(Errc::ParseError, std::string(what) + " rows must be arrays");
    std::vector<double> row;
    for (const auto& v : r) {
      if (!v.is_number()) throw Error(Errc::ParseError, std::string(what) + " entries must be numbers");
      row.push_back(v.get<double>());
    }
    rows.push_back(std::move(row));
  }
  return Matrix::from_rows(rows);
}

const json& field(const json& j, const char* name) {
  if (!j.is_object() || !j.contains(name)) throw Error(Errc::ParseError, std::string("missing field '") + name + "'");
  return j.at(name);
}

}  // namespace

json model_to_json(const Model& model) {
  json atoms = json::array();
  for (std::size_t k = 0; k < model.fibers(); ++k)
    atoms.push_back({{"id", k}, {"weight", model.base.weights()[k]}});
  return json{{"omega_atoms", atoms},
              {"nabla_atom_count", model.dim()},
              {"measure", matrix_to_json(model.measure.matrix())}};
}

Model model_from_json(const json& j) {
  const json& atoms = field(j, "omega_atoms");
  if (!atoms.is_array() || atoms.empty()) throw Error(Errc::ParseError, "omega_atoms must be a nonempty array");
  std::vector<double> weights;
  for (std::size_t k = 0; k < atoms.size(); ++k) {
    const json& id = field(atoms[k], "id");
    const json& w = field(atoms[k], "weight");
    if (!id.is_number_integer() || id.get<long long>() != static_cast<long long>(k))
      throw Error(Errc::ParseError, "omega atom ids must be 0, 1, ... in order");
    if (!w.is_number()) throw Error(Errc::ParseError, "omega atom weight must be a number");
    weights.push_back(w.get<double>());
  }
  const json& n = field(j, "nabla_atom_count");
  if (!n.is_number_integer() || n.get<long long>() < 1)
    throw Error(Errc::ParseError, "nabla_atom_count must be a positive integer");
  Matrix measure = matrix_from_json(field(j, "measure"), "measure");
  return Model(BaseSpace(std::move(weights)), BooleanAtoms(n.get<std::size_t>()), VectorMeasure(std::move(measure)));
}

json operator_to_json(const FiberedOperator& op, const Model& model) {
  json fibers = json::array();
  for (const auto& a : op.matrices()) fibers.push_back(matrix_to_json(a));
  return json{{"model", model_to_json(model)},
              {"fibers", fibers},
              {"flags", {{"positive", op.is_positive()}, {"sub_unital", op.is_sub_unital()}}}};
}

OperatorFile operator_from_json(const json& j, const fs::path& base_dir) {
  const json& mj = field(j, "model");
  std::optional<Model> model;
  if (mj.is_string()) {
    fs::path p = mj.get<std::string>();
    if (p.is_relative()) p = base_dir / p;
    model = load_model(p);
  } else {
    model = model_from_json(mj);
  }

  const json& fj = field(j, "fibers");
  if (!fj.is_array()) throw Error(Errc::ParseError, "fibers must be an array");
  std::vector<Matrix> fibers;
  for (const auto& a : fj) fibers.push_back(matrix_from_json(a, "fiber"));

  OperatorFlags flags;
  if (j.contains("flags")) {
    const json& f = j.at("flags");
    if (!f.is_object()) throw Error(Errc::ParseError, "flags must be an object");
    if (f.contains("positive")) flags.positive = f.at("positive").get<bool>();
    if (f.contains("sub_unital")) flags.sub_unital = f.at("sub_unital").get<bool>();
  }
  FiberedOperator op(std::move(fibers), flags);
  if (op.fibers() != model->fibers() || op.dim() != model->dim())
    throw Error(Errc::ShapeMismatch, "operator shape does not match its model");
  return OperatorFile{std::move(*model), std::move(op)};
}

std::string trace_to_csv(const DichotomyTrace& trace) {
  std::string out = "n,fiber,d\n";
  for (std::size_t n = 0; n < trace.d.size(); ++n)
    for (std::size_t k = 0; k < trace.d[n].size(); ++k)
      out += std::to_string(n) + "," + std::to_string(k) + "," + format_double(trace.d[n][k]) + "\n";
  return out;
}

std::vector<std::vector<double>> trace_from_csv(const std::string& csv) {
  std::istringstream in(csv);
  std::string line;
  if (!std::getline(in, line) || line != "n,fiber,d") throw Error(Errc::ParseError, "trace header must be n,fiber,d");
  std::vector<std::vector<double>> d;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::size_t n = 0, k = 0;
    double v = 0.0;
    char tail = 0;
    std::istringstream row(line);
    char c1 = 0, c2 = 0;
    if (!(row >> n >> c1 >> k >> c2) || c1 != ',' || c2 != ',')
      throw Error(Errc::ParseError, "bad trace row '" + line + "'");
    std::string rest;
    row >> rest;
    try {
      std::size_t used = 0;
      v = std::stod(rest, &used);
      if (used != rest.size()) tail = 1;
    } catch (const std::exception&) {
      tail = 1;
    }
    if (tail) throw Error(Errc::ParseError, "bad trace value '" + rest + "'");
    if (n == d.size() && k == 0) d.emplace_back();
    if (n + 1 != d.size() || k != d.back().size()) throw Error(Errc::ParseError, "trace rows out of order");
    d.back().push_back(v);
  }
  return d;
}

json verdicts_to_json(const std::vector<FiberVerdict>& verdicts) {
  json out = json::array();
  for (const auto& v : verdicts) {
    out.push_back({{"fiber", v.fiber},
                   {"verdict", to_string(v.verdict)},
                   {"first_below_2", v.first_below_2 ? json(*v.first_below_2) : json(nullptr)},
                   {"final_value", v.final_value}});
  }
  return out;
}

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(Errc::IoError, "cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file_atomic(const fs::path& path, const std::string& content) {
  fs::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(Errc::IoError, "cannot write " + tmp.string());
    out << content;
    if (!out) throw Error(Errc::IoError, "write failed for " + tmp.string());
  }
  std::error_code ec;
  fs::rename(tmp, path, ec);
  if (ec) throw Error(Errc::IoError, "rename to " + path.string() + " failed: " + ec.message());
}

namespace {

json parse(const std::string& text, const fs::path& path) {
  try {
    return json::parse(text);
  } catch (const json::exception& e) {
    throw Error(Errc::ParseError, path.string() + ": " + e.what());
  }
}

}  // namespace

Model load_model(const fs::path& path) {
  const json j = parse(read_file(path), path);
  try {
    return model_from_json(j);
  } catch (const json::exception& e) {
    throw Error(Errc::ParseError, path.string() + ": " + e.what());
  }
}

void save_model(const fs::path& path, const Model& model) { write_file_atomic(path, dump(model_to_json(model))); }

OperatorFile load_operator(const fs::path& path) {
  const json j = parse(read_file(path), path);
  try {
    return operator_from_json(j, path.parent_path());
  } catch (const json::exception& e) {
    throw Error(Errc::ParseError, path.string() + ": " + e.what());
  }
}

void save_operator(const fs::path& path, const FiberedOperator& op, const Model& model) {
  write_file_atomic(path, dump(operator_to_json(op, model)));
}

}  // namespace bklat::io
