// Copyright 2026 The gkpzne Authors
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

#include "gkpzne/io.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

#include <json.hpp>

#include "gkpzne/error.hpp"
#include "gkpzne/extrapolation.hpp"
#include "gkpzne/format.hpp"
#include "gkpzne/pipeline.hpp"

namespace gkpzne {

using nlohmann::json;

namespace {

[[noreturn]] void config_error(const std::string& what) {
  throw Error(ErrorKind::Config, what);
}

void check_keys(const json& node, const std::string& section,
                std::initializer_list<const char*> allowed) {
  if (!node.is_object()) config_error("section '" + section + "' must be an object");
  const std::set<std::string> keys(allowed.begin(), allowed.end());
  for (const auto& item : node.items()) {
    if (!keys.count(item.key())) {
      config_error("unknown key '" + section + "." + item.key() + "'");
    }
  }
}

template <class T>
void read(const json& node, const char* key, T& target, const std::string& section) {
  if (!node.contains(key)) return;
  try {
    target = node.at(key).get<T>();
  } catch (const json::exception&) {
    config_error("bad value for '" + section + "." + key + "'");
  }
}

void read_axis(const json& node, const char* key, Axis& axis) {
  if (!node.contains(key)) return;
  const json& a = node.at(key);
  const std::string section = std::string("wigner.") + key;
  check_keys(a, section, {"min", "max", "points"});
  read(a, "min", axis.min, section);
  read(a, "max", axis.max, section);
  read(a, "points", axis.points, section);
}

json axis_json(const Axis& a) { return {{"min", a.min}, {"max", a.max}, {"points", a.points}}; }

}  // namespace

Config parse_config(std::string_view text, const Config& base) {
  json root;
  try {
    root = json::parse(text.begin(), text.end(), nullptr, true, true);
  } catch (const json::parse_error& e) {
    config_error(std::string("config is not valid JSON: ") + e.what());
  }
  Config c = base;
  check_keys(root, "<root>",
             {"run", "schedule", "channel", "fit", "sweep", "threshold", "two_qubit",
              "random_coherence", "wigner"});
  if (root.contains("run")) {
    const json& s = root["run"];
    check_keys(s, "run", {"out", "seed", "jobs", "resume"});
    read(s, "out", c.out_dir, "run");
    read(s, "seed", c.seed, "run");
    read(s, "jobs", c.jobs, "run");
    read(s, "resume", c.resume, "run");
  }
  if (root.contains("schedule")) {
    const json& s = root["schedule"];
    check_keys(s, "schedule", {"n0", "dn", "k"});
    read(s, "n0", c.schedule.n0, "schedule");
    read(s, "dn", c.schedule.dn, "schedule");
    read(s, "k", c.schedule.k, "schedule");
  }
  if (root.contains("channel")) {
    const json& s = root["channel"];
    check_keys(s, "channel", {"epsilon", "dim"});
    read(s, "epsilon", c.epsilon, "channel");
    if (s.contains("dim")) {
      if (s["dim"].is_null()) {
        c.dim.reset();
      } else {
        int d = 0;
        read(s, "dim", d, "channel");
        c.dim = d;
      }
    }
  }
  if (root.contains("fit")) {
    const json& s = root["fit"];
    check_keys(s, "fit", {"bootstrap"});
    read(s, "bootstrap", c.bootstrap, "fit");
  }
  if (root.contains("sweep")) {
    const json& s = root["sweep"];
    check_keys(s, "sweep", {"loss_depths", "state", "observable"});
    read(s, "loss_depths", c.sweep_x, "sweep");
    read(s, "state", c.state, "sweep");
    read(s, "observable", c.observable, "sweep");
  }
  if (root.contains("threshold")) {
    const json& s = root["threshold"];
    check_keys(s, "threshold", {"x_min", "x_max", "points", "loss_depths", "comparison_nbar"});
    read(s, "x_min", c.threshold_x_min, "threshold");
    read(s, "x_max", c.threshold_x_max, "threshold");
    read(s, "points", c.threshold_points, "threshold");
    read(s, "loss_depths", c.threshold_x, "threshold");
    read(s, "comparison_nbar", c.comparison_nbar, "threshold");
  }
  if (root.contains("two_qubit")) {
    const json& s = root["two_qubit"];
    check_keys(s, "two_qubit", {"loss_depths", "correlators"});
    read(s, "loss_depths", c.two_qubit_x, "two_qubit");
    read(s, "correlators", c.correlators, "two_qubit");
  }
  if (root.contains("random_coherence")) {
    const json& s = root["random_coherence"];
    check_keys(s, "random_coherence", {"loss_depths", "trials", "parity_mode"});
    read(s, "loss_depths", c.coherence_x, "random_coherence");
    read(s, "trials", c.trials, "random_coherence");
    read(s, "parity_mode", c.parity_mode, "random_coherence");
  }
  if (root.contains("wigner")) {
    const json& s = root["wigner"];
    check_keys(s, "wigner", {"nbar", "eta", "q", "p"});
    read(s, "nbar", c.wigner_nbar, "wigner");
    read(s, "eta", c.wigner_eta, "wigner");
    read_axis(s, "q", c.wigner_q);
    read_axis(s, "p", c.wigner_p);
  }
  return c;
}

Config load_config(const std::filesystem::path& path, const Config& base) {
  std::ifstream in(path);
  if (!in) config_error("cannot read config file " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str(), base);
}

std::string dump_config(const Config& c) {
  json root;
  root["run"] = {{"out", c.out_dir}, {"seed", c.seed}, {"jobs", c.jobs}, {"resume", c.resume}};
  root["schedule"] = {{"n0", c.schedule.n0}, {"dn", c.schedule.dn}, {"k", c.schedule.k}};
  root["channel"] = {{"epsilon", c.epsilon},
                     {"dim", c.dim ? json(*c.dim) : json(nullptr)}};
  root["fit"] = {{"bootstrap", c.bootstrap}};
  root["sweep"] = {{"loss_depths", c.sweep_x}, {"state", c.state}, {"observable", c.observable}};
  root["threshold"] = {{"x_min", c.threshold_x_min},
                       {"x_max", c.threshold_x_max},
                       {"points", c.threshold_points},
                       {"loss_depths", c.threshold_x},
                       {"comparison_nbar", c.comparison_nbar}};
  root["two_qubit"] = {{"loss_depths", c.two_qubit_x}, {"correlators", c.correlators}};
  root["random_coherence"] = {
      {"loss_depths", c.coherence_x}, {"trials", c.trials}, {"parity_mode", c.parity_mode}};
  root["wigner"] = {{"nbar", c.wigner_nbar},
                    {"eta", c.wigner_eta},
                    {"q", axis_json(c.wigner_q)},
                    {"p", axis_json(c.wigner_p)}};
  return root.dump(2) + "\n";
}

void validate(const Config& c) {
  auto depths = [](const std::vector<double>& xs, const char* name) {
    for (double x : xs) {
      if (!std::isfinite(x) || x < 0.0) {
        config_error(std::string(name) + ": loss depths must be finite and >= 0");
      }
    }
  };
  depths(c.sweep_x, "sweep.loss_depths");
  depths(c.threshold_x, "threshold.loss_depths");
  depths(c.two_qubit_x, "two_qubit.loss_depths");
  depths(c.coherence_x, "random_coherence.loss_depths");
  try {
    build_schedule(c.schedule.n0, c.schedule.dn, c.schedule.k);
  } catch (const Error& e) {
    config_error(std::string("schedule: ") + e.what());
  }
  if (c.jobs < 1) config_error("run.jobs must be >= 1");
  if (!(c.epsilon >= 0.0)) config_error("channel.epsilon must be >= 0");
  if (c.dim && (*c.dim < 2 || *c.dim > kMaxDim)) config_error("channel.dim out of range");
  if (c.bootstrap < 100) config_error("fit.bootstrap must be >= 100");
  if (c.trials < 1) config_error("random_coherence.trials must be >= 1");
  if (c.parity_mode != "absolute" && c.parity_mode != "distance") {
    config_error("random_coherence.parity_mode must be 'absolute' or 'distance'");
  }
  if (c.threshold_x.empty() &&
      (c.threshold_points < 2 || !(c.threshold_x_min > 0.0) ||
       !(c.threshold_x_max > c.threshold_x_min))) {
    config_error("threshold grid needs points >= 2 and 0 < x_min < x_max");
  }
  if (!(c.wigner_eta > 0.0 && c.wigner_eta <= 1.0)) config_error("wigner.eta must lie in (0, 1]");
  if (!(c.wigner_nbar >= 0.5)) config_error("wigner.nbar must be >= 0.5");
  for (const Axis* a : {&c.wigner_q, &c.wigner_p}) {
    if (a->points < 2 || !(a->max > a->min)) config_error("wigner axis needs points >= 2 and max > min");
  }
  if (!parse_pauli(c.observable)) config_error("sweep.observable must be one of I, X, Y, Z");
  static const char* const kStates[] = {"0", "1", "+", "-", "+i", "-i", "mixed"};
  if (std::find(std::begin(kStates), std::end(kStates), c.state) == std::end(kStates)) {
    config_error("sweep.state must be one of 0, 1, +, -, +i, -i, mixed");
  }
  for (const auto& corr : c.correlators) {
    if (corr.size() != 2 || corr.find_first_not_of("IXYZ") != std::string::npos) {
      config_error("two_qubit.correlators entries look like \"XX\"");
    }
  }
}

std::vector<double> log_grid(double lo, double hi, int n) {
  if (n < 2 || !(lo > 0.0) || !(hi > lo)) {
    throw Error(ErrorKind::Parameter, "log grid needs n >= 2 and 0 < lo < hi");
  }
  std::vector<double> out(static_cast<std::size_t>(n));
  const double step = std::log(hi / lo) / (n - 1);
  for (int i = 0; i < n; ++i) out[static_cast<std::size_t>(i)] = lo * std::exp(step * i);
  out.front() = lo;
  out.back() = hi;
  return out;
}

std::vector<double> threshold_grid(const Config& c) {
  if (!c.threshold_x.empty()) return c.threshold_x;
  return log_grid(c.threshold_x_min, c.threshold_x_max, c.threshold_points);
}

std::string csv_number(double v) { return format_double(v); }

std::string csv_number(const std::optional<double>& v) {
  return v ? format_double(*v) : std::string();
}

int CsvTable::column(std::string_view name) const {
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (header[i] == name) return static_cast<int>(i);
  }
  return -1;
}

namespace {

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> out;
  std::string field;
  std::istringstream in(line);
  while (std::getline(in, field, ',')) out.push_back(field);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

}  // namespace

CsvTable read_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::Config, "cannot read " + path.string());
  CsvTable table;
  std::string line;
  if (!std::getline(in, line)) return table;
  table.header = split(line);
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    auto row = split(line);
    if (row.size() != table.header.size()) continue;  // torn final line
    table.rows.push_back(std::move(row));
  }
  return table;
}

CsvWriter::CsvWriter(const std::filesystem::path& path, std::vector<std::string> header)
    : out_(path, std::ios::binary | std::ios::trunc), columns_(header.size()) {
  if (!out_) throw Error(ErrorKind::Config, "cannot write " + path.string());
  write(header);
}

void CsvWriter::write(const std::vector<std::string>& row) {
  for (std::size_t i = 0; i < row.size(); ++i) {
    if (i) out_ << ',';
    out_ << row[i];
  }
  out_ << '\n';
  out_.flush();
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorKind::Config, "cannot write " + path.string());
  out << text;
}

}  // namespace gkpzne
