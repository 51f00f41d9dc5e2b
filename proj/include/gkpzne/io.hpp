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

#pragma once

// Run configuration (JSON text with nested sections) and CSV persistence.

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "gkpzne/channel.hpp"
#include "gkpzne/wigner.hpp"

namespace gkpzne {

struct ScheduleSpec {
  double n0 = 30.0;
  double dn = 1.0;
  int k = 30;
};

struct Config {
  // run
  std::string out_dir = "out";
  std::uint64_t seed = 20250101;
  int jobs = 1;
  bool resume = false;
  // schedule and channel
  ScheduleSpec schedule;
  double epsilon = kDefaultPetzEpsilon;
  std::optional<int> dim;
  // fit
  int bootstrap = 1000;
  // sweep
  std::vector<double> sweep_x{0.2};
  std::string state = "+";
  std::string observable = "X";
  // threshold
  double threshold_x_min = 0.05;
  double threshold_x_max = 0.7;
  int threshold_points = 25;
  std::vector<double> threshold_x;  ///< explicit grid; overrides the log grid
  std::vector<double> comparison_nbar{4.0, 10.0};
  // two-qubit
  std::vector<double> two_qubit_x{0.2, 0.4};
  std::vector<std::string> correlators{"XX"};
  // random coherence and parity
  std::vector<double> coherence_x{0.2, 0.4};
  int trials = 50;
  std::string parity_mode = "absolute";
  // wigner
  double wigner_nbar = 4.0;
  double wigner_eta = 0.82;
  Axis wigner_q;
  Axis wigner_p;
};

/// Overlays the sections present in `text` on `base`. Unknown keys and
/// malformed values raise a config error.
Config parse_config(std::string_view text, const Config& base = {});
Config load_config(const std::filesystem::path& path, const Config& base = {});
/// Pretty-printed JSON holding every setting.
std::string dump_config(const Config& config);
/// Throws a config error for out-of-range settings.
void validate(const Config& config);

/// n points log-spaced on [lo, hi], endpoints included.
std::vector<double> log_grid(double lo, double hi, int n);
/// Threshold x values: the explicit grid if given, else the log grid.
std::vector<double> threshold_grid(const Config& config);

/// 17 significant digits.
std::string csv_number(double v);
/// Empty field for an absent value.
std::string csv_number(const std::optional<double>& v);

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  /// Column index by name, or -1.
  int column(std::string_view name) const;
};

/// Parses a comma-separated file without quoting.
CsvTable read_csv(const std::filesystem::path& path);

/// Writes a header then rows, flushing after each row.
class CsvWriter {
 public:
  CsvWriter(const std::filesystem::path& path, std::vector<std::string> header);

  void write(const std::vector<std::string>& row);
  std::size_t columns() const noexcept { return columns_; }

 private:
  std::ofstream out_;
  std::size_t columns_;
};

void write_text(const std::filesystem::path& path, const std::string& text);

}  // namespace gkpzne
