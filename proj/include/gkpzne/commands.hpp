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

// Sub-commands of the gkpzne driver. Each writes its files under
// Config::out_dir and returns a process exit code.

#include <cstddef>
#include <functional>
#include <iosfwd>

#include "gkpzne/io.hpp"

namespace gkpzne {

inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 1;
inline constexpr int kExitNumerical = 2;
inline constexpr int kExitViolation = 3;

/// Exit code for a library error kind.
int exit_code_for(ErrorKind kind);

/// Runs compute(i) for i in [0, count) on `jobs` threads and calls
/// commit(i) on the calling thread in increasing i as results become
/// available, so output order never depends on scheduling.
void for_each_ordered(std::size_t count, int jobs,
                      const std::function<void(std::size_t)>& compute,
                      const std::function<void(std::size_t)>& commit);

/// Single-qubit sweep over (x, schedule): sweep.csv, fits.json.
int cmd_sweep(const Config& config, std::ostream& log);
/// L(x) over the threshold grid: threshold_cells.csv, threshold.csv,
/// threshold_meta.json.
int cmd_threshold(const Config& config, std::ostream& log);
/// |Phi+> correlators from PTM contraction: two_qubit.csv,
/// two_qubit_fits.json.
int cmd_two_qubit(const Config& config, std::ostream& log);
/// Random-state coherence error: coherence_trials.csv, coherence.csv,
/// coherence_fits.json, parity.csv, parity.json.
int cmd_random_coherence(const Config& config, std::ostream& log);
/// Parity analysis of an existing coherence.csv in the output directory.
int cmd_parity(const Config& config, std::ostream& log);
/// Wigner grids of the four pipeline stages: wigner_*.csv, wigner_meta.json.
int cmd_wigner(const Config& config, std::ostream& log);

}  // namespace gkpzne
