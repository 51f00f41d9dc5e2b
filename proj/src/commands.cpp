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

#include "gkpzne/commands.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <condition_variable>
#include <filesystem>
#include <map>
#include <mutex>
#include <numbers>
#include <ostream>
#include <set>
#include <thread>

#include <json.hpp>

#include "gkpzne/extrapolation.hpp"
#include "gkpzne/pipeline.hpp"
#include "gkpzne/two_qubit.hpp"

namespace gkpzne {

using nlohmann::json;
namespace fs = std::filesystem;

int exit_code_for(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::Config: return kExitConfig;
    case ErrorKind::PhysicalBounds: return kExitViolation;
    default: return kExitNumerical;
  }
}

void for_each_ordered(std::size_t count, int jobs,
                      const std::function<void(std::size_t)>& compute,
                      const std::function<void(std::size_t)>& commit) {
  if (jobs <= 1 || count <= 1) {
    for (std::size_t i = 0; i < count; ++i) {
      compute(i);
      commit(i);
    }
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<char> done(count, 0);
  std::mutex mutex;
  std::condition_variable ready;
  auto worker = [&] {
    for (std::size_t i = next++; i < count; i = next++) {
      compute(i);
      {
        std::lock_guard<std::mutex> lock(mutex);
        done[i] = 1;
      }
      ready.notify_all();
    }
  };
  std::vector<std::thread> pool;
  const auto threads = std::min<std::size_t>(static_cast<std::size_t>(jobs), count);
  for (std::size_t t = 0; t < threads; ++t) pool.emplace_back(worker);
  for (std::size_t i = 0; i < count; ++i) {
    std::unique_lock<std::mutex> lock(mutex);
    ready.wait(lock, [&] { return done[i] != 0; });
    lock.unlock();
    commit(i);
  }
  for (auto& th : pool) th.join();
}

namespace {

using Clock = std::chrono::steady_clock;
using Row = std::vector<std::string>;

const std::vector<std::string> kCellHeader{
    "x",     "eta",         "nbar_target", "nbar_realized", "delta", "dim",
    "state", "observable",  "weight",      "leak",          "conditional", "status"};

enum CellColumn { kX, kEta, kNbar, kRealized, kDelta, kDim, kState, kObs, kWeight,
                  kLeak, kCond, kStatus };

// Wall-clock seconds per cell; kept apart from the deterministic outputs.
class TimingLog {
 public:
  void add(const std::string& label, double x, double nbar, double seconds) {
    std::lock_guard<std::mutex> lock(mutex_);
    rows_.push_back({label, csv_number(x), csv_number(nbar), csv_number(seconds)});
  }
  void write(const fs::path& path) const {
    CsvWriter out(path, {"command", "x", "nbar", "seconds"});
    for (const auto& r : rows_) out.write(r);
  }

 private:
  std::mutex mutex_;
  std::vector<Row> rows_;
};

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

fs::path prepare_out(const Config& config) {
  fs::path dir(config.out_dir);
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw Error(ErrorKind::Config, "cannot create output directory " + dir.string());
  return dir;
}

ResponseOptions response_options(const Config& config) {
  ResponseOptions opt;
  opt.epsilon = config.epsilon;
  opt.dim = config.dim;
  return opt;
}

std::string cell_key(double x, double nbar, const std::string& obs) {
  return csv_number(x) + "|" + csv_number(nbar) + "|" + obs;
}

// Rows from an earlier run that finished cleanly, keyed by cell.
std::map<std::string, Row> resumable_rows(const Config& config, const fs::path& path) {
  std::map<std::string, Row> out;
  if (!config.resume || !fs::exists(path)) return out;
  const CsvTable table = read_csv(path);
  if (table.header != kCellHeader) return out;
  for (const auto& row : table.rows) {
    if (row[kStatus] == "ok" || row[kStatus] == "unreachable") {
      out[row[kX] + "|" + row[kNbar] + "|" + row[kObs]] = row;
    }
  }
  return out;
}

Row failed_row(double x, double nbar, const std::string& state, const std::string& obs,
               const std::string& status) {
  return {csv_number(x), csv_number(std::exp(-x)), csv_number(nbar), "", "", "",
          state,         obs,                     "",                "", "", status};
}

std::string status_for(const Error& e) {
  switch (e.kind()) {
    case ErrorKind::CalibrationFailed: return "unreachable";
    case ErrorKind::PhysicalBounds: return "violation";
    default: return "error";
  }
}

Row code_columns(const CodeSummary& code, double x, const std::string& state,
                 const std::string& obs, const Expectation& e) {
  return {csv_number(x),       csv_number(std::exp(-x)),  csv_number(code.target_nbar),
          csv_number(code.realized_nbar), csv_number(code.delta), std::to_string(code.dim),
          state,               obs,                       csv_number(e.weight),
          csv_number(e.leak),  csv_number(e.conditional), "ok"};
}

struct CellSpec {
  double x;
  double nbar;
};

// Runs a grid of cells with resume support and ordered, incremental writes.
// `evaluate` returns one row per observable for a cell.
std::vector<Row> run_cells(const Config& config, const fs::path& path,
                           const std::vector<CellSpec>& cells,
                           const std::vector<std::string>& observables,
                           const std::string& state, const std::string& label,
                           const std::function<std::vector<Row>(const CellSpec&)>& evaluate,
                           TimingLog& timing, std::ostream& log) {
  const auto previous = resumable_rows(config, path);
  std::vector<std::vector<Row>> results(cells.size());
  CsvWriter out(path, kCellHeader);
  std::vector<Row> all;
  std::mutex log_mutex;
  auto compute = [&](std::size_t i) {
    const CellSpec& cell = cells[i];
    std::vector<Row> rows;
    bool reused = true;
    for (const auto& obs : observables) {
      auto it = previous.find(cell_key(cell.x, cell.nbar, obs));
      if (it == previous.end()) {
        reused = false;
        break;
      }
      rows.push_back(it->second);
    }
    if (!reused) {
      const auto start = Clock::now();
      try {
        rows = evaluate(cell);
      } catch (const Error& e) {
        rows.clear();
        for (const auto& obs : observables) {
          rows.push_back(failed_row(cell.x, cell.nbar, state, obs, status_for(e)));
        }
        std::lock_guard<std::mutex> lock(log_mutex);
        log << "[" << label << "] x=" << cell.x << " nbar=" << cell.nbar << ": " << e.what()
            << "\n";
      }
      const double dt = seconds_since(start);
      timing.add(label, cell.x, cell.nbar, dt);
      std::lock_guard<std::mutex> lock(log_mutex);
      log << "[" << label << "] x=" << cell.x << " nbar=" << cell.nbar << " done in " << dt
          << " s\n";
    }
    results[i] = std::move(rows);
  };
  auto commit = [&](std::size_t i) {
    for (const auto& row : results[i]) {
      out.write(row);
      all.push_back(row);
    }
  };
  for_each_ordered(cells.size(), config.jobs, compute, commit);
  return all;
}

std::vector<DataPoint> fit_data(const std::vector<Row>& rows, double x, const std::string& obs) {
  std::vector<DataPoint> data;
  const std::string xs = csv_number(x);
  for (const auto& r : rows) {
    if (r[kX] != xs || r[kObs] != obs || r[kStatus] != "ok" || r[kCond].empty()) continue;
    data.push_back({std::stod(r[kNbar]), std::stod(r[kCond])});
  }
  return data;
}

json number_or_null(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

struct FitOutcome {
  json record;
  bool ok = false;
  std::optional<FitResult> fit;
  BootstrapResult boot;
};

FitOutcome fit_with_errors(const std::vector<DataPoint>& data, const Config& config) {
  FitOutcome out;
  json& j = out.record;
  j["n_points"] = data.size();
  j["B"] = config.bootstrap;
  j["seed"] = config.seed;
  j["weighting"] = "uniform";
  try {
    FitResult fit = fit_power_law(data);
    j["L"] = fit.L;
    j["c"] = fit.c;
    j["p"] = fit.p;
    j["rss"] = fit.rss;
    j["converged"] = fit.converged;
    if (fit.converged) {
      out.boot = bootstrap_se(data, fit, config.bootstrap, config.seed, config.jobs);
      fit.se_L = out.boot.se_L;
      fit.se_p = out.boot.se_p;
      const ResidualDiagnostic diag = residual_diagnostic(data, fit);
      j["residual_slope"] = number_or_null(diag.slope);
      j["residual_r2"] = number_or_null(diag.r2);
      j["residual_excluded"] = diag.excluded;
      j["bootstrap_failures"] = out.boot.failures;
      j["bootstrap_unstable"] = out.boot.unstable;
      j["status"] = "ok";
      out.ok = true;
    } else {
      j["status"] = "not-converged";
    }
    j["se_L"] = number_or_null(fit.se_L);
    j["se_p"] = number_or_null(fit.se_p);
    out.fit = std::move(fit);
  } catch (const Error& e) {
    j["status"] = e.kind() == ErrorKind::InsufficientData ? "insufficient-data" : "fit-failed";
    j["error"] = e.what();
  }
  return out;
}

int worst_exit(const std::vector<Row>& rows) {
  int code = kExitOk;
  for (const auto& r : rows) {
    if (r[kStatus] == "violation") code = std::max(code, kExitViolation);
    if (r[kStatus] == "error") code = std::max(code, kExitNumerical);
  }
  return code;
}

std::vector<CellSpec> grid(const std::vector<double>& xs, const std::vector<double>& nbars) {
  std::vector<CellSpec> cells;
  for (double x : xs) {
    for (double n : nbars) cells.push_back({x, n});
  }
  return cells;
}

std::vector<double> schedule_points(const Config& config) {
  return build_schedule(config.schedule.n0, config.schedule.dn, config.schedule.k).points();
}

std::function<std::vector<Row>(const CellSpec&)> single_qubit_evaluator(
    const Config& config, ResponseCache& cache, const LogicalDensity& input, Pauli obs) {
  return [&config, &cache, input, obs](const CellSpec& cell) {
    const auto code = cache.code(cell.nbar);
    const KrausSet loss = loss_kraus_from_depth(cell.x, code->dim());
    const KrausSet recovery = petz_recovery(loss, *code, config.epsilon);
    const LogicalDensity out = run_pipeline(input, *code, loss, recovery);
    const Expectation e = expectations(out, obs);
    return std::vector<Row>{code_columns(summarize(*code), cell.x, config.state,
                                        config.observable, e)};
  };
}

Pauli observable_of(const Config& config) {
  const auto obs = parse_pauli(config.observable);
  if (!obs) throw Error(ErrorKind::Config, "observable must be one of I, X, Y, Z");
  return *obs;
}

LogicalDensity state_of(const Config& config) {
  try {
    return LogicalDensity::from_label(config.state);
  } catch (const Error& e) {
    throw Error(ErrorKind::Config, e.what());
  }
}

}  // namespace

int cmd_sweep(const Config& config, std::ostream& log) {
  validate(config);
  const fs::path dir = prepare_out(config);
  const Pauli obs = observable_of(config);
  const LogicalDensity input = state_of(config);
  ResponseCache cache(response_options(config));
  TimingLog timing;
  const auto rows = run_cells(config, dir / "sweep.csv",
                              grid(config.sweep_x, schedule_points(config)),
                              {config.observable}, config.state, "sweep",
                              single_qubit_evaluator(config, cache, input, obs), timing, log);
  int code = worst_exit(rows);
  json fits = json::array();
  for (double x : config.sweep_x) {
    FitOutcome f = fit_with_errors(fit_data(rows, x, config.observable), config);
    f.record["x"] = x;
    f.record["observable"] = config.observable;
    f.record["state"] = config.state;
    if (!f.ok) code = std::max(code, kExitNumerical);
    fits.push_back(std::move(f.record));
  }
  write_text(dir / "fits.json", json{{"fits", fits}}.dump(2) + "\n");
  timing.write(dir / "timing.csv");
  return code;
}

int cmd_threshold(const Config& config, std::ostream& log) {
  validate(config);
  const fs::path dir = prepare_out(config);
  const Pauli obs = observable_of(config);
  const LogicalDensity input = state_of(config);
  const std::vector<double> xs = threshold_grid(config);
  std::vector<double> nbars = schedule_points(config);
  for (double n : config.comparison_nbar) {
    if (std::find(nbars.begin(), nbars.end(), n) == nbars.end()) nbars.push_back(n);
  }
  ResponseCache cache(response_options(config));
  TimingLog timing;
  const auto rows = run_cells(config, dir / "threshold_cells.csv", grid(xs, nbars),
                              {config.observable}, config.state, "threshold",
                              single_qubit_evaluator(config, cache, input, obs), timing, log);
  int code = worst_exit(rows);

  const std::vector<double> schedule = schedule_points(config);
  const std::set<double> in_schedule(schedule.begin(), schedule.end());
  Row header{"x", "L", "se_L", "p", "se_p"};
  for (double n : config.comparison_nbar) header.push_back("cond_nbar" + csv_number(n));
  header.push_back("status");
  CsvWriter table(dir / "threshold.csv", header);
  for (double x : xs) {
    std::vector<DataPoint> data;
    std::map<double, double> by_n;
    for (const auto& d : fit_data(rows, x, config.observable)) {
      by_n[d.n] = d.y;
      if (in_schedule.count(d.n)) data.push_back(d);
    }
    FitOutcome f = fit_with_errors(data, config);
    if (!f.ok) code = std::max(code, kExitNumerical);
    Row row{csv_number(x)};
    if (f.fit) {
      row.insert(row.end(), {csv_number(f.fit->L), csv_number(f.fit->se_L),
                             csv_number(f.fit->p), csv_number(f.fit->se_p)});
    } else {
      row.insert(row.end(), {"", "", "", ""});
    }
    for (double n : config.comparison_nbar) {
      auto it = by_n.find(n);
      row.push_back(it == by_n.end() ? "" : csv_number(it->second));
    }
    row.push_back(f.record["status"].get<std::string>());
    table.write(row);
  }
  const json meta{{"x_crit", -std::log(2.0 / 3.0)},
                  {"comparison_nbar", config.comparison_nbar},
                  {"observable", config.observable},
                  {"state", config.state},
                  {"bootstrap", config.bootstrap},
                  {"seed", config.seed},
                  {"weighting", "uniform"}};
  write_text(dir / "threshold_meta.json", meta.dump(2) + "\n");
  timing.write(dir / "timing.csv");
  return code;
}

namespace {

// Fills the cache for every (nbar, x) pair, in parallel when asked, and
// returns the schedule points whose code could be calibrated.
std::vector<double> warm_cache(const Config& config, ResponseCache& cache,
                               const std::vector<double>& xs, TimingLog& timing,
                               const std::string& label, std::ostream& log) {
  const std::vector<double> nbars = schedule_points(config);
  std::vector<char> reachable(nbars.size(), 1);
  for_each_ordered(
      nbars.size(), config.jobs,
      [&](std::size_t i) {
        try {
          cache.code(nbars[i]);
        } catch (const Error& e) {
          if (e.kind() != ErrorKind::CalibrationFailed) throw;
          reachable[i] = 0;
        }
      },
      [&](std::size_t i) {
        if (!reachable[i]) {
          log << "[" << label << "] nbar=" << nbars[i] << " cannot be calibrated; skipped\n";
        }
      });
  std::vector<double> usable;
  for (std::size_t i = 0; i < nbars.size(); ++i) {
    if (reachable[i]) usable.push_back(nbars[i]);
  }
  const auto cells = grid(xs, usable);
  for_each_ordered(
      cells.size(), config.jobs,
      [&](std::size_t i) {
        const auto start = Clock::now();
        cache.response(cells[i].nbar, cells[i].x);
        timing.add(label, cells[i].x, cells[i].nbar, seconds_since(start));
      },
      [&](std::size_t i) {
        log << "[" << label << "] x=" << cells[i].x << " nbar=" << cells[i].nbar << " ready\n";
      });
  return usable;
}

}  // namespace

int cmd_two_qubit(const Config& config, std::ostream& log) {
  validate(config);
  const fs::path dir = prepare_out(config);
  ResponseCache cache(response_options(config));
  TimingLog timing;
  const std::vector<double> nbars = schedule_points(config);
  const PauliCoeffs bell = pauli_coeffs(bell_phi_plus());
  std::vector<std::pair<Pauli, Pauli>> corr;
  for (const auto& c : config.correlators) {
    corr.push_back({*parse_pauli(c.substr(0, 1)), *parse_pauli(c.substr(1, 1))});
  }
  const std::string state = "phi+";
  auto evaluate = [&](const CellSpec& cell) {
    const Response r = cache.response(cell.nbar, cell.x);
    std::vector<Row> rows;
    for (std::size_t k = 0; k < corr.size(); ++k) {
      const Expectation e =
          product_expectation(bell, r.ptm, r.ptm, corr[k].first, corr[k].second);
      rows.push_back(code_columns(r.code, cell.x, state, config.correlators[k], e));
    }
    return rows;
  };
  const auto rows = run_cells(config, dir / "two_qubit.csv", grid(config.two_qubit_x, nbars),
                              config.correlators, state, "two-qubit", evaluate, timing, log);
  int code = worst_exit(rows);
  json fits = json::array();
  for (double x : config.two_qubit_x) {
    for (const auto& c : config.correlators) {
      FitOutcome f = fit_with_errors(fit_data(rows, x, c), config);
      f.record["x"] = x;
      f.record["observable"] = c;
      f.record["state"] = state;
      if (!f.ok) code = std::max(code, kExitNumerical);
      fits.push_back(std::move(f.record));
    }
  }
  write_text(dir / "two_qubit_fits.json", json{{"fits", fits}}.dump(2) + "\n");
  timing.write(dir / "timing.csv");
  return code;
}

namespace {

ParityMode parity_mode_of(const Config& config) {
  return config.parity_mode == "distance" ? ParityMode::DistanceToIdeal
                                          : ParityMode::AbsoluteError;
}

// Parity analysis per x over (nbar, mean_delta_e) data; writes parity.csv
// and parity.json.
int write_parity(const Config& config, const fs::path& dir,
                 const std::map<double, std::vector<DataPoint>>& series) {
  CsvWriter table(dir / "parity.csv", {"x", "n_cut", "n_points", "L", "converged",
                                       "meets_benchmark", "raw_benchmark"});
  json summary = json::array();
  int code = kExitOk;
  for (const auto& [x, data] : series) {
    if (data.size() < 4) {
      summary.push_back({{"x", x}, {"status", "insufficient-data"}});
      code = std::max(code, kExitNumerical);
      continue;
    }
    std::vector<double> ns;
    for (const auto& d : data) ns.push_back(d.n);
    std::sort(ns.begin(), ns.end());
    const auto top = std::max_element(data.begin(), data.end(),
                                      [](const DataPoint& a, const DataPoint& b) { return a.n < b.n; });
    const double raw = top->y;
    const std::vector<double> cutoffs(ns.begin() + 3, ns.end());
    const ParityResult pr = parity_analysis(data, raw, cutoffs, parity_mode_of(config));
    for (const auto& e : pr.entries) {
      table.write({csv_number(x), csv_number(e.n_cut), std::to_string(e.n_points),
                   e.fit ? csv_number(e.fit->L) : "",
                   e.fit && e.fit->converged ? "true" : "false",
                   e.meets_benchmark ? "true" : "false", csv_number(raw)});
    }
    summary.push_back({{"x", x},
                       {"raw_benchmark", raw},
                       {"raw_benchmark_nbar", top->n},
                       {"mode", config.parity_mode},
                       {"parity_point", pr.parity_point ? json(*pr.parity_point) : json(nullptr)},
                       {"status", pr.parity_point ? "reached" : "not-reached"}});
  }
  write_text(dir / "parity.json", json{{"parity", summary}}.dump(2) + "\n");
  return code;
}

}  // namespace

int cmd_random_coherence(const Config& config, std::ostream& log) {
  validate(config);
  const fs::path dir = prepare_out(config);
  ResponseCache cache(response_options(config));
  TimingLog timing;
  std::vector<double> xs = config.coherence_x;
  xs.push_back(0.0);
  const std::vector<double> usable = warm_cache(config, cache, xs, timing, "random-coherence", log);
  if (usable.empty()) throw Error(ErrorKind::Schedule, "no schedule point could be calibrated");
  const EnergySchedule schedule(usable);

  CsvWriter trials(dir / "coherence_trials.csv",
                   {"trial", "seed", "nbar", "x", "obs", "leak", "cond", "ideal"});
  CsvWriter agg(dir / "coherence.csv", {"nbar", "x", "mean_delta_e", "excluded_trials"});
  std::map<double, std::vector<DataPoint>> series;
  json fits = json::array();
  int code = kExitOk;
  for (double x : config.coherence_x) {
    const CoherenceResult r = coherence_error(config.trials, schedule, x, config.seed, cache);
    for (const auto& rec : r.records) {
      trials.write({std::to_string(rec.trial), std::to_string(rec.seed), csv_number(rec.nbar),
                    csv_number(rec.x), rec.obs, csv_number(rec.leak), csv_number(rec.cond),
                    csv_number(rec.ideal)});
    }
    for (const auto& p : r.points) {
      agg.write({csv_number(p.nbar), csv_number(p.x), csv_number(p.mean_delta_e),
                 std::to_string(p.excluded_trials)});
      if (std::isfinite(p.mean_delta_e)) series[x].push_back({p.nbar, p.mean_delta_e});
    }
    FitOutcome f = fit_with_errors(series[x], config);
    f.record["x"] = x;
    f.record["observable"] = "delta_e";
    f.record["trials"] = config.trials;
    if (!f.ok) code = std::max(code, kExitNumerical);
    fits.push_back(std::move(f.record));
  }
  write_text(dir / "coherence_fits.json", json{{"fits", fits}}.dump(2) + "\n");
  code = std::max(code, write_parity(config, dir, series));
  timing.write(dir / "timing.csv");
  return code;
}

int cmd_parity(const Config& config, std::ostream& log) {
  validate(config);
  const fs::path dir = prepare_out(config);
  const fs::path source = dir / "coherence.csv";
  if (!fs::exists(source)) {
    throw Error(ErrorKind::Config, source.string() + " not found; run random-coherence first");
  }
  const CsvTable table = read_csv(source);
  const int cn = table.column("nbar"), cx = table.column("x"), cy = table.column("mean_delta_e");
  if (cn < 0 || cx < 0 || cy < 0) throw Error(ErrorKind::Config, "coherence.csv has an unexpected header");
  std::map<double, std::vector<DataPoint>> series;
  for (const auto& row : table.rows) {
    if (row[cy].empty()) continue;
    const double y = std::stod(row[cy]);
    if (std::isfinite(y)) series[std::stod(row[cx])].push_back({std::stod(row[cn]), y});
  }
  log << "[parity] " << series.size() << " loss depths from " << source.string() << "\n";
  return write_parity(config, dir, series);
}

int cmd_wigner(const Config& config, std::ostream& log) {
  validate(config);
  const fs::path dir = prepare_out(config);
  const GkpCode code = calibrate_code(config.wigner_nbar, config.dim);
  const KrausSet loss = loss_kraus(config.wigner_eta, code.dim());
  const KrausSet recovery = petz_recovery(loss, code, config.epsilon);
  const CMatrix& e = code.isometry();
  const Block2 plus = LogicalDensity::from_label("+").block();

  const FockMatrix codespace(0.5 * code.projector().matrix());
  const FockMatrix encoded(e * plus * e.adjoint());
  const FockMatrix lossy = apply_channel(loss, encoded);
  const FockMatrix recovered = apply_channel(recovery, lossy);

  struct Stage {
    const char* name;
    const FockMatrix* rho;
  };
  const Stage stages[] = {{"codespace", &codespace},
                          {"encoded", &encoded},
                          {"loss", &lossy},
                          {"recovered", &recovered}};
  json meta{{"nbar_target", config.wigner_nbar},
            {"nbar_realized", code.nbar()},
            {"delta", code.delta()},
            {"dim", code.dim()},
            {"eta", config.wigner_eta}};
  for (const auto& s : stages) {
    const double weight = s.rho->trace().real();
    const WignerGrid g = wigner(*s.rho, config.wigner_q, config.wigner_p, weight);
    std::ofstream out(dir / ("wigner_" + std::string(s.name) + ".csv"),
                      std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorKind::Config, "cannot write Wigner output");
    write_csv(out, g);
    meta["stages"][s.name] = {{"trace", weight}, {"integral", integrate(g)},
                              {"min", g.values.minCoeff()}, {"max", g.values.maxCoeff()}};
    log << "[wigner] " << s.name << " written\n";
  }
  write_text(dir / "wigner_meta.json", meta.dump(2) + "\n");
  return kExitOk;
}

}  // namespace gkpzne
