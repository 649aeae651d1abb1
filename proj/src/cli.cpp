#include "mipt/cli.hpp"

#include <CLI11.hpp>

#include <chrono>
#include <cmath>
#include <iostream>
#include <map>
#include <set>
#include <sstream>

#include "mipt/errors.hpp"
#include "mipt/observers.hpp"
#include "mipt/parallel.hpp"
#include "mipt/rng.hpp"

namespace mipt {

namespace {

constexpr const char* kVersion = "1.0.0";

struct HelpRequested {
  std::string text;
  int status;
};

const std::map<std::string, Command>& command_table() {
  static const std::map<std::string, Command> table{
      {"noclick-scan", Command::NoclickScan}, {"noclick-point", Command::NoclickPoint},
      {"trajectory", Command::Trajectory},    {"ensemble", Command::Ensemble},
      {"fit", Command::Fit},                  {"correlators", Command::Correlators}};
  return table;
}

const std::set<std::string>& observable_names() {
  static const std::set<std::string> names{"entropy",   "fq_max",    "mz",       "lambda_xx",
                                           "lambda_yy", "lambda_zz", "lambda_xy"};
  return names;
}

}  // namespace

const char* command_name(Command c) {
  for (const auto& [name, cmd] : command_table()) {
    if (cmd == c) return name.c_str();
  }
  return "unknown";
}

void RunConfig::validate() const {
  auto need = [](bool ok, const std::string& msg) { require(ok, ErrorKind::Parameter, msg); };
  need(!L.empty() && !h.empty() && !gamma.empty(), "L, h and gamma need at least one value");
  for (int l : L) need(l >= 4 && l % 2 == 0, "L: must be an even integer >= 4");
  for (double x : h) need(std::isfinite(x), "h: must be finite");
  for (double g : gamma) need(std::isfinite(g) && g >= 0.0, "gamma: must satisfy gamma >= 0");
  need(dt > 0.0, "dt: must satisfy dt > 0");
  need(t_max > 0.0, "tmax: must satisfy tmax > 0");
  need(sample_every > 0.0, "sample-every: must satisfy sample-every > 0");
  need(trajectories >= 1, "trajectories: must be >= 1");
  need(format == "csv" || format == "json", "format: must be csv or json");
  need(threads >= 0, "threads: must be >= 0");
  need(ell >= 0, "ell: must be >= 0 (0 selects L/4)");
  for (int l : L) need(ell < l, "ell: must be smaller than L");
  need(anneal_restarts >= 1, "anneal-restarts: must be >= 1");
  need(anneal_sweeps >= 1, "anneal-sweeps: must be >= 1");
  need(anneal_cooling > 0.0 && anneal_cooling < 1.0, "anneal-cooling: must lie in (0, 1)");
  need(stationary_fraction > 0.0 && stationary_fraction <= 1.0,
       "stationary-fraction: must lie in (0, 1]");
  need(fit_lo < fit_hi, "fit-lo/fit-hi: window must satisfy fit-lo < fit-hi");
  need(decay_lo < decay_hi, "decay-lo/decay-hi: window must satisfy decay-lo < decay-hi");
  need(table == "ctilde" || table == "tensor", "table: must be ctilde or tensor");
  for (const auto& o : observe) {
    need(observable_names().count(o) == 1, "observe: unknown observable '" + o + "'");
  }
  need(command != Command::Fit || !in.empty(), "in: the fit command needs an input file");
  if (command == Command::Trajectory || command == Command::Ensemble) {
    for (int l : L) {
      for (double g : gamma) {
        need(dt * g * l < 0.5, "dt: must satisfy dt * gamma * L < 0.5 (L = " + std::to_string(l) +
                                   ", gamma = " + format_number(g) + ")");
      }
    }
  }
}

std::string RunConfig::output_path() const {
  if (!out.empty()) return out;
  const bool js = command == Command::Fit || format == "json";
  return std::string("mipt_") + command_name(command) + (js ? ".json" : ".csv");
}

RunConfig parse_config(int argc, const char* const* argv) {
  RunConfig cfg;
  CLI::App app{"Monitored quantum Ising chain: Gaussian trajectories, correlators and QFI"};
  app.set_help_flag("--help", "print this help and exit");
  app.set_config("--config", "", "flat key=value configuration file (flags override it)");
  app.allow_config_extras(CLI::config_extras_mode::error);

  std::string command = command_name(cfg.command);
  std::vector<std::string> names;
  for (const auto& [name, unused] : command_table()) names.push_back(name);
  app.add_option("--command", command, "what to run")->check(CLI::IsMember(names));
  app.add_option("--L", cfg.L, "system size(s), comma separated")->delimiter(',');
  app.add_option("--h", cfg.h, "transverse field(s)")->delimiter(',');
  app.add_option("--gamma", cfg.gamma, "measurement rate(s)")->delimiter(',');
  app.add_option("--dt", cfg.dt, "time step");
  app.add_option("--tmax", cfg.t_max, "final time");
  app.add_option("--sample-every", cfg.sample_every, "observable sampling interval");
  app.add_option("--trajectories", cfg.trajectories, "ensemble size");
  app.add_option("--seed", cfg.seed, "master seed");
  app.add_option("--out", cfg.out, "output path");
  app.add_option("--format", cfg.format, "csv or json");
  app.add_option("--threads", cfg.threads, "worker threads (0: MIPT_THREADS or all cores)");
  app.add_option("--ell", cfg.ell, "entropy subsystem length (0: L/4)");
  app.add_option("--anneal-restarts", cfg.anneal_restarts, "annealing restarts");
  app.add_option("--anneal-sweeps", cfg.anneal_sweeps, "annealing sweeps per site");
  app.add_option("--anneal-cooling", cfg.anneal_cooling, "geometric cooling factor per sweep");
  app.add_option("--observe", cfg.observe, "trajectory observables")->delimiter(',');
  app.add_option("--stationary-fraction", cfg.stationary_fraction,
                 "trailing fraction of samples averaged as stationary");
  app.add_option("--fit-lo", cfg.fit_lo, "smallest L in size fits");
  app.add_option("--fit-hi", cfg.fit_hi, "largest L in size fits");
  app.add_option("--decay-lo", cfg.decay_lo, "smallest distance in decay fits");
  app.add_option("--decay-hi", cfg.decay_hi, "largest distance in decay fits");
  app.add_option("--table", cfg.table, "correlators output: ctilde or tensor");
  app.add_option("--in", cfg.in, "input file for the fit command");
  app.add_option("--snapshot", cfg.snapshot, "binary (C, F) snapshot path");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    throw HelpRequested{app.help(), 0};
  } catch (const CLI::ConfigError& e) {
    fail(ErrorKind::Parameter, std::string("config file: unknown key or malformed line (") +
                                   e.what() + ")");
  } catch (const CLI::ParseError& e) {
    fail(ErrorKind::Parameter, e.what());
  }
  cfg.command = command_table().at(command);
  cfg.sizes_given = app.count("--L") > 0;
  cfg.validate();
  return cfg;
}

json config_to_json(const RunConfig& c) {
  return {{"command", command_name(c.command)},
          {"L", c.L},
          {"h", c.h},
          {"gamma", c.gamma},
          {"dt", c.dt},
          {"tmax", c.t_max},
          {"sample-every", c.sample_every},
          {"trajectories", c.trajectories},
          {"seed", c.seed},
          {"out", c.output_path()},
          {"format", c.format},
          {"threads", resolve_threads(c.threads)},
          {"ell", c.ell},
          {"entropy_subsystem", c.ell > 0 ? "start 0, length ell" : "start 0, length L/4"},
          {"anneal-restarts", c.anneal_restarts},
          {"anneal-sweeps", c.anneal_sweeps},
          {"anneal-cooling", c.anneal_cooling},
          {"observe", c.observe},
          {"stationary-fraction", c.stationary_fraction},
          {"fit-lo", c.fit_lo},
          {"fit-hi", c.fit_hi},
          {"decay-lo", c.decay_lo},
          {"decay-hi", c.decay_hi},
          {"table", c.table},
          {"in", c.in},
          {"snapshot", c.snapshot}};
}

namespace {

AnnealSchedule schedule_of(const RunConfig& c, int threads) {
  AnnealSchedule s;
  s.sweeps_per_site = c.anneal_sweeps;
  s.cooling = c.anneal_cooling;
  s.threads = threads;
  return s;
}

EntropyRequest entropy_request_of(const RunConfig& c, int L) {
  return c.ell > 0 ? EntropyRequest{0, c.ell} : default_entropy_request(L);
}

struct Output {
  std::string body;
  json meta = json::object();
};

double mean_of_tail(const std::vector<double>& v, double fraction) {
  const std::size_t n = v.size();
  if (n == 0) return std::numeric_limits<double>::quiet_NaN();
  const auto w = std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil(fraction * n)));
  double s = 0.0;
  for (std::size_t k = n - w; k < n; ++k) s += v[k];
  return s / static_cast<double>(w);
}

Output run_noclick_point(const RunConfig& c, int threads) {
  const double h = c.h.front(), g = c.gamma.front();
  CsvTable table{{"L", "h", "gamma", "fq_max", "restarts", "seed"}, {}};
  json points = json::array();
  json seeds = json::array();
  std::vector<double> sizes, values;
  for (int L : c.L) {
    NoclickOptions opts;
    opts.schedule = schedule_of(c, threads);
    opts.restarts = c.anneal_restarts;
    opts.seed = derive_seed(c.seed, static_cast<std::uint64_t>(L));
    opts.ell = c.ell;
    const auto obs = noclick_observables({L, h, g}, opts);
    table.rows.push_back({std::to_string(L), format_number(h), format_number(g),
                          format_number(obs.qfi.fq_density), std::to_string(c.anneal_restarts),
                          std::to_string(opts.seed)});
    points.push_back({{"params", to_json(obs.params)},
                      {"fq_max", obs.qfi.fq_density},
                      {"entropy", obs.entropy},
                      {"ell", obs.subsystem.length},
                      {"qfi", to_json(obs.qfi)}});
    seeds.push_back({{"L", L}, {"seed", opts.seed}});
    sizes.push_back(L);
    values.push_back(obs.qfi.fq_density);
  }
  Output out;
  out.meta["seeds"] = seeds;
  if (c.format == "csv") {
    out.body = format_csv(table);
  } else {
    json doc = {{"schema", "mipt.noclick_point/1"}, {"points", points}};
    if (sizes.size() >= 4) doc["p"] = to_json(fit_power_law(sizes, values, {c.fit_lo, c.fit_hi}));
    out.body = doc.dump(2) + "\n";
  }
  return out;
}

Output run_noclick_scan(const RunConfig& c, int threads) {
  ScanSpec spec;
  for (double h : c.h) {
    for (double g : c.gamma) spec.grid.emplace_back(h, g);
  }
  spec.sizes = c.sizes_given ? c.L : default_scan_sizes();
  spec.window = {c.fit_lo, c.fit_hi};
  spec.seed = c.seed;
  spec.options.schedule = schedule_of(c, 1);
  spec.options.restarts = c.anneal_restarts;
  spec.options.ell = c.ell;
  spec.threads = threads;
  const auto points = scan_phase_diagram(spec);

  Output out;
  out.meta["sizes"] = spec.sizes;
  if (c.format == "csv") {
    out.body = format_csv(scan_table(points));
  } else {
    json arr = json::array();
    for (const auto& pt : points) {
      json rows = json::array();
      for (const auto& r : pt.rows) {
        rows.push_back({{"L", r.L}, {"fq_max", r.fq_max}, {"entropy", r.entropy}});
      }
      json p = pt.p ? to_json(*pt.p) : json(nullptr);
      arr.push_back({{"h", pt.h},
                     {"gamma", pt.gamma},
                     {"gamma_over_gc", pt.gamma_over_gc},
                     {"rows", rows},
                     {"p", p},
                     {"error", pt.error}});
    }
    out.body = json{{"schema", "mipt.scan/1"}, {"points", arr}}.dump(2) + "\n";
  }
  return out;
}

Output run_correlators(const RunConfig& c) {
  SpinCorrelationTensor tensor;
  json source;
  if (!c.snapshot.empty()) {
    const CorrelationState state = read_snapshot(c.snapshot);
    tensor = correlation_tensor(state);
    source = {{"snapshot", c.snapshot}, {"time", state.time}, {"L", state.L()}};
  } else {
    const ModelParams p{c.L.front(), c.h.front(), c.gamma.front()};
    p.validate();
    tensor = correlation_tensor(noclick_vacuum(p), p.L);
    source = {{"noclick_vacuum", to_json(p)}};
  }
  Output out;
  out.meta["source"] = source;
  if (c.format == "csv") {
    out.body = format_csv(c.table == "tensor" ? tensor_table(tensor) : ctilde_table(tensor));
  } else {
    json ct = json::object();
    for (Block b : kAllBlocks) {
      std::vector<double> v;
      for (int ell = 1; ell <= tensor.L / 2; ++ell) v.push_back(averaged_abs_correlator(tensor, b, ell));
      ct[block_name(b)] = v;
    }
    std::vector<double> row_xx;
    for (int ell = 0; ell < tensor.L; ++ell) row_xx.push_back(tensor.xx(0, ell).real());
    out.body = json{{"schema", "mipt.correlators/1"},
                    {"source", source},
                    {"ctilde", ct},
                    {"xx_row", row_xx}}
                   .dump(2) +
               "\n";
  }
  return out;
}

std::vector<Observer> make_observers(const RunConfig& c, int L, std::uint64_t qfi_seed) {
  std::vector<Observer> obs;
  for (const auto& name : c.observe) {
    if (name == "entropy") obs.push_back(entropy_observer(entropy_request_of(c, L)));
    if (name == "fq_max") obs.push_back(qfi_observer(schedule_of(c, 1), c.anneal_restarts, qfi_seed));
    if (name == "mz") obs.push_back(magnetization_observer());
    if (name.rfind("lambda_", 0) == 0) {
      obs.push_back(decay_observer(parse_block(name.substr(7)), {c.decay_lo, c.decay_hi}));
    }
  }
  return obs;
}

TrajectoryOptions trajectory_options(const RunConfig& c) {
  TrajectoryOptions o;
  o.dt = c.dt;
  o.t_max = c.t_max;
  o.sample_every = c.sample_every;
  return o;
}

Output run_trajectory(const RunConfig& c) {
  const ModelParams p{c.L.front(), c.h.front(), c.gamma.front()};
  const std::uint64_t seed = derive_seed(c.seed, 0);
  const auto rec = evolve_trajectory(p, trajectory_options(c), seed,
                                     make_observers(c, p.L, derive_seed(seed, 1)));
  if (!c.snapshot.empty()) write_snapshot(c.snapshot, rec.final_state);
  Output out;
  out.meta["seeds"] = json::array({seed});
  out.meta["jumps"] = rec.jumps.size();
  if (c.format == "json") {
    out.body = to_json(rec).dump(2) + "\n";
  } else {
    CsvTable table{{"t"}, {}};
    for (const auto& [key, unused] : rec.observables) table.header.push_back(key);
    for (std::size_t k = 0; k < rec.sample_times.size(); ++k) {
      std::vector<std::string> row{format_number(rec.sample_times[k])};
      for (const auto& [key, series] : rec.observables) row.push_back(format_number(series[k]));
      table.rows.push_back(std::move(row));
    }
    out.body = format_csv(table);
  }
  return out;
}

Output run_ensemble_cmd(const RunConfig& c, int threads) {
  const double h = c.h.front(), g = c.gamma.front();
  json summaries = json::array();
  json seeds = json::array();
  CsvTable table{{"h", "gamma", "L", "fq_max_mean", "fq_max_err", "entropy_mean", "entropy_err",
                  "p", "p_err"},
                 {}};
  CsvTable scaling{{"L", "S", "stderr"}, {}};
  std::vector<double> sizes, fq;
  const double nan = std::numeric_limits<double>::quiet_NaN();
  for (int L : c.L) {
    const ModelParams p{L, h, g};
    const std::uint64_t master = derive_seed(c.seed, static_cast<std::uint64_t>(L));
    const auto records = run_ensemble(
        p, trajectory_options(c), master, static_cast<std::size_t>(c.trajectories),
        [&](std::size_t i) {
          return make_observers(c, L, derive_seed(derive_seed(master, i), 1));
        },
        threads);
    for (std::size_t i = 0; i < records.size(); ++i) {
      seeds.push_back({{"L", L}, {"index", i}, {"seed", records[i].seed}});
    }
    const EnsembleSummary s = ensemble_summary(records, c.stationary_fraction);
    json js = to_json(s);
    for (const auto& [key, o] : s.observables) {
      if (key.rfind("lambda_", 0) != 0) continue;
      // Fraction of trajectories whose stationary-window lambda is below 1.
      int below = 0, valid = 0;
      for (const auto& rec : records) {
        const double v = mean_of_tail(rec.observables.at(key), c.stationary_fraction);
        if (std::isnan(v)) continue;
        ++valid;
        if (v < 1.0) ++below;
      }
      js["fraction_" + key + "_below_1"] = valid > 0 ? static_cast<double>(below) / valid : nan;
    }
    summaries.push_back(js);
    auto stat = [&](const std::string& key, bool err) {
      const auto it = s.observables.find(key);
      if (it == s.observables.end()) return nan;
      return err ? it->second.stationary_error : it->second.stationary_mean;
    };
    table.rows.push_back({format_number(h), format_number(g), std::to_string(L),
                          format_number(stat("fq_max", false)), format_number(stat("fq_max", true)),
                          format_number(stat("entropy", false)),
                          format_number(stat("entropy", true)), "", ""});
    scaling.rows.push_back({std::to_string(L), format_number(stat("entropy", false)),
                            format_number(stat("entropy", true))});
    sizes.push_back(L);
    fq.push_back(stat("fq_max", false));
  }
  std::optional<FitResult> pfit;
  if (sizes.size() >= 4 && !std::isnan(fq.front())) {
    pfit = fit_power_law(sizes, fq, {c.fit_lo, c.fit_hi});
    table.rows.push_back({format_number(h), format_number(g), "fit", "", "", "", "",
                          format_number(pfit->exponent), format_number(pfit->std_error)});
  }
  Output out;
  out.meta["seeds"] = seeds;
  if (c.format == "csv") {
    out.body = format_csv(table);
    write_text(c.output_path() + ".entropy.csv", format_csv(scaling));
    out.meta["entropy_table"] = c.output_path() + ".entropy.csv";
  } else {
    json doc = {{"schema", "mipt.ensemble_set/1"}, {"summaries", summaries}};
    if (pfit) doc["p"] = to_json(*pfit);
    out.body = doc.dump(2) + "\n";
  }
  return out;
}

// ---- fit -------------------------------------------------------------------

json fit_entry(const std::string& label, const FitResult& f) {
  json j = to_json(f);
  j["label"] = label;
  return j;
}

json try_fit(const std::string& label, const std::function<FitResult()>& fn) {
  try {
    return fit_entry(label, fn());
  } catch (const Error& e) {
    return {{"label", label}, {"error", std::string(to_string(e.kind())) + ": " + e.what()}};
  }
}

json fit_sizes_by_point(const CsvTable& t, const std::string& value_col, const RunConfig& c) {
  std::map<std::pair<double, double>, std::pair<std::vector<double>, std::vector<double>>> groups;
  const auto ih = t.column("h"), ig = t.column("gamma"), il = t.column("L"),
             iv = t.column(value_col);
  for (const auto& r : t.rows) {
    if (r[il] == "fit") continue;
    auto& [x, y] = groups[{parse_number(r[ih]), parse_number(r[ig])}];
    x.push_back(parse_number(r[il]));
    y.push_back(parse_number(r[iv]));
  }
  json fits = json::array();
  for (const auto& [key, xy] : groups) {
    std::ostringstream label;
    label << "p(h=" << format_number(key.first) << ", gamma=" << format_number(key.second) << ")";
    fits.push_back(try_fit(label.str(), [&] {
      return fit_power_law(xy.first, xy.second, {c.fit_lo, c.fit_hi});
    }));
  }
  return fits;
}

json fit_entropy_table(const CsvTable& t) {
  std::vector<double> lnL, S;
  for (const auto& r : t.rows) {
    lnL.push_back(std::log(parse_number(r[t.column("L")])));
    S.push_back(parse_number(r[t.column("S")]));
  }
  // S = c ln L + b: fitting exp(S) as a power law of L gives c as the exponent.
  std::vector<double> L, expS;
  for (std::size_t k = 0; k < S.size(); ++k) {
    L.push_back(std::exp(lnL[k]));
    expS.push_back(std::exp(S[k]));
  }
  json f = try_fit("entropy log coefficient", [&] { return fit_power_law(L, expS); });
  return json::array({f});
}

json fit_decay_tables(const std::map<std::string, std::vector<std::pair<double, double>>>& series,
                      const RunConfig& c) {
  json fits = json::array();
  for (const auto& [name, pts] : series) {
    std::vector<double> x, y;
    for (const auto& [ell, v] : pts) {
      x.push_back(ell);
      y.push_back(v);
    }
    try {
      const auto cls = classify_decay(x, y, {c.decay_lo, c.decay_hi});
      json j = {{"label", "decay " + name},
                {"regime", cls.regime},
                {"power_law", to_json(cls.power_law)},
                {"exponential", to_json(cls.exponential)}};
      fits.push_back(j);
    } catch (const Error& e) {
      fits.push_back({{"label", "decay " + name},
                      {"error", std::string(to_string(e.kind())) + ": " + e.what()}});
    }
  }
  return fits;
}

Output run_fit(const RunConfig& c) {
  const std::string text = read_text(c.in);
  json fits = json::array();
  std::string kind;
  const auto first = text.find_first_not_of(" \t\r\n");
  if (first != std::string::npos && text[first] == '{') {
    const json doc = json::parse(text);
    const std::string schema = doc.value("schema", "");
    kind = schema;
    if (schema == "mipt.trajectory/1") {
      const TrajectoryRecord rec = trajectory_from_json(doc);
      for (const auto& [key, series] : rec.observables) {
        fits.push_back({{"label", "stationary " + key},
                        {"value", mean_of_tail(series, c.stationary_fraction)}});
      }
    } else if (schema == "mipt.ensemble_set/1" || schema == "mipt.noclick_point/1") {
      std::vector<double> sizes, fq, entropy;
      const bool ens = schema == "mipt.ensemble_set/1";
      for (const auto& item : doc.at(ens ? "summaries" : "points")) {
        sizes.push_back(item.at("params").at("L").get<double>());
        if (ens) {
          const auto& obs = item.at("observables");
          auto get = [&](const char* k) {
            return obs.contains(k) ? obs.at(k).at("stationary_mean").get<double>()
                                   : std::numeric_limits<double>::quiet_NaN();
          };
          fq.push_back(get("fq_max"));
          entropy.push_back(get("entropy"));
        } else {
          fq.push_back(item.at("fq_max").get<double>());
          entropy.push_back(item.at("entropy").get<double>());
        }
      }
      fits.push_back(try_fit("p", [&] { return fit_power_law(sizes, fq, {c.fit_lo, c.fit_hi}); }));
      std::vector<double> expS;
      for (double s : entropy) expS.push_back(std::exp(s));
      fits.push_back(try_fit("entropy log coefficient",
                             [&] { return fit_power_law(sizes, expS, {c.fit_lo, c.fit_hi}); }));
    } else if (schema == "mipt.scan/1") {
      for (const auto& pt : doc.at("points")) {
        std::vector<double> sizes, fq;
        for (const auto& r : pt.at("rows")) {
          sizes.push_back(r.at("L").get<double>());
          fq.push_back(r.at("fq_max").get<double>());
        }
        std::ostringstream label;
        label << "p(h=" << pt.at("h").get<double>() << ", gamma=" << pt.at("gamma").get<double>()
              << ")";
        fits.push_back(
            try_fit(label.str(), [&] { return fit_power_law(sizes, fq, {c.fit_lo, c.fit_hi}); }));
      }
    } else if (schema == "mipt.correlators/1") {
      std::map<std::string, std::vector<std::pair<double, double>>> series;
      for (const auto& [name, values] : doc.at("ctilde").items()) {
        const auto v = values.get<std::vector<double>>();
        for (std::size_t k = 0; k < v.size(); ++k) series[name].emplace_back(k + 1.0, v[k]);
      }
      fits = fit_decay_tables(series, c);
    } else if (schema == "mipt.fit/1") {
      fits = doc.at("fits");
    } else {
      fail(ErrorKind::Io, "fit: unsupported JSON schema '" + schema + "'");
    }
  } else {
    const CsvTable t = parse_csv(text);
    if (t.has_column("gamma_over_gc")) {
      kind = "scan.csv";
      fits = fit_sizes_by_point(t, "fq_max", c);
    } else if (t.has_column("fq_max_mean")) {
      kind = "ensemble.csv";
      fits = fit_sizes_by_point(t, "fq_max_mean", c);
    } else if (t.has_column("restarts")) {
      kind = "qfi.csv";
      fits = fit_sizes_by_point(t, "fq_max", c);
    } else if (t.has_column("S")) {
      kind = "entropy.csv";
      fits = fit_entropy_table(t);
    } else if (t.has_column("ell")) {
      kind = "ctilde.csv";
      std::map<std::string, std::vector<std::pair<double, double>>> series;
      for (const auto& r : t.rows) {
        series[r[t.column("alpha")] + r[t.column("beta")]].emplace_back(
            parse_number(r[t.column("ell")]), parse_number(r[t.column("value")]));
      }
      fits = fit_decay_tables(series, c);
    } else if (t.has_column("re")) {
      kind = "tensor.csv";
      std::map<std::string, std::map<std::pair<int, int>, double>> abs_by_block;
      int L = 0;
      for (const auto& r : t.rows) {
        const int i = std::stoi(r[t.column("i")]), j = std::stoi(r[t.column("j")]);
        L = std::max({L, i + 1, j + 1});
        abs_by_block[r[t.column("alpha")] + r[t.column("beta")]][{i, j}] =
            std::hypot(parse_number(r[t.column("re")]), parse_number(r[t.column("im")]));
      }
      std::map<std::string, std::vector<std::pair<double, double>>> series;
      for (const auto& [name, m] : abs_by_block) {
        for (int ell = 1; ell <= L / 2; ++ell) {
          double sum = 0.0;
          for (int i = 0; i < L; ++i) {
            const auto it = m.find({i, (i + ell) % L});
            if (it != m.end()) sum += it->second;
          }
          series[name].emplace_back(ell, sum / L);
        }
      }
      fits = fit_decay_tables(series, c);
    } else if (t.has_column("t")) {
      kind = "trajectory.csv";
      for (std::size_t col = 1; col < t.header.size(); ++col) {
        std::vector<double> v;
        for (const auto& r : t.rows) v.push_back(parse_number(r[col]));
        fits.push_back({{"label", "stationary " + t.header[col]},
                        {"value", mean_of_tail(v, c.stationary_fraction)}});
      }
    } else {
      fail(ErrorKind::Io, "fit: unrecognized CSV header in '" + c.in + "'");
    }
  }
  Output out;
  out.body = json{{"schema", "mipt.fit/1"}, {"input", c.in}, {"input_kind", kind}, {"fits", fits}}
                 .dump(2) +
             "\n";
  return out;
}

json error_json(const std::string& kind, const std::string& message) {
  return {{"schema", "mipt.error/1"}, {"kind", kind}, {"message", message}};
}

}  // namespace

int run(const RunConfig& c, std::ostream& log) {
  c.validate();
  const int threads = resolve_threads(c.threads);
  const auto t0 = std::chrono::steady_clock::now();
  Output out;
  switch (c.command) {
    case Command::NoclickPoint: out = run_noclick_point(c, threads); break;
    case Command::NoclickScan: out = run_noclick_scan(c, threads); break;
    case Command::Correlators: out = run_correlators(c); break;
    case Command::Trajectory: out = run_trajectory(c); break;
    case Command::Ensemble: out = run_ensemble_cmd(c, threads); break;
    case Command::Fit: out = run_fit(c); break;
  }
  const double wall =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  const std::string path = c.output_path();
  write_text(path, out.body);

  json meta = {{"schema", "mipt.meta/1"},
               {"version", kVersion},
               {"output", path},
               {"config", config_to_json(c)},
               {"wall_time_s", wall}};
  for (auto& [k, v] : out.meta.items()) meta[k] = v;
  write_text(path + ".meta.json", meta.dump(2) + "\n");
  log << "wrote " << path << " (" << wall << " s)\n";
  return 0;
}

int cli_main(int argc, const char* const* argv) {
  RunConfig cfg;
  try {
    cfg = parse_config(argc, argv);
  } catch (const HelpRequested& h) {
    std::cout << h.text;
    return h.status;
  } catch (const Error& e) {
    std::cerr << error_json(std::string(to_string(e.kind())), e.what()).dump() << "\n";
    return 2;
  }
  std::cout << config_to_json(cfg).dump(2) << "\n";
  try {
    return run(cfg, std::cout);
  } catch (const Error& e) {
    std::cerr << error_json(std::string(to_string(e.kind())), e.what()).dump() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << error_json("internal", e.what()).dump() << "\n";
    return 1;
  }
}

}  // namespace mipt
