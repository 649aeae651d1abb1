#include "mipt/io.hpp"

#include <algorithm>
#include <bit>
#include <charconv>
#include <cmath>
#include <cstring>
#include <fstream>
#include <limits>
#include <sstream>

#include "mipt/errors.hpp"

namespace mipt {

std::string format_number(double value) {
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, value);
  return std::string(buf, res.ptr);
}

double parse_number(const std::string& text) {
  if (text == "nan" || text.empty()) return std::numeric_limits<double>::quiet_NaN();
  if (text == "inf") return std::numeric_limits<double>::infinity();
  if (text == "-inf") return -std::numeric_limits<double>::infinity();
  double v = 0.0;
  const auto res = std::from_chars(text.data(), text.data() + text.size(), v);
  require(res.ec == std::errc() && res.ptr == text.data() + text.size(), ErrorKind::Io,
          "not a number: '" + text + "'");
  return v;
}

std::size_t CsvTable::column(const std::string& name) const {
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (header[i] == name) return i;
  }
  fail(ErrorKind::Io, "CSV has no column '" + name + "'");
}

bool CsvTable::has_column(const std::string& name) const {
  for (const auto& h : header) {
    if (h == name) return true;
  }
  return false;
}

std::string format_csv(const CsvTable& table) {
  std::string out;
  auto line = [&out](const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (i) out += ',';
      out += cells[i];
    }
    out += '\n';
  };
  line(table.header);
  for (const auto& r : table.rows) line(r);
  return out;
}

CsvTable parse_csv(const std::string& text) {
  CsvTable t;
  std::istringstream in(text);
  std::string raw;
  bool first = true;
  while (std::getline(in, raw)) {
    if (!raw.empty() && raw.back() == '\r') raw.pop_back();
    if (raw.empty() || raw[0] == '#') continue;
    std::vector<std::string> cells;
    std::size_t start = 0;
    for (;;) {
      const std::size_t comma = raw.find(',', start);
      cells.push_back(raw.substr(start, comma - start));
      if (comma == std::string::npos) break;
      start = comma + 1;
    }
    if (first) {
      t.header = std::move(cells);
      first = false;
    } else {
      require(cells.size() == t.header.size(), ErrorKind::Io,
              "CSV row has " + std::to_string(cells.size()) + " cells, header has " +
                  std::to_string(t.header.size()));
      t.rows.push_back(std::move(cells));
    }
  }
  require(!first, ErrorKind::Io, "CSV is empty");
  return t;
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  require(static_cast<bool>(out), ErrorKind::Io, "cannot open '" + path + "' for writing");
  out << text;
  out.close();
  require(!out.fail(), ErrorKind::Io, "write to '" + path + "' failed");
}

std::string read_text(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  require(static_cast<bool>(in), ErrorKind::Io, "cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

namespace {

double json_number(const json& j) {
  return j.is_null() ? std::numeric_limits<double>::quiet_NaN() : j.get<double>();
}

}  // namespace

json to_json(const ModelParams& p) { return {{"L", p.L}, {"h", p.h}, {"gamma", p.gamma}}; }

ModelParams params_from_json(const json& j) {
  ModelParams p{j.at("L").get<int>(), j.at("h").get<double>(), j.at("gamma").get<double>()};
  p.validate();
  return p;
}

json to_json(const FitResult& f) {
  return {{"exponent", f.exponent}, {"prefactor", f.prefactor}, {"stderr", f.std_error},
          {"r2", f.r2},             {"window", {f.window.lo, f.window.hi}},
          {"points", f.points}};
}

json to_json(const QfiResult& r) {
  json dirs = json::array();
  for (const auto& n : r.directions.n) dirs.push_back({n.x(), n.y(), n.z()});
  return {{"fq", r.fq},
          {"fq_density", r.fq_density},
          {"directions", dirs},
          {"diagnostics",
           {{"restarts", r.diagnostics.restarts},
            {"accepted_fraction", r.diagnostics.accepted_fraction},
            {"best_restart", r.diagnostics.best_restart},
            {"best_step", r.diagnostics.best_step},
            {"initial_temperature", r.diagnostics.initial_temperature}}}};
}

json to_json(const TrajectoryRecord& rec) {
  json obs = json::object();
  for (const auto& [key, series] : rec.observables) obs[key] = series;
  json jumps = json::array();
  for (const auto& e : rec.jumps) jumps.push_back({{"t", e.time}, {"site", e.site}});
  return {{"schema", "mipt.trajectory/1"},
          {"params", to_json(rec.params)},
          {"seed", rec.seed},
          {"dt", rec.dt},
          {"sample_times", rec.sample_times},
          {"observables", obs},
          {"jumps", jumps},
          {"expected_jumps", rec.expected_jumps}};
}

TrajectoryRecord trajectory_from_json(const json& j) {
  require(j.value("schema", "") == "mipt.trajectory/1", ErrorKind::Io,
          "not a trajectory record (schema mipt.trajectory/1)");
  TrajectoryRecord rec;
  rec.params = params_from_json(j.at("params"));
  rec.seed = j.at("seed").get<std::uint64_t>();
  rec.dt = j.at("dt").get<double>();
  rec.sample_times = j.at("sample_times").get<std::vector<double>>();
  for (const auto& [key, series] : j.at("observables").items()) {
    auto& out = rec.observables[key];
    for (const auto& v : series) out.push_back(json_number(v));
  }
  for (const auto& e : j.at("jumps")) {
    rec.jumps.push_back({e.at("t").get<double>(), e.at("site").get<int>()});
  }
  rec.expected_jumps = j.value("expected_jumps", 0.0);
  return rec;
}

json to_json(const EnsembleSummary& s) {
  json obs = json::object();
  for (const auto& [key, o] : s.observables) {
    obs[key] = {{"mean", o.mean},
                {"stderr", o.std_error},
                {"stationary_mean", o.stationary_mean},
                {"stationary_stderr", o.stationary_error}};
  }
  return {{"schema", "mipt.ensemble/1"},  {"params", to_json(s.params)},
          {"trajectories", s.trajectories}, {"sample_times", s.sample_times},
          {"stationary_from", s.stationary_from}, {"observables", obs}};
}

CsvTable tensor_table(const SpinCorrelationTensor& t) {
  CsvTable table{{"alpha", "beta", "i", "j", "re", "im"}, {}};
  for (Block b : kAllBlocks) {
    const std::string name = block_name(b);
    const CMatrix& m = t[b];
    for (int i = 0; i < t.L; ++i) {
      for (int j = 0; j < t.L; ++j) {
        table.rows.push_back({name.substr(0, 1), name.substr(1, 1), std::to_string(i),
                              std::to_string(j), format_number(m(i, j).real()),
                              format_number(m(i, j).imag())});
      }
    }
  }
  return table;
}

CsvTable ctilde_table(const SpinCorrelationTensor& t) {
  CsvTable table{{"alpha", "beta", "ell", "value"}, {}};
  for (Block b : kAllBlocks) {
    const std::string name = block_name(b);
    for (int ell = 1; ell <= t.L / 2; ++ell) {
      table.rows.push_back({name.substr(0, 1), name.substr(1, 1), std::to_string(ell),
                            format_number(averaged_abs_correlator(t, b, ell))});
    }
  }
  return table;
}

CsvTable scan_table(const std::vector<ScanPoint>& points) {
  CsvTable table{{"h", "gamma", "gamma_over_gc", "L", "fq_max", "entropy", "p", "p_err"}, {}};
  for (const auto& pt : points) {
    for (const auto& r : pt.rows) {
      table.rows.push_back({format_number(r.h), format_number(r.gamma),
                            format_number(r.gamma_over_gc), std::to_string(r.L),
                            format_number(r.fq_max), format_number(r.entropy), "", ""});
    }
    const double nan = std::numeric_limits<double>::quiet_NaN();
    table.rows.push_back({format_number(pt.h), format_number(pt.gamma),
                          format_number(pt.gamma_over_gc), "fit", "", "",
                          format_number(pt.p ? pt.p->exponent : nan),
                          format_number(pt.p ? pt.p->std_error : nan)});
  }
  return table;
}

namespace {

template <class T>
void put_le(std::ostream& out, T value) {
  unsigned char bytes[sizeof(T)];
  std::memcpy(bytes, &value, sizeof(T));
  if constexpr (std::endian::native == std::endian::big) std::reverse(bytes, bytes + sizeof(T));
  out.write(reinterpret_cast<const char*>(bytes), sizeof(T));
}

template <class T>
T get_le(std::istream& in) {
  unsigned char bytes[sizeof(T)];
  in.read(reinterpret_cast<char*>(bytes), sizeof(T));
  require(static_cast<bool>(in), ErrorKind::Io, "snapshot is truncated");
  if constexpr (std::endian::native == std::endian::big) std::reverse(bytes, bytes + sizeof(T));
  T value;
  std::memcpy(&value, bytes, sizeof(T));
  return value;
}

constexpr char kMagic[4] = {'M', 'I', 'P', 'T'};

}  // namespace

void write_snapshot(const std::string& path, const CorrelationState& state) {
  std::ofstream out(path, std::ios::binary);
  require(static_cast<bool>(out), ErrorKind::Io, "cannot open '" + path + "' for writing");
  out.write(kMagic, 4);
  put_le<std::uint32_t>(out, static_cast<std::uint32_t>(state.L()));
  put_le<double>(out, state.time);
  for (const CMatrix* m : {&state.C, &state.F}) {
    for (int r = 0; r < state.L(); ++r) {
      for (int c = 0; c < state.L(); ++c) {
        put_le<double>(out, (*m)(r, c).real());
        put_le<double>(out, (*m)(r, c).imag());
      }
    }
  }
  require(static_cast<bool>(out), ErrorKind::Io, "write to '" + path + "' failed");
}

CorrelationState read_snapshot(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  require(static_cast<bool>(in), ErrorKind::Io, "cannot open '" + path + "'");
  char magic[4];
  in.read(magic, 4);
  require(static_cast<bool>(in) && std::memcmp(magic, kMagic, 4) == 0, ErrorKind::Io,
          "'" + path + "' is not a correlation-matrix snapshot");
  const auto L = static_cast<int>(get_le<std::uint32_t>(in));
  require(L > 0 && L <= 1 << 15, ErrorKind::Io, "snapshot has implausible L");
  CorrelationState s;
  s.time = get_le<double>(in);
  s.C.resize(L, L);
  s.F.resize(L, L);
  for (CMatrix* m : {&s.C, &s.F}) {
    for (int r = 0; r < L; ++r) {
      for (int c = 0; c < L; ++c) {
        const double re = get_le<double>(in);
        const double im = get_le<double>(in);
        (*m)(r, c) = cplx(re, im);
      }
    }
  }
  return s;
}

}  // namespace mipt
