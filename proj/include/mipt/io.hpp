// JSON/CSV/binary serialization of results.
//
// CSV: ',' separator, '.' decimal point, LF line endings, one header row.
// Numbers are written in shortest round-trip form.

#pragma once

#include <json.hpp>

#include <string>
#include <vector>

#include "mipt/analysis.hpp"
#include "mipt/correlators.hpp"
#include "mipt/noclick.hpp"
#include "mipt/qfi.hpp"
#include "mipt/trajectory.hpp"

namespace mipt {

using json = nlohmann::ordered_json;

std::string format_number(double value);
double parse_number(const std::string& text);

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  /// Index of a header column; Io error naming the column if absent.
  std::size_t column(const std::string& name) const;
  bool has_column(const std::string& name) const;
};

std::string format_csv(const CsvTable& table);
CsvTable parse_csv(const std::string& text);

void write_text(const std::string& path, const std::string& text);
std::string read_text(const std::string& path);

json to_json(const ModelParams& params);
json to_json(const FitResult& fit);
json to_json(const QfiResult& result);
json to_json(const TrajectoryRecord& record);
json to_json(const EnsembleSummary& summary);
ModelParams params_from_json(const json& j);
TrajectoryRecord trajectory_from_json(const json& j);

/// alpha,beta,i,j,re,im for the five nonzero blocks.
CsvTable tensor_table(const SpinCorrelationTensor& tensor);
/// alpha,beta,ell,value for ell = 1..L/2.
CsvTable ctilde_table(const SpinCorrelationTensor& tensor);
/// h,gamma,gamma_over_gc,L,fq_max,entropy,p,p_err; per-size rows leave p
/// empty, one summary row per point has L = "fit".
CsvTable scan_table(const std::vector<ScanPoint>& points);

/// 16-byte header ("MIPT", uint32 L, float64 time) then C and F row-major as
/// (re, im) float64 pairs, all little-endian.
void write_snapshot(const std::string& path, const CorrelationState& state);
CorrelationState read_snapshot(const std::string& path);

}  // namespace mipt
