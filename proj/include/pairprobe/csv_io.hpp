#pragma once

#include <string>
#include <vector>

#include "pairprobe/experiments.hpp"
#include "pairprobe/far_field_matrix.hpp"
#include "pairprobe/forward_model.hpp"
#include "pairprobe/inversion.hpp"

namespace pairprobe {

/// Header of every far-field CSV file.
inline constexpr const char* kFarFieldHeader =
    "i,j,theta_i_x,theta_i_y,theta_i_z,theta_j_x,theta_j_y,theta_j_z,re,im";

/// Metadata written next to each matrix file.
struct MatrixSidecar {
  FieldKind kind = FieldKind::background;
  double kappa = 1.0;
  std::vector<Vec3> centers;
  double a = NAN, h = NAN, t = NAN;
};

/// Scientific notation with 17 significant digits; strtod reads it back exactly.
std::string format_double(double v);

void write_far_field_csv(const std::string& path, const FarFieldMatrix& m);
/// The kind is left as `background`; the sidecar carries the real one.
FarFieldMatrix read_far_field_csv(const std::string& path);

void write_sidecar(const std::string& path, const MatrixSidecar& meta);
MatrixSidecar read_sidecar(const std::string& path);

/// Writes background.csv, probe_<m>_single_<l>.csv, probe_<m>_pair.csv with
/// their .json sidecars, plus manifest.json holding directions, parameters and
/// any ground truth.
void write_bundle(const std::string& dir, const MeasurementBundle& bundle);
MeasurementBundle read_bundle(const std::string& dir);

void write_records_csv(const std::string& path, const std::vector<ProbePairRecord>& records);
void write_report_csv(const std::string& path, const std::vector<ReportRow>& rows, bool with_timestamp);
void write_summary_csv(const std::string& path, const std::vector<SweepSummary>& summaries);

}  // namespace pairprobe
