#include "pairprobe/csv_io.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>

#include <json.hpp>

#include "pairprobe/errors.hpp"

namespace pairprobe {
namespace {

using json = nlohmann::json;

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot write " + path);
  return out;
}

std::ifstream open_in(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read " + path);
  return in;
}

json vec_json(const Vec3& v) { return json::array({v[0], v[1], v[2]}); }

Vec3 json_vec(const json& j) { return Vec3(j.at(0).get<double>(), j.at(1).get<double>(), j.at(2).get<double>()); }

json num_or_null(double v) { return std::isnan(v) ? json(nullptr) : json(v); }
double null_or_num(const json& j) { return j.is_null() ? NAN : j.get<double>(); }

std::string cell(double v) { return std::isnan(v) ? "" : format_double(v); }

std::string quoted(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) out += c == '"' ? std::string("\"\"") : std::string(1, c);
  return out + "\"";
}

std::string matrix_name(int probe, int l) {
  return "probe_" + std::to_string(probe) + (l < 0 ? "_pair" : "_single_" + std::to_string(l));
}

json read_json(const std::string& path) {
  auto in = open_in(path);
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw ConfigError(path + ": " + e.what());
  }
}

void write_matrix(const std::filesystem::path& dir, const std::string& name, const FarFieldMatrix& m,
                  const MatrixSidecar& meta) {
  write_far_field_csv((dir / (name + ".csv")).string(), m);
  write_sidecar((dir / (name + ".json")).string(), meta);
}

FarFieldMatrix read_matrix(const std::filesystem::path& dir, const std::string& name) {
  FarFieldMatrix m = read_far_field_csv((dir / (name + ".csv")).string());
  m.kind = read_sidecar((dir / (name + ".json")).string()).kind;
  return m;
}

}  // namespace

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.16e", v);
  return buf;
}

void write_far_field_csv(const std::string& path, const FarFieldMatrix& m) {
  auto out = open_out(path);
  out << kFarFieldHeader << '\n';
  const int n = m.size();
  if (m.values.rows() != n || m.values.cols() != n)
    throw ConfigError("far-field matrix shape does not match its direction set");
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      out << i << ',' << j;
      for (int d = 0; d < 3; ++d) out << ',' << format_double(m.directions[i][d]);
      for (int d = 0; d < 3; ++d) out << ',' << format_double(m.directions[j][d]);
      out << ',' << format_double(m.values(i, j).real()) << ',' << format_double(m.values(i, j).imag()) << '\n';
    }
}

FarFieldMatrix read_far_field_csv(const std::string& path) {
  auto in = open_in(path);
  std::string line;
  if (!std::getline(in, line) || line != kFarFieldHeader)
    throw ConfigError(path + ":1: unexpected far-field CSV header");
  struct Entry {
    int i, j;
    double v[8];
  };
  std::vector<Entry> entries;
  int n = 0, lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    Entry e{};
    std::stringstream ss(line);
    std::string tok;
    std::vector<std::string> toks;
    while (std::getline(ss, tok, ',')) toks.push_back(tok);
    if (toks.size() != 10) throw ConfigError(path + ":" + std::to_string(lineno) + ": expected 10 columns");
    char* end = nullptr;
    e.i = static_cast<int>(std::strtol(toks[0].c_str(), &end, 10));
    e.j = static_cast<int>(std::strtol(toks[1].c_str(), &end, 10));
    for (int k = 0; k < 8; ++k) {
      e.v[k] = std::strtod(toks[k + 2].c_str(), &end);
      if (end == toks[k + 2].c_str() || *end != '\0')
        throw ConfigError(path + ":" + std::to_string(lineno) + ": bad number '" + toks[k + 2] + "'");
    }
    if (e.i < 0 || e.j < 0) throw ConfigError(path + ":" + std::to_string(lineno) + ": negative index");
    n = std::max({n, e.i + 1, e.j + 1});
    entries.push_back(e);
  }
  if (static_cast<int>(entries.size()) != n * n)
    throw ConfigError(path + ": expected " + std::to_string(n * n) + " entries, found " +
                      std::to_string(entries.size()));
  FarFieldMatrix m;
  m.values = CMatrix::Zero(n, n);
  m.directions.assign(n, Vec3::Zero());
  for (const auto& e : entries) {
    m.values(e.i, e.j) = cplx(e.v[6], e.v[7]);
    m.directions[e.i] = Vec3(e.v[0], e.v[1], e.v[2]);
    m.directions[e.j] = Vec3(e.v[3], e.v[4], e.v[5]);
  }
  return m;
}

void write_sidecar(const std::string& path, const MatrixSidecar& meta) {
  json j;
  j["kind"] = std::string(to_string(meta.kind));
  j["kappa"] = meta.kappa;
  j["centers"] = json::array();
  for (const auto& c : meta.centers) j["centers"].push_back(vec_json(c));
  j["a"] = num_or_null(meta.a);
  j["h"] = num_or_null(meta.h);
  j["t"] = num_or_null(meta.t);
  open_out(path) << j.dump(2) << '\n';
}

MatrixSidecar read_sidecar(const std::string& path) {
  const json j = read_json(path);
  try {
    MatrixSidecar m;
    m.kind = field_kind_from_string(j.at("kind").get<std::string>());
    m.kappa = j.at("kappa").get<double>();
    for (const auto& c : j.at("centers")) m.centers.push_back(json_vec(c));
    m.a = null_or_num(j.at("a"));
    m.h = null_or_num(j.at("h"));
    m.t = null_or_num(j.at("t"));
    return m;
  } catch (const json::exception& e) {
    throw ConfigError(path + ": " + e.what());
  }
}

void write_bundle(const std::string& dir_name, const MeasurementBundle& bundle) {
  const std::filesystem::path dir(dir_name);
  std::filesystem::create_directories(dir);
  const auto& p = bundle.params;
  MatrixSidecar bg_meta{FieldKind::background, bundle.kappa, {}, p.a, p.h, p.t};
  write_matrix(dir, "background", bundle.background, bg_meta);

  json manifest;
  manifest["kappa"] = bundle.kappa;
  manifest["directions"] = json::array();
  for (const auto& d : bundle.directions) manifest["directions"].push_back(vec_json(d));
  manifest["params"] = {{"a", p.a}, {"h", p.h}, {"t", p.t}, {"s", p.s}, {"d_min", p.d_min}, {"d_max", p.d_max}};
  manifest["probes"] = json::array();
  for (int m = 0; m < static_cast<int>(bundle.probes.size()); ++m) {
    const auto& pm = bundle.probes[m];
    json entry;
    entry["centers"] = json::array();
    for (const auto& c : pm.probe.centers) entry["centers"].push_back(vec_json(c));
    entry["singles"] = pm.singles.size();
    entry["pair"] = pm.pair.has_value();
    for (int l = 0; l < static_cast<int>(pm.singles.size()); ++l)
      write_matrix(dir, matrix_name(m, l), pm.singles[l],
                   {FieldKind::single_inclusion, bundle.kappa, {pm.probe.centers[l]}, p.a, p.h, p.t});
    if (pm.pair)
      write_matrix(dir, matrix_name(m, -1), *pm.pair,
                   {FieldKind::double_inclusion, bundle.kappa, pm.probe.centers, p.a, p.h, p.t});
    if (pm.truth) {
      json truth;
      truth["index"] = pm.truth->index;
      truth["green"] = {format_double(pm.truth->green.real()), format_double(pm.truth->green.imag())};
      truth["surrogate_used"] = pm.truth->surrogate_used;
      truth["totals"] = json::array();
      for (const auto& v : pm.truth->totals) {
        json row = json::array();
        for (int j = 0; j < v.size(); ++j)
          row.push_back({format_double(v[j].real()), format_double(v[j].imag())});
        truth["totals"].push_back(row);
      }
      entry["truth"] = truth;
    }
    manifest["probes"].push_back(entry);
  }
  open_out((dir / "manifest.json").string()) << manifest.dump(2) << '\n';
}

MeasurementBundle read_bundle(const std::string& dir_name) {
  const std::filesystem::path dir(dir_name);
  const std::string manifest_path = (dir / "manifest.json").string();
  const json manifest = read_json(manifest_path);
  MeasurementBundle b;
  try {
    auto cnum = [](const json& pair) {
      return cplx(std::strtod(pair.at(0).get<std::string>().c_str(), nullptr),
                  std::strtod(pair.at(1).get<std::string>().c_str(), nullptr));
    };
    b.kappa = manifest.at("kappa").get<double>();
    for (const auto& d : manifest.at("directions")) b.directions.push_back(json_vec(d));
    const json& p = manifest.at("params");
    b.params.a = p.at("a").get<double>();
    b.params.h = p.at("h").get<double>();
    b.params.t = p.at("t").get<double>();
    b.params.s = p.at("s").get<double>();
    b.params.d_min = p.at("d_min").get<double>();
    b.params.d_max = p.at("d_max").get<double>();
    b.background = read_matrix(dir, "background");
    const auto& probes = manifest.at("probes");
    for (int m = 0; m < static_cast<int>(probes.size()); ++m) {
      const json& e = probes[m];
      ProbeMeasurement pm;
      for (const auto& c : e.at("centers")) pm.probe.centers.push_back(json_vec(c));
      const int singles = e.at("singles").get<int>();
      for (int l = 0; l < singles; ++l) pm.singles.push_back(read_matrix(dir, matrix_name(m, l)));
      if (e.at("pair").get<bool>()) pm.pair = read_matrix(dir, matrix_name(m, -1));
      if (e.contains("truth")) {
        const json& t = e.at("truth");
        ProbeTruth truth;
        truth.index = t.at("index").get<std::vector<double>>();
        truth.green = cnum(t.at("green"));
        truth.surrogate_used = t.at("surrogate_used").get<bool>();
        for (const auto& row : t.at("totals")) {
          CVector v(row.size());
          for (std::size_t j = 0; j < row.size(); ++j) v[static_cast<int>(j)] = cnum(row[j]);
          truth.totals.push_back(std::move(v));
        }
        pm.truth = std::move(truth);
      }
      b.probes.push_back(std::move(pm));
    }
  } catch (const json::exception& e) {
    throw ConfigError(manifest_path + ": " + e.what());
  }
  return b;
}

void write_records_csv(const std::string& path, const std::vector<ProbePairRecord>& records) {
  auto out = open_out(path);
  out << "probe,z1_x,z1_y,z1_z,z2_x,z2_y,z2_z,g_re,g_im,n_re,n_im,imag_abs,l_v,"
         "n_true,g_true_re,g_true_im,index_error,green_error,total_field_error,error\n";
  for (const auto& r : records) {
    out << r.probe;
    for (int d = 0; d < 3; ++d) out << ',' << format_double(r.z1[d]);
    for (int d = 0; d < 3; ++d) out << ',' << format_double(r.z2[d]);
    if (r.error) {
      out << ",,,,,,,";
    } else {
      out << ',' << format_double(r.green.value.real()) << ',' << format_double(r.green.value.imag()) << ','
          << format_double(r.index.value.real()) << ',' << format_double(r.index.value.imag()) << ','
          << format_double(r.index.imag_abs()) << ',' << format_double(r.green.l_v);
    }
    out << ',' << (r.n_true ? format_double(*r.n_true) : "");
    out << ',' << (r.g_true ? format_double(r.g_true->real()) : "");
    out << ',' << (r.g_true ? format_double(r.g_true->imag()) : "");
    out << ',' << (r.n_true && !r.error ? format_double(r.index_error()) : "");
    out << ',' << (r.g_true && !r.error ? format_double(r.green_error()) : "");
    out << ',' << (r.total_field_error ? format_double(*r.total_field_error) : "");
    out << ',' << quoted(r.error.value_or("")) << '\n';
  }
}

void write_report_csv(const std::string& path, const std::vector<ReportRow>& rows, bool with_timestamp) {
  auto out = open_out(path);
  out << "experiment,a,h,t,q1,q2,seed,probe,index_error,green_error,imag_index,total_field_error,l_v,regime,error";
  if (with_timestamp) out << ",wall_seconds";
  out << '\n';
  for (const auto& r : rows) {
    out << r.experiment << ',' << cell(r.a) << ',' << cell(r.h) << ',' << cell(r.t) << ',' << cell(r.q1) << ','
        << cell(r.q2) << ',' << r.seed << ',' << r.probe << ',' << cell(r.index_error) << ','
        << cell(r.green_error) << ',' << cell(r.imag_index) << ',' << cell(r.total_field_error) << ','
        << cell(r.l_v) << ',' << r.regime << ',' << quoted(r.error);
    if (with_timestamp) out << ',' << cell(r.wall_seconds);
    out << '\n';
  }
}

void write_summary_csv(const std::string& path, const std::vector<SweepSummary>& summaries) {
  auto out = open_out(path);
  out << "experiment,h,t,q1,q2,regime,a,median_index_error,median_green_error,median_imag_index,"
         "index_slope,index_fit_residual,green_slope,green_fit_residual,index_error_decreasing\n";
  for (const auto& s : summaries)
    for (std::size_t i = 0; i < s.a_values.size(); ++i) {
      out << s.experiment << ',' << cell(s.h) << ',' << cell(s.t) << ',' << cell(s.q1) << ',' << cell(s.q2)
          << ',' << s.regime << ',' << cell(s.a_values[i]) << ',' << cell(s.median_index_error[i]) << ','
          << cell(s.median_green_error[i]) << ',' << cell(s.median_imag_index[i]) << ','
          << (s.index_fit_ok ? cell(s.index_fit.slope) : "") << ','
          << (s.index_fit_ok ? cell(s.index_fit.residual) : "") << ','
          << (s.green_fit_ok ? cell(s.green_fit.slope) : "") << ','
          << (s.green_fit_ok ? cell(s.green_fit.residual) : "") << ','
          << (s.strictly_decreasing ? "true" : "false") << '\n';
    }
}

}  // namespace pairprobe
