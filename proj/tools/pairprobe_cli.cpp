// pairprobe: synthesize far-field data, reconstruct refractive indices, run rate and noise studies.

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "pairprobe/config.hpp"
#include "pairprobe/csv_io.hpp"
#include "pairprobe/errors.hpp"
#include "pairprobe/experiments.hpp"
#include "pairprobe/forward_model.hpp"
#include "pairprobe/inversion.hpp"
#include "pairprobe/mie.hpp"
#include "pairprobe/random.hpp"
#include "pairprobe/stability.hpp"

namespace fs = std::filesystem;
using namespace pairprobe;
using json = nlohmann::json;

namespace {

constexpr int kExitNumerical = 1;
constexpr int kExitConfig = 2;

struct GlobalOptions {
  std::string config;
  std::string out = ".";
  std::string data;
  int threads = 1;
  std::optional<std::uint64_t> seed;
  bool no_timestamp = false;
};

template <class T>
const T& require(const std::optional<T>& v, const char* section) {
  if (!v) throw ConfigError(std::string("config: missing required section '") + section + "'");
  return *v;
}

ExperimentConfig load(const GlobalOptions& g, bool required = true) {
  if (g.config.empty()) {
    if (required) throw ConfigError("--config is required for this command");
    return {};
  }
  ExperimentConfig cfg = load_config(g.config);
  if (g.seed) {
    cfg.synthesis.seed = *g.seed;
    if (cfg.noise) {
      cfg.noise->seed = *g.seed;
      cfg.shift->seed = derive_seed(*g.seed, 0x51);
    }
    auto reseed = [&](std::vector<std::uint64_t>& seeds) {
      for (std::size_t i = 0; i < seeds.size(); ++i) seeds[i] = *g.seed + i;
    };
    if (cfg.sweep) reseed(cfg.sweep->seeds);
    if (cfg.noise_study) reseed(cfg.noise_study->seeds);
  }
  return cfg;
}

ForwardModel build_model(const ExperimentConfig& cfg, const GlobalOptions& g) {
  return ForwardModel(require(cfg.medium, "medium"), require(cfg.waves, "waves"), cfg.solver, g.threads);
}

fs::path out_dir(const GlobalOptions& g) {
  fs::path dir(g.out);
  fs::create_directories(dir);
  return dir;
}

void write_json(const fs::path& path, const json& j) {
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot write " + path.string());
  out << j.dump(2) << '\n';
}

int cmd_forward(const GlobalOptions& g) {
  const auto start = std::chrono::steady_clock::now();
  const ExperimentConfig cfg = load(g);
  const ForwardModel model = build_model(cfg, g);
  const fs::path dir = out_dir(g);
  write_far_field_csv((dir / "background.csv").string(), model.background());
  write_sidecar((dir / "background.json").string(), {FieldKind::background, model.kappa(), {}, NAN, NAN, NAN});

  json diag;
  const auto& grid = model.solver().grid();
  diag["grid"] = {{"dims", grid.dims()}, {"cell_size", grid.cell_size()}, {"active_cells", grid.active_cells().size()}};
  diag["tolerance"] = cfg.solver.krylov.tolerance;
  diag["solves"] = json::array();
  for (const auto& sol : model.plane_wave_solutions())
    diag["solves"].push_back({{"direction", {sol.origin[0], sol.origin[1], sol.origin[2]}},
                              {"iterations", sol.iterations},
                              {"residual", sol.residual}});
  if (cfg.mie_validation) {
    const auto* ball = std::get_if<ConstantBall>(&model.medium().profile());
    if (!ball) throw ConfigError("config: mie_validation requires a constant_ball medium");
    MieBall mie(ball->n0, ball->radius, model.kappa(), ball->center);
    FarFieldMatrix series = model.background();
    const auto& dirs = series.directions;
    double ref_max = 0.0, gap = 0.0;
    for (int i = 0; i < series.size(); ++i)
      for (int j = 0; j < series.size(); ++j) {
        series.values(i, j) = mie.far_field(dirs[j], -dirs[i]);
        ref_max = std::max(ref_max, std::abs(series.values(i, j)));
        gap = std::max(gap, std::abs(series.values(i, j) - model.background().values(i, j)));
      }
    write_far_field_csv((dir / "mie_background.csv").string(), series);
    write_sidecar((dir / "mie_background.json").string(), {FieldKind::background, model.kappa(), {}, NAN, NAN, NAN});
    diag["mie_max_relative_gap"] = ref_max > 0.0 ? gap / ref_max : gap;
    std::printf("mie max relative gap: %.6e\n", diag["mie_max_relative_gap"].get<double>());
  }
  if (!g.no_timestamp)
    diag["wall_seconds"] = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  write_json(dir / "solver_diagnostics.json", diag);
  std::printf("wrote %s\n", (dir / "background.csv").string().c_str());
  return 0;
}

int cmd_probe(const GlobalOptions& g) {
  const ExperimentConfig cfg = load(g);
  const ForwardModel model = build_model(cfg, g);
  const auto bundle = synthesize_measurements(model, require(cfg.layout, "layout"), cfg.synthesis);
  write_bundle(out_dir(g).string(), bundle);
  std::printf("wrote %zu probes to %s\n", bundle.probes.size(), g.out.c_str());
  return 0;
}

int cmd_reconstruct(const GlobalOptions& g) {
  const ExperimentConfig cfg = load(g, g.data.empty());
  std::vector<ProbePairRecord> records;
  if (!g.data.empty()) {
    records = reconstruct_index_map(read_bundle(g.data), g.threads);
    if (cfg.medium)
      for (auto& r : records)
        if (!r.n_true) r.n_true = cfg.medium->index_at(r.z1);
  } else {
    const ForwardModel model = build_model(cfg, g);
    const auto& layout = require(cfg.layout, "layout");
    if (cfg.noise)
      records = noisy_reconstruct(model, layout, *cfg.noise, *cfg.shift, cfg.synthesis);
    else
      records = reconstruct_index_map(synthesize_measurements(model, layout, cfg.synthesis), g.threads);
  }
  const fs::path path = out_dir(g) / "records.csv";
  write_records_csv(path.string(), records);
  int failed = 0;
  for (const auto& r : records) failed += r.error.has_value();
  std::printf("reconstructed %zu pairs (%d failed); wrote %s\n", records.size(), failed, path.string().c_str());
  return failed ? kExitNumerical : 0;
}

void write_experiment(const GlobalOptions& g, const ExperimentReport& rep) {
  const fs::path dir = out_dir(g);
  write_report_csv((dir / "report.csv").string(), rep.rows, !g.no_timestamp);
  write_summary_csv((dir / "summary.csv").string(), rep.summaries);
  for (const auto& s : rep.summaries)
    std::printf("%s regime=%s index_slope=%s green_slope=%s\n", s.experiment.c_str(), s.regime.c_str(),
                s.index_fit_ok ? format_double(s.index_fit.slope).c_str() : "n/a",
                s.green_fit_ok ? format_double(s.green_fit.slope).c_str() : "n/a");
}

int cmd_sweep(const GlobalOptions& g) {
  const ExperimentConfig cfg = load(g);
  const ForwardModel model = build_model(cfg, g);
  write_experiment(g, run_rate_sweep(model, require(cfg.sweep, "sweep")));
  return 0;
}

int cmd_noise_study(const GlobalOptions& g) {
  const ExperimentConfig cfg = load(g);
  const ForwardModel model = build_model(cfg, g);
  write_experiment(g, run_noise_study(model, require(cfg.noise_study, "noise_study")));
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Far-field probing toolkit: synthesis, index reconstruction, rate and noise studies"};
  app.require_subcommand(1);
  GlobalOptions g;
  std::uint64_t seed = 0;
  app.add_option("--config", g.config, "Experiment config (JSON)");
  app.add_option("--out", g.out, "Output directory")->capture_default_str();
  app.add_option("--threads", g.threads, "Worker threads")->check(CLI::PositiveNumber)->capture_default_str();
  auto* seed_opt = app.add_option("--seed", seed, "Base seed overriding the config");
  app.add_flag("--no-timestamp", g.no_timestamp, "Omit wall-clock columns so reports are byte-reproducible");

  int (*run)(const GlobalOptions&) = nullptr;
  auto add = [&](const char* name, const char* help, int (*fn)(const GlobalOptions&)) {
    auto* sub = app.add_subcommand(name, help)->fallthrough();
    sub->callback([&run, fn] { run = fn; });
    return sub;
  };
  add("forward", "Solve the unperturbed medium and write V-infinity", cmd_forward);
  add("probe", "Synthesize single- and double-inclusion far-field data", cmd_probe);
  auto* rec = add("reconstruct", "Reconstruct the index at every probe pair", cmd_reconstruct);
  rec->add_option("--data", g.data, "Directory written by 'probe' (instead of synthesizing)");
  add("sweep", "Run the a-sweep over (h, t) cells and fit convergence rates", cmd_sweep);
  add("noise-study", "Run noisy, shifted reconstructions over (q1, q2) regimes", cmd_noise_study);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitConfig;
  }
  if (*seed_opt) g.seed = seed;
  try {
    return run(g);
  } catch (const ConfigError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return kExitConfig;
  } catch (const NumericalError& e) {
    std::fprintf(stderr, "numerical failure: %s\n", e.what());
    return kExitNumerical;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitNumerical;
  }
}
