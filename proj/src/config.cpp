#include "pairprobe/config.hpp"

#include <algorithm>
#include <fstream>
#include <initializer_list>
#include <set>
#include <sstream>

#include <json.hpp>

#include "pairprobe/errors.hpp"
#include "pairprobe/random.hpp"

namespace pairprobe {
namespace {

using json = nlohmann::json;

/// A ConfigError that already carries its line anchor.
class AnchoredError : public ConfigError {
 public:
  using ConfigError::ConfigError;
};

/// Maps a key path to the first line that mentions it, scanning the keys in order.
class LineLocator {
 public:
  LineLocator(const std::string& text, std::string source) : text_(text), source_(std::move(source)) {}

  std::string at(const std::vector<std::string>& path) const {
    std::size_t pos = 0;
    for (const auto& key : path) {
      const std::size_t found = text_.find('"' + key + '"', pos);
      if (found == std::string::npos) break;
      pos = found;
    }
    return at_offset(pos);
  }

  std::string at_offset(std::size_t offset) const {
    const std::size_t end = std::min(offset, text_.size());
    const auto line = 1 + std::count(text_.begin(), text_.begin() + static_cast<long>(end), '\n');
    return source_ + ":" + std::to_string(line);
  }

 private:
  const std::string& text_;
  std::string source_;
};

class Reader {
 public:
  Reader(const json& node, const LineLocator& loc, std::vector<std::string> path)
      : node_(node), loc_(loc), path_(std::move(path)) {
    if (!node_.is_object()) fail("expected an object");
  }

  [[noreturn]] void fail(const std::string& msg, const std::string& key = "") const {
    auto p = path_;
    if (!key.empty()) p.push_back(key);
    std::string dotted;
    for (const auto& k : p) dotted += (dotted.empty() ? "" : ".") + k;
    throw AnchoredError(loc_.at(p) + ": " + (dotted.empty() ? "" : dotted + ": ") + msg);
  }

  void allow(std::initializer_list<const char*> keys) const {
    std::set<std::string> ok(keys.begin(), keys.end());
    for (const auto& [k, v] : node_.items())
      if (!ok.count(k)) fail("unknown key", k);
  }

  bool has(const std::string& key) const { return node_.contains(key); }

  Reader child(const std::string& key) const {
    auto p = path_;
    p.push_back(key);
    return Reader(get_node(key), loc_, p);
  }

  const json& get_node(const std::string& key) const {
    if (!has(key)) fail("missing required key", key);
    return node_.at(key);
  }

  double number(const std::string& key) const {
    const json& v = get_node(key);
    if (!v.is_number()) fail("expected a number", key);
    return v.get<double>();
  }
  double number(const std::string& key, double fallback) const { return has(key) ? number(key) : fallback; }

  int integer(const std::string& key, int fallback) const {
    if (!has(key)) return fallback;
    const json& v = node_.at(key);
    if (!v.is_number_integer()) fail("expected an integer", key);
    return v.get<int>();
  }

  std::uint64_t seed(const std::string& key, std::uint64_t fallback) const {
    if (!has(key)) return fallback;
    const json& v = node_.at(key);
    if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<long long>() >= 0))
      fail("expected a non-negative integer", key);
    return v.get<std::uint64_t>();
  }

  bool boolean(const std::string& key, bool fallback) const {
    if (!has(key)) return fallback;
    const json& v = node_.at(key);
    if (!v.is_boolean()) fail("expected true or false", key);
    return v.get<bool>();
  }

  std::string string(const std::string& key, const std::string& fallback) const {
    if (!has(key)) return fallback;
    const json& v = node_.at(key);
    if (!v.is_string()) fail("expected a string", key);
    return v.get<std::string>();
  }

  Vec3 vec3(const json& v, const std::string& key) const {
    if (!v.is_array() || v.size() != 3) fail("expected a 3-vector", key);
    Vec3 out;
    for (int i = 0; i < 3; ++i) {
      if (!v[i].is_number()) fail("expected a 3-vector of numbers", key);
      out[i] = v[i].get<double>();
    }
    return out;
  }
  Vec3 vec3(const std::string& key) const { return vec3(get_node(key), key); }
  Vec3 vec3(const std::string& key, const Vec3& fallback) const { return has(key) ? vec3(key) : fallback; }

  std::vector<Vec3> vec3_list(const std::string& key) const {
    const json& v = get_node(key);
    if (!v.is_array()) fail("expected a list of 3-vectors", key);
    std::vector<Vec3> out;
    for (const auto& e : v) out.push_back(vec3(e, key));
    return out;
  }

  std::vector<double> numbers(const std::string& key) const {
    const json& v = get_node(key);
    if (!v.is_array()) fail("expected a list of numbers", key);
    std::vector<double> out;
    for (const auto& e : v) {
      if (!e.is_number()) fail("expected a list of numbers", key);
      out.push_back(e.get<double>());
    }
    return out;
  }

  std::vector<std::pair<double, double>> number_pairs(const std::string& key) const {
    const json& v = get_node(key);
    if (!v.is_array()) fail("expected a list of [x, y] pairs", key);
    std::vector<std::pair<double, double>> out;
    for (const auto& e : v) {
      if (!e.is_array() || e.size() != 2 || !e[0].is_number() || !e[1].is_number())
        fail("expected a list of [x, y] pairs", key);
      out.emplace_back(e[0].get<double>(), e[1].get<double>());
    }
    return out;
  }

  std::vector<std::uint64_t> seeds(const std::string& key) const {
    if (!has(key)) return {0};
    const json& v = node_.at(key);
    if (!v.is_array() || v.empty()) fail("expected a non-empty list of seeds", key);
    std::vector<std::uint64_t> out;
    for (const auto& e : v) {
      if (!e.is_number_unsigned()) fail("expected non-negative integer seeds", key);
      out.push_back(e.get<std::uint64_t>());
    }
    return out;
  }

  /// Runs f, re-raising library ConfigErrors with this node's line anchor.
  template <class F>
  auto guarded(F&& f) const {
    try {
      return f();
    } catch (const AnchoredError&) {
      throw;
    } catch (const ConfigError& e) {
      fail(e.what());
    }
  }

 private:
  const json& node_;
  const LineLocator& loc_;
  std::vector<std::string> path_;
};

Box read_box(const Reader& r) {
  r.allow({"lo", "hi"});
  return Box{r.vec3("lo"), r.vec3("hi")};
}

MediumSpec read_medium(const Reader& r) {
  r.allow({"type", "n0", "radius", "center", "alpha", "grid", "support"});
  const std::string type = r.string("type", "");
  return r.guarded([&] {
    auto base = [&]() -> MediumSpec {
      if (type == "vacuum") return MediumSpec::constant_ball(1.0, r.number("radius", 1.0), r.vec3("center", Vec3::Zero()));
      if (type == "constant_ball")
        return MediumSpec::constant_ball(r.number("n0"), r.number("radius"), r.vec3("center", Vec3::Zero()));
      if (type == "smooth_bump")
        return MediumSpec::smooth_bump(r.number("n0"), r.number("radius"), r.vec3("center", Vec3::Zero()),
                                       r.number("alpha", 1.0));
      if (type == "grid") {
        const Reader g = r.child("grid");
        g.allow({"origin", "spacing", "dims", "values"});
        GridProfile p;
        p.origin = g.vec3("origin");
        p.spacing = g.number("spacing");
        const auto dims = g.numbers("dims");
        if (dims.size() != 3) g.fail("expected three lattice sizes", "dims");
        for (int i = 0; i < 3; ++i) p.dims[i] = static_cast<int>(dims[i]);
        p.values = g.numbers("values");
        return MediumSpec::gridded(std::move(p));
      }
      r.fail("type must be one of vacuum, constant_ball, smooth_bump, grid", "type");
    }();
    if (r.has("support")) return base.with_support(read_box(r.child("support")));
    return base;
  });
}

WaveConfig read_waves(const Reader& r) {
  r.allow({"kappa", "count", "offset", "directions", "kappa_max"});
  return r.guarded([&] {
    const double kappa = r.number("kappa");
    const double kappa_max = r.number("kappa_max", WaveConfig::kDefaultKappaMax);
    if (r.has("directions")) {
      if (r.has("count") || r.has("offset")) r.fail("give either directions or count/offset, not both");
      return WaveConfig(kappa, r.vec3_list("directions"), kappa_max);
    }
    return WaveConfig(kappa, fibonacci_directions(r.integer("count", 6), r.integer("offset", 0)), kappa_max);
  });
}

SolverOptions read_solver(const Reader& r) {
  r.allow({"cells_per_axis", "subsamples", "tolerance", "max_iterations", "restart"});
  SolverOptions o;
  o.cells_per_axis = r.integer("cells_per_axis", o.cells_per_axis);
  o.subsamples = r.integer("subsamples", o.subsamples);
  o.krylov.tolerance = r.number("tolerance", o.krylov.tolerance);
  o.krylov.max_iterations = r.integer("max_iterations", o.krylov.max_iterations);
  o.krylov.restart = r.integer("restart", o.krylov.restart);
  if (o.cells_per_axis < 2) r.fail("must be at least 2", "cells_per_axis");
  if (o.subsamples < 1) r.fail("must be at least 1", "subsamples");
  if (!(o.krylov.tolerance > 0.0)) r.fail("must be positive", "tolerance");
  if (o.krylov.max_iterations < 1) r.fail("must be at least 1", "max_iterations");
  if (o.krylov.restart < 1) r.fail("must be at least 1", "restart");
  return o;
}

WindowPolicy read_window(const Reader& r) {
  const std::string w = r.string("window", "enforce");
  if (w == "enforce") return WindowPolicy::enforce;
  if (w == "allow_outside") return WindowPolicy::allow_outside;
  r.fail("must be enforce or allow_outside", "window");
}

GreenModel read_green_model(const Reader& r, GreenModel fallback) {
  if (!r.has("green_model")) return fallback;
  const std::string g = r.string("green_model", "");
  if (g == "solver") return GreenModel::solver;
  if (g == "surrogate") return GreenModel::surrogate;
  r.fail("must be solver or surrogate", "green_model");
}

PairGeometry read_geometry(const Reader& r) {
  PairGeometry g;
  g.anchors = r.vec3_list("anchors");
  g.axes = r.vec3_list("axes");
  g.d_scale = r.number("d_scale", 1.0);
  if (g.anchors.size() != g.axes.size()) r.fail("anchors and axes must have equal length", "axes");
  if (g.anchors.empty()) r.fail("at least one pair is required", "anchors");
  return g;
}

InclusionLayout read_layout(const Reader& r, const Box& omega) {
  r.allow({"a", "h", "t", "s", "d_min", "d_max", "window", "probes", "pairs"});
  LayoutParams p;
  p.a = r.number("a");
  p.h = r.number("h");
  p.t = r.number("t");
  p.s = r.number("s", 0.0);
  p.d_min = r.number("d_min", p.d_min);
  p.d_max = r.number("d_max", p.d_max);
  const WindowPolicy policy = read_window(r);
  std::vector<Probe> probes;
  if (r.has("probes")) {
    const json& list = r.get_node("probes");
    if (!list.is_array()) r.fail("expected a list", "probes");
    for (const auto& e : list) {
      if (!e.is_array()) r.fail("each probe is a list of one or two centers", "probes");
      Probe probe;
      for (const auto& c : e) probe.centers.push_back(r.vec3(c, "probes"));
      probes.push_back(std::move(probe));
    }
  }
  if (r.has("pairs")) {
    const Reader pr = r.child("pairs");
    pr.allow({"anchors", "axes", "d_scale"});
    const PairGeometry g = read_geometry(pr);
    for (auto& probe : r.guarded([&] { return make_pairs(g.anchors, g.axes, p.a, p.t, g.d_scale); }))
      probes.push_back(std::move(probe));
  }
  return r.guarded([&] { return InclusionLayout(p, std::move(probes), omega, policy); });
}

SynthesisOptions read_synthesis(const Reader& r) {
  r.allow({"green_model", "residual_c", "seed"});
  SynthesisOptions o;
  o.green_model = read_green_model(r, GreenModel::solver);
  o.residual_c = r.number("residual_c", 0.0);
  o.seed = r.seed("seed", 0);
  if (!(o.residual_c >= 0.0)) r.fail("must be non-negative", "residual_c");
  return o;
}

void read_noise(const Reader& r, ExperimentConfig& cfg) {
  r.allow({"delta", "delta_v", "delta_u", "delta_w", "eta", "t_tilde", "seed"});
  NoiseModel n;
  const double delta = r.number("delta", 0.0);
  n.delta_v = r.number("delta_v", delta);
  n.delta_u = r.number("delta_u", delta);
  n.delta_w = r.number("delta_w", delta);
  n.seed = r.seed("seed", 0);
  for (const char* k : {"delta_v", "delta_u", "delta_w"})
    if (r.number(k, delta) < 0.0) r.fail("must be non-negative", k);
  ShiftModel s;
  s.eta = r.number("eta", 0.0);
  s.t_tilde = r.number("t_tilde", cfg.layout ? cfg.layout->t() : 0.0);
  s.seed = derive_seed(n.seed, 0x51);
  if (!(s.eta >= 0.0)) r.fail("must be non-negative", "eta");
  cfg.noise = n;
  cfg.shift = s;
}

void check_a_values(const Reader& r, const std::vector<double>& a) {
  if (a.size() < 3) r.fail("at least three a values are needed for a rate fit", "a_values");
  for (double v : a)
    if (!(v > 0.0 && v < 1.0)) r.fail("every a must lie in (0, 1)", "a_values");
}

RateSweepSpec read_sweep(const Reader& r) {
  r.allow({"a_values", "ht", "seeds", "anchors", "axes", "d_scale", "residual_c", "green_model", "window"});
  RateSweepSpec s;
  s.a_values = r.numbers("a_values");
  check_a_values(r, s.a_values);
  s.ht = r.number_pairs("ht");
  s.seeds = r.seeds("seeds");
  s.geometry = read_geometry(r);
  s.residual_c = r.number("residual_c", 0.0);
  s.green_model = read_green_model(r, GreenModel::surrogate);
  s.policy = read_window(r);
  for (const auto& [h, t] : s.ht) r.guarded([&] { validate_exponents(h, t, s.policy); });
  return s;
}

NoiseStudySpec read_noise_study(const Reader& r) {
  r.allow({"a_values", "h", "t", "t_tilde", "regimes", "seeds", "anchors", "axes", "d_scale",
           "residual_c", "green_model"});
  NoiseStudySpec s;
  s.a_values = r.numbers("a_values");
  check_a_values(r, s.a_values);
  s.h = r.number("h");
  s.t = r.number("t");
  s.t_tilde = r.number("t_tilde", s.t);
  for (const auto& [q1, q2] : r.number_pairs("regimes")) s.regimes.push_back({q1, q2});
  s.seeds = r.seeds("seeds");
  s.geometry = read_geometry(r);
  s.residual_c = r.number("residual_c", 0.0);
  s.green_model = read_green_model(r, GreenModel::surrogate);
  r.guarded([&] { validate_exponents(s.h, s.t, WindowPolicy::allow_outside); });
  return s;
}

}  // namespace

ExperimentConfig parse_config(const std::string& text, const std::string& source) {
  LineLocator loc(text, source);
  json root;
  try {
    root = json::parse(text);
  } catch (const json::parse_error& e) {
    const std::string what = e.what();
    throw ConfigError(loc.at_offset(e.byte == 0 ? 0 : e.byte - 1) + ": malformed JSON: " + what);
  }
  const Reader r(root, loc, {});
  r.allow({"medium", "waves", "solver", "layout", "synthesis", "noise", "sweep", "noise_study",
           "mie_validation"});
  ExperimentConfig cfg;
  if (r.has("medium")) cfg.medium = read_medium(r.child("medium"));
  if (r.has("waves")) cfg.waves = read_waves(r.child("waves"));
  if (r.has("solver")) cfg.solver = read_solver(r.child("solver"));
  if (r.has("layout")) {
    if (!cfg.medium) r.fail("layout requires a medium section", "layout");
    cfg.layout = read_layout(r.child("layout"), cfg.medium->support());
  }
  if (r.has("synthesis")) cfg.synthesis = read_synthesis(r.child("synthesis"));
  if (r.has("noise")) read_noise(r.child("noise"), cfg);
  if (r.has("sweep")) cfg.sweep = read_sweep(r.child("sweep"));
  if (r.has("noise_study")) cfg.noise_study = read_noise_study(r.child("noise_study"));
  cfg.mie_validation = r.boolean("mie_validation", false);
  return cfg;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(path + ": cannot open config file");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str(), path);
}

}  // namespace pairprobe
