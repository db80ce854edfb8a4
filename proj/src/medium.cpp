#include "pairprobe/medium.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "pairprobe/errors.hpp"

namespace pairprobe {

bool Box::contains(const Vec3& x) const {
  return (x.array() >= lo.array()).all() && (x.array() <= hi.array()).all();
}

bool Box::contains_strictly(const Vec3& x) const {
  return (x.array() > lo.array()).all() && (x.array() < hi.array()).all();
}

namespace {

Box ball_box(const Vec3& c, double r) {
  return Box{c - Vec3::Constant(r), c + Vec3::Constant(r)};
}

bool box_inside(const Box& inner, const Box& outer) {
  return (inner.lo.array() >= outer.lo.array()).all() &&
         (inner.hi.array() <= outer.hi.array()).all();
}

void require_ball(double n0, double radius) {
  if (!(n0 > 0.0) || !std::isfinite(n0)) throw ConfigError("medium: n0 must be positive and finite");
  if (!(radius > 0.0) || !std::isfinite(radius)) throw ConfigError("medium: radius must be positive");
}

Box profile_box(const MediumSpec::Profile& p) {
  return std::visit(
      [](const auto& prof) -> Box {
        using T = std::decay_t<decltype(prof)>;
        if constexpr (std::is_same_v<T, GridProfile>) {
          Vec3 span(prof.dims[0] - 1, prof.dims[1] - 1, prof.dims[2] - 1);
          return Box{prof.origin, prof.origin + prof.spacing * span};
        } else {
          return ball_box(prof.center, prof.radius);
        }
      },
      p);
}

}  // namespace

MediumSpec::MediumSpec(Profile profile, const Box& support)
    : profile_(std::move(profile)), support_(support) {
  if (!((support_.hi.array() > support_.lo.array()).all()))
    throw ConfigError("medium: support box must have positive extent");
  std::visit(
      [this](const auto& prof) {
        using T = std::decay_t<decltype(prof)>;
        if constexpr (std::is_same_v<T, GridProfile>) {
          double top = 1.0;
          for (double v : prof.values) top = std::max(top, v);
          n_max_ = top;
          vacuum_ = std::all_of(prof.values.begin(), prof.values.end(),
                                [](double v) { return v == 1.0; });
        } else {
          n_max_ = std::max(1.0, prof.n0);
          vacuum_ = prof.n0 == 1.0;
        }
      },
      profile_);
}

MediumSpec MediumSpec::constant_ball(double n0, double radius, const Vec3& center) {
  require_ball(n0, radius);
  return MediumSpec(ConstantBall{n0, radius, center}, ball_box(center, radius));
}

MediumSpec MediumSpec::smooth_bump(double n0, double radius, const Vec3& center, double alpha) {
  require_ball(n0, radius);
  if (!(alpha > 0.0 && alpha <= 1.0)) throw ConfigError("medium: alpha must lie in (0, 1]");
  return MediumSpec(SmoothBump{n0, radius, center, alpha}, ball_box(center, radius));
}

MediumSpec MediumSpec::gridded(GridProfile grid) {
  Box box = profile_box(grid);
  return gridded(std::move(grid), box);
}

MediumSpec MediumSpec::gridded(GridProfile grid, const Box& support) {
  if (grid.dims[0] < 2 || grid.dims[1] < 2 || grid.dims[2] < 2)
    throw ConfigError("medium: grid needs at least 2 nodes per axis");
  if (!(grid.spacing > 0.0)) throw ConfigError("medium: grid spacing must be positive");
  const auto expected = static_cast<std::size_t>(grid.dims[0]) * grid.dims[1] * grid.dims[2];
  if (grid.values.size() != expected)
    throw ConfigError("medium: grid has " + std::to_string(grid.values.size()) +
                      " values, expected " + std::to_string(expected));
  for (double v : grid.values)
    if (!(v > 0.0) || !std::isfinite(v)) throw ConfigError("medium: grid values must be positive");
  return MediumSpec(std::move(grid), support);
}

MediumSpec MediumSpec::with_support(const Box& support) const {
  if (!std::holds_alternative<GridProfile>(profile_) && !box_inside(profile_box(profile_), support))
    throw ConfigError("medium: support box must contain the whole profile");
  return MediumSpec(profile_, support);
}

double MediumSpec::profile_value(const Vec3& x) const {
  return std::visit(
      [&x](const auto& prof) -> double {
        using T = std::decay_t<decltype(prof)>;
        if constexpr (std::is_same_v<T, ConstantBall>) {
          return (x - prof.center).norm() <= prof.radius ? prof.n0 : 1.0;
        } else if constexpr (std::is_same_v<T, SmoothBump>) {
          const double r2 = (x - prof.center).squaredNorm();
          const double R2 = prof.radius * prof.radius;
          if (r2 >= R2) return 1.0;
          return 1.0 + (prof.n0 - 1.0) * std::exp(1.0 - R2 / (R2 - r2));
        } else {
          Vec3 u = (x - prof.origin) / prof.spacing;
          std::array<int, 3> i0{};
          std::array<double, 3> f{};
          for (int d = 0; d < 3; ++d) {
            const double top = prof.dims[d] - 1;
            if (u[d] < 0.0 || u[d] > top)
              throw InterpolationDomainError("medium: point inside support but outside the lattice");
            i0[d] = std::min(static_cast<int>(std::floor(u[d])), prof.dims[d] - 2);
            f[d] = u[d] - i0[d];
          }
          auto at = [&prof](int i, int j, int k) {
            return prof.values[(static_cast<std::size_t>(k) * prof.dims[1] + j) * prof.dims[0] + i];
          };
          double acc = 0.0;
          for (int c = 0; c < 8; ++c) {
            const int di = c & 1, dj = (c >> 1) & 1, dk = (c >> 2) & 1;
            const double w = (di ? f[0] : 1 - f[0]) * (dj ? f[1] : 1 - f[1]) * (dk ? f[2] : 1 - f[2]);
            if (w != 0.0) acc += w * at(i0[0] + di, i0[1] + dj, i0[2] + dk);
          }
          return acc;
        }
      },
      profile_);
}

double MediumSpec::index_at(const Vec3& x) const {
  if (!support_.contains(x)) return 1.0;
  return profile_value(x);
}

double evaluate_index(const MediumSpec& medium, const Vec3& x) { return medium.index_at(x); }

}  // namespace pairprobe
