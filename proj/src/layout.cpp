#include "pairprobe/layout.hpp"

#include <cmath>
#include <sstream>

#include "pairprobe/errors.hpp"

namespace pairprobe {

Probe Probe::pair(const Vec3& z1, const Vec3& axis, double separation) {
  if (!(axis.norm() > 0.0)) throw LayoutError("layout: pair axis must be non-zero");
  return Probe{{z1, z1 + separation * axis.normalized()}};
}

double Probe::separation() const {
  return is_pair() ? (centers[1] - centers[0]).norm() : 0.0;
}

double LayoutParams::nominal_separation() const { return std::pow(a, t); }

void validate_exponents(double h, double t, WindowPolicy policy) {
  if (!(h > 0.0)) throw LayoutError("layout: impedance exponent h must be positive");
  if (!(h < 1.0)) throw LayoutError("layout: impedance exponent h must be below 1");
  if (!(t >= 0.0)) throw LayoutError("layout: closeness exponent t must be non-negative");
  if (policy == WindowPolicy::enforce && !(h + 2.0 * t < 1.0)) {
    std::ostringstream os;
    os << "layout: h + 2t = " << h + 2.0 * t << " violates h + 2t < 1";
    throw LayoutError(os.str());
  }
}

InclusionLayout::InclusionLayout(LayoutParams params, std::vector<Probe> probes, const Box& omega,
                                 WindowPolicy policy)
    : params_(params), probes_(std::move(probes)), omega_(omega), policy_(policy) {
  if (!(params_.a > 0.0 && params_.a < 1.0)) throw LayoutError("layout: radius a must lie in (0, 1)");
  validate_exponents(params_.h, params_.t, policy_);
  if (!(params_.d_min > 0.0 && params_.d_min <= params_.d_max))
    throw LayoutError("layout: need 0 < d_min <= d_max");
  const double scale = params_.nominal_separation();
  for (std::size_t m = 0; m < probes_.size(); ++m) {
    const Probe& p = probes_[m];
    if (p.centers.empty() || p.centers.size() > 2)
      throw LayoutError("layout: probe " + std::to_string(m) + " must hold one or two centers");
    for (const Vec3& z : p.centers)
      if (!omega_.contains_strictly(z))
        throw LayoutError("layout: probe " + std::to_string(m) + " has a center outside the support");
    if (p.is_pair()) {
      const double d = p.separation();
      if (d < params_.d_min * scale * (1 - 1e-12) || d > params_.d_max * scale * (1 + 1e-12)) {
        std::ostringstream os;
        os << "layout: probe " << m << " separation " << d << " outside [" << params_.d_min * scale
           << ", " << params_.d_max * scale << "]";
        throw LayoutError(os.str());
      }
      if (d <= 2.0 * params_.a)
        throw LayoutError("layout: probe " + std::to_string(m) + " inclusions overlap");
    }
  }
}

InclusionLayout InclusionLayout::with_probes(std::vector<Probe> probes) const {
  return InclusionLayout(params_, std::move(probes), omega_, policy_);
}

std::vector<Probe> make_pairs(const std::vector<Vec3>& anchors, const std::vector<Vec3>& axes,
                              double a, double t, double d_scale) {
  if (anchors.size() != axes.size()) throw LayoutError("layout: anchors and axes differ in length");
  std::vector<Probe> out;
  out.reserve(anchors.size());
  const double d = d_scale * std::pow(a, t);
  for (std::size_t i = 0; i < anchors.size(); ++i) out.push_back(Probe::pair(anchors[i], axes[i], d));
  return out;
}

}  // namespace pairprobe
