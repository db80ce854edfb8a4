#pragma once

#include <array>
#include <functional>
#include <memory>
#include <span>

#include "pairprobe/types.hpp"

namespace pairprobe {

/// Applies a translation-invariant kernel on a 3-D lattice,
///   out_i = sum_j K(i - j) in_j,
/// by circulant embedding on a lattice padded to twice the size in every
/// direction.  Reentrant: apply() owns its scratch buffers.
class ToeplitzConvolver {
 public:
  using KernelFn = std::function<cplx(int, int, int)>;

  ToeplitzConvolver(const std::array<int, 3>& dims, const KernelFn& kernel);
  ~ToeplitzConvolver();
  ToeplitzConvolver(const ToeplitzConvolver&) = delete;
  ToeplitzConvolver& operator=(const ToeplitzConvolver&) = delete;

  void apply(std::span<const cplx> in, std::span<cplx> out) const;

  const std::array<int, 3>& dims() const { return dims_; }

 private:
  struct Plans;
  std::array<int, 3> dims_;
  std::array<int, 3> padded_;
  std::size_t padded_size_ = 0;
  std::unique_ptr<Plans> plans_;
};

}  // namespace pairprobe
