#pragma once

#include "insdecay/solver/density.hpp"

namespace insdecay {

/// (t, u, rho) on a shared grid.
struct FlowState {
  double t = 0.0;
  VelocityField u;
  DensityField rho;

  FlowState(double time, VelocityField vel, DensityField dens)
      : t(time), u(std::move(vel)), rho(std::move(dens)) {
    require_same_grid(u.grid(), rho.grid(), "FlowState");
  }

  const Grid& grid() const noexcept { return u.grid(); }
};

}  // namespace insdecay
