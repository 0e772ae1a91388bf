#pragma once

#include "nsstat/forcing.hpp"
#include "nsstat/trajectory.hpp"

namespace nsstat {

struct IntegrateOptions {
    NonlinearMethod method = NonlinearMethod::Convolution;
    std::string solver_id = "ifrk4";
};

/// Integrating-factor RK4 for du/dt + nu A u + B(u,u) = f. The viscous
/// semigroup is applied exactly per mode (exp(-nu lambda dt)); the advection
/// and forcing terms ride classical RK4 in the transformed variable, so a
/// single-mode or Beltrami field decays at machine precision. Deterministic:
/// identical inputs give bit-identical trajectories.
///
/// dt must divide the interval length; a non-finite state aborts with the
/// failure time in the message. The discrete ball-confinement property is
/// maintained for nu * lambda_max * dt <= 0.5.
Trajectory integrate(const VelocityField& u0, const Interval& interval, double dt, double nu,
                     const ForcingSignal& f, const IntegrateOptions& opts = {});

}  // namespace nsstat
