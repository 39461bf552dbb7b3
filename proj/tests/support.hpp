#pragma once

#include <initializer_list>

#include <Eigen/Core>

#include "plsoff/scenario.hpp"

namespace testing_support {

inline Eigen::VectorXd vec(std::initializer_list<double> v) {
  Eigen::VectorXd out(static_cast<Eigen::Index>(v.size()));
  Eigen::Index i = 0;
  for (double x : v) out[i++] = x;
  return out;
}

/// Hand-built scenario; eavesdropper gains default to zero.
inline plsoff::Scenario manual(const Eigen::VectorXd& h, const Eigen::VectorXd& g = {}, const Eigen::VectorXd& eps = {},
                               double noise = 1.0) {
  plsoff::Scenario s;
  const Eigen::Index n = h.size();
  s.h = h;
  s.g_est = g.size() ? g : Eigen::VectorXd::Zero(n);
  s.eps = eps.size() ? eps : Eigen::VectorXd::Zero(n);
  s.d_bits = Eigen::VectorXd::Constant(n, 81920.0);
  s.cycles_per_bit = Eigen::VectorXd::Constant(n, 2193.0);
  s.constants.noise_power_w = noise;
  return s;
}

}  // namespace testing_support
