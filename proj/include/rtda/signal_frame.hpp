#pragma once

#include <cstddef>
#include <vector>

#include <Eigen/Core>

namespace rtda {

/// Uniformly sampled multichannel time series.
///
/// Row i of `values()` is the state-space point p_i; column c is channel c.
/// Construction validates the grid (n >= 2, constant step, finite values).
class SignalFrame {
public:
  SignalFrame(std::vector<double> times, Eigen::MatrixXd values);

  const std::vector<double>& times() const { return times_; }
  const Eigen::MatrixXd& values() const { return values_; }

  std::size_t size() const { return times_.size(); }
  std::size_t channels() const { return static_cast<std::size_t>(values_.cols()); }

  /// Sampling step in seconds.
  double step() const { return (times_.back() - times_.front()) / static_cast<double>(size() - 1); }
  double sample_rate() const { return 1.0 / step(); }

  /// Same time grid, new values. Throws if the shape differs.
  SignalFrame with_values(Eigen::MatrixXd values) const;

private:
  std::vector<double> times_;
  Eigen::MatrixXd values_;
};

/// Uniform grid of n points spanning [0, t_max], both endpoints included.
std::vector<double> uniform_times(std::size_t n, double t_max);

}  // namespace rtda
