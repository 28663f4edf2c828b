#include "rtda/signal_frame.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace rtda {

SignalFrame::SignalFrame(std::vector<double> times, Eigen::MatrixXd values)
    : times_(std::move(times)), values_(std::move(values)) {
  const std::size_t n = times_.size();
  if (n < 2) throw std::invalid_argument("SignalFrame: need at least 2 samples");
  if (static_cast<std::size_t>(values_.rows()) != n)
    throw std::invalid_argument("SignalFrame: " + std::to_string(values_.rows()) + " value rows for " +
                                std::to_string(n) + " times");
  if (values_.cols() < 1) throw std::invalid_argument("SignalFrame: need at least 1 channel");
  if (!values_.allFinite()) throw std::invalid_argument("SignalFrame: non-finite value");

  for (double t : times_)
    if (!std::isfinite(t)) throw std::invalid_argument("SignalFrame: non-finite time");
  const double h = step();
  if (!(h > 0.0)) throw std::invalid_argument("SignalFrame: times must be strictly increasing");
  for (std::size_t i = 1; i < n; ++i) {
    const double dt = times_[i] - times_[i - 1];
    if (!(dt > 0.0) || std::abs(dt - h) >= 1e-9 * h)
      throw std::invalid_argument("SignalFrame: time grid is not uniform at sample " + std::to_string(i));
  }
}

SignalFrame SignalFrame::with_values(Eigen::MatrixXd values) const {
  if (values.rows() != values_.rows() || values.cols() != values_.cols())
    throw std::invalid_argument("SignalFrame::with_values: shape mismatch");
  return SignalFrame(times_, std::move(values));
}

std::vector<double> uniform_times(std::size_t n, double t_max) {
  if (n < 2) throw std::invalid_argument("uniform_times: n must be >= 2");
  std::vector<double> t(n);
  const double denom = static_cast<double>(n - 1);
  for (std::size_t i = 0; i < n; ++i) t[i] = t_max * static_cast<double>(i) / denom;
  return t;
}

}  // namespace rtda
