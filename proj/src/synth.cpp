#include "rtda/synth.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace rtda {

void SignalSpec::validate() const {
  if (!(f_start > 0.0) || !(f_end >= f_start)) throw std::invalid_argument("signal: need f_end >= f_start > 0");
  if (!(t_max > 0.0)) throw std::invalid_argument("signal: t_max must be positive");
  if (n < 2) throw std::invalid_argument("signal: n must be >= 2");
  if (!(squeeze_depth >= 0.0 && squeeze_depth < 1.0)) throw std::invalid_argument("signal: squeeze_depth must lie in [0, 1)");
  if (!std::isfinite(squeeze_width)) throw std::invalid_argument("signal: squeeze_width must be finite");
  if (!std::isfinite(amplitude_x) || !std::isfinite(amplitude_y)) throw std::invalid_argument("signal: amplitudes must be finite");
}

double squeeze(double x, double x_max_abs, double depth, double width) {
  if (!(x_max_abs > 0.0)) throw std::invalid_argument("squeeze: x_max_abs must be positive");
  const double r = x / x_max_abs;
  return 1.0 - depth * std::exp(-width * r * r);
}

double angular_frequency(const SignalSpec& spec, double t) {
  return 2.0 * std::numbers::pi * (spec.f_start + (spec.f_end - spec.f_start) * t / spec.t_max);
}

SignalFrame generate_signal(const SignalSpec& spec) {
  spec.validate();
  const auto n = static_cast<std::size_t>(spec.n);
  std::vector<double> t = uniform_times(n, spec.t_max);
  Eigen::MatrixXd v(spec.n, 2);
  double x_max_abs = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const auto r = static_cast<Eigen::Index>(i);
    v(r, 0) = spec.amplitude_x * std::cos(angular_frequency(spec, t[i]) * t[i]);
    x_max_abs = std::max(x_max_abs, std::abs(v(r, 0)));
  }
  for (std::size_t i = 0; i < n; ++i) {
    const auto r = static_cast<Eigen::Index>(i);
    const double s = x_max_abs > 0.0 ? squeeze(v(r, 0), x_max_abs, spec.squeeze_depth, spec.squeeze_width) : 1.0 - spec.squeeze_depth;
    v(r, 1) = spec.amplitude_y * std::sin(angular_frequency(spec, t[i]) * t[i]) * s;
  }
  return SignalFrame(std::move(t), std::move(v));
}

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

GaussianSource::GaussianSource(std::uint64_t seed, std::uint64_t stream)
    : engine_(splitmix64(splitmix64(seed) ^ splitmix64(~stream))) {}

double GaussianSource::uniform_open() {
  // (k + 0.5) / 2^53 lies strictly inside (0, 1)
  return (static_cast<double>(engine_() >> 11) + 0.5) * 0x1.0p-53;
}

double GaussianSource::operator()() {
  const double u1 = uniform_open();
  const double u2 = uniform_open();
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

SignalFrame add_noise(const SignalFrame& frame, const NoiseSpec& spec) {
  if (std::isnan(spec.snr_db)) throw std::invalid_argument("add_noise: snr_db is NaN");
  if (spec.snr_db == std::numeric_limits<double>::infinity()) return frame;
  Eigen::MatrixXd v = frame.values();
  for (Eigen::Index c = 0; c < v.cols(); ++c) {
    const double power = v.col(c).squaredNorm() / static_cast<double>(v.rows());
    const double sigma = std::sqrt(power * std::pow(10.0, -spec.snr_db / 10.0));
    GaussianSource gauss(spec.seed, static_cast<std::uint64_t>(c));
    for (Eigen::Index i = 0; i < v.rows(); ++i) v(i, c) += sigma * gauss();
  }
  return frame.with_values(std::move(v));
}

namespace {

void check_same_shape(const SignalFrame& a, const SignalFrame& b, std::size_t channel) {
  if (a.size() != b.size() || a.channels() != b.channels()) throw std::invalid_argument("frame shape mismatch");
  if (channel >= a.channels()) throw std::invalid_argument("channel out of range");
}

}  // namespace

double rmse(const SignalFrame& a, const SignalFrame& b, std::size_t channel) {
  check_same_shape(a, b, channel);
  const auto c = static_cast<Eigen::Index>(channel);
  return std::sqrt((a.values().col(c) - b.values().col(c)).squaredNorm() / static_cast<double>(a.size()));
}

double empirical_snr_db(const SignalFrame& clean, const SignalFrame& noisy, std::size_t channel) {
  check_same_shape(clean, noisy, channel);
  const auto c = static_cast<Eigen::Index>(channel);
  const double signal = clean.values().col(c).squaredNorm();
  const double noise = (noisy.values().col(c) - clean.values().col(c)).squaredNorm();
  return 10.0 * std::log10(signal / noise);
}

}  // namespace rtda
