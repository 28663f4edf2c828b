#pragma once

#include <cstdint>
#include <limits>
#include <random>

#include "rtda/signal_frame.hpp"

namespace rtda {

struct SignalSpec {
  double f_start = 1.0;
  double f_end = 10.0;
  double t_max = 2.0;
  int n = 500;
  double squeeze_depth = 0.9;
  double squeeze_width = 0.5;
  double amplitude_x = 10.0;
  double amplitude_y = 2.0;

  void validate() const;
};

struct NoiseSpec {
  double snr_db = std::numeric_limits<double>::infinity();
  std::uint64_t seed = 0;
};

double squeeze(double x, double x_max_abs, double depth, double width);

/// theta(t) = 2 pi (f_start + (f_end - f_start) t / t_max).
double angular_frequency(const SignalSpec& spec, double t);

/// Two channels: x = A_x cos(theta(t) t), y = A_y sin(theta(t) t) S(x).
SignalFrame generate_signal(const SignalSpec& spec);

/// Standard normal deviates: mt19937_64 seeded through SplitMix64, uniforms
/// from the top 53 bits, Box-Muller (cosine branch, one deviate per pair of
/// draws). Identical sequences on every conforming platform.
class GaussianSource {
public:
  GaussianSource(std::uint64_t seed, std::uint64_t stream);
  double operator()();

private:
  double uniform_open();
  std::mt19937_64 engine_;
};

/// Independent Gaussian noise per channel with sigma_c^2 = mean(x_c^2) 10^(-snr/10).
SignalFrame add_noise(const SignalFrame& frame, const NoiseSpec& spec);

double rmse(const SignalFrame& a, const SignalFrame& b, std::size_t channel);

/// 10 log10(mean(clean^2) / mean((noisy - clean)^2)) for one channel.
double empirical_snr_db(const SignalFrame& clean, const SignalFrame& noisy, std::size_t channel);

std::uint64_t splitmix64(std::uint64_t x);

}  // namespace rtda
