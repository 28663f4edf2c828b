#pragma once

#include <cmath>
#include <stdexcept>

namespace rtda {

struct GoldenSectionResult {
  double argmax;
  double value;
};

/// Maximise a unimodal function on [lower, upper] until the bracket is
/// narrower than `tol`. Returns the best evaluated point.
template <typename F>
GoldenSectionResult golden_section_maximize(F&& f, double lower, double upper, double tol) {
  if (!(tol > 0.0)) throw std::invalid_argument("golden_section_maximize: tol must be positive");
  if (!(upper > lower)) throw std::invalid_argument("golden_section_maximize: empty interval");

  static const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = lower;
  double b = upper;
  double c = b - inv_phi * (b - a);
  double d = a + inv_phi * (b - a);
  double fc = f(c);
  double fd = f(d);

  while (b - a > tol) {
    if (fc > fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - inv_phi * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + inv_phi * (b - a);
      fd = f(d);
    }
  }
  return fc > fd ? GoldenSectionResult{c, fc} : GoldenSectionResult{d, fd};
}

}  // namespace rtda
