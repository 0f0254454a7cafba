#include "spooftrack/rng.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace stb {

double CounterRng::normal() {
  // 1 - u lies in (0, 1], keeping the log finite.
  const double u1 = 1.0 - uniform();
  const double u2 = uniform();
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

int CounterRng::poisson(double mean) {
  if (!(mean >= 0.0) || mean > 700.0) {
    throw std::invalid_argument("poisson mean must lie in [0, 700]");
  }
  if (mean == 0.0) return 0;
  const double limit = std::exp(-mean);
  int k = 0;
  double prod = uniform();
  while (prod > limit) {
    ++k;
    prod *= uniform();
  }
  return k;
}

}  // namespace stb
