#pragma once

// Shared fixtures for the test binaries. Random data here comes from the
// standard distributions rather than the library's own preset generator.

#include <cstdint>
#include <random>
#include <vector>

#include "heatstring/spectral_core.hpp"

namespace heatstring::testing {

inline std::vector<double> random_vector(std::mt19937_64& rng, std::size_t n, double lo = -1.0,
                                         double hi = 1.0) {
  std::uniform_real_distribution<double> d(lo, hi);
  std::vector<double> out(n);
  for (double& x : out) x = d(rng);
  return out;
}

// Random state with coefficients decaying like n^-3 (u) and n^-2 (v, theta).
inline SpectralState random_state(std::mt19937_64& rng, int n_modes, double theta0 = 1.0,
                                  double scale = 1.0) {
  std::uniform_real_distribution<double> d(-1.0, 1.0);
  SpectralState st = SpectralState::zeros(n_modes);
  st.theta0 = theta0;
  for (int n = 1; n <= n_modes; ++n) {
    const double w = scale / (static_cast<double>(n) * n);
    st.u[n - 1] = d(rng) * w / n;
    st.v[n - 1] = d(rng) * w;
    st.theta[n - 1] = d(rng) * w;
  }
  return st;
}

}  // namespace heatstring::testing
