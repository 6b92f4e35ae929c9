#pragma once

#include <complex>
#include <stdexcept>
#include <vector>

namespace stokes2d {

using Cplx = std::complex<double>;

inline constexpr double kPi = 3.141592653589793238462643383279502884;

// Error taxonomy: the CLI maps ConfigError to exit 2 and the solver-side
// errors to exit 3, so every throw site picks the type by where the blame
// lies, not by which file it happens to live in.
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct GeometryError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct BasisError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct AaaError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct SolverError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

inline std::vector<double> linspace(double a, double b, int n) {
  std::vector<double> t(n);
  if (n == 1) {
    t[0] = a;
    return t;
  }
  for (int k = 0; k < n; ++k) t[k] = a + (b - a) * k / (n - 1);
  return t;
}

}  // namespace stokes2d
