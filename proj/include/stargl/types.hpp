#ifndef STARGL_TYPES_HPP_
#define STARGL_TYPES_HPP_

#include <cmath>
#include <complex>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace stargl {

using cxd = std::complex<double>;
using CMat = Eigen::MatrixXcd;
using CVec = Eigen::VectorXcd;
using RMat = Eigen::MatrixXd;
using RVec = Eigen::VectorXd;
using Vec3 = Eigen::Vector3d;

inline constexpr double kPi = 3.141592653589793238462643383279502884;
inline constexpr cxd kJ{0.0, 1.0};

// Error categories used across the toolkit. Messages carry the offending
// quantity so CLI output stays machine-greppable.
struct DimensionError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct ConstraintError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct DomainError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct DataError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct NumericalError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// dBm <-> watt. 0 dBm = 1 mW, so P[W] = 10^((dBm - 30)/10).
inline double dbm_to_watt(double dbm) { return std::pow(10.0, (dbm - 30.0) / 10.0); }
inline double watt_to_dbm(double watt) {
  if (watt <= 0.0) throw DomainError("watt_to_dbm: power must be > 0, got " + std::to_string(watt));
  return 10.0 * std::log10(watt) + 30.0;
}

}  // namespace stargl

#endif  // STARGL_TYPES_HPP_
