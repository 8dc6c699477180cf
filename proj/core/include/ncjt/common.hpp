#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <complex>
#include <stdexcept>
#include <string>

namespace ncjt {

// Antenna counts stay small; bounded dynamic matrices keep Eigen off the heap
// in the per-PRB hot path.
inline constexpr int kMaxAntennas = 8;

using Complex = std::complex<double>;
using CMat = Eigen::Matrix<Complex, Eigen::Dynamic, Eigen::Dynamic,
                           Eigen::ColMajor, kMaxAntennas, kMaxAntennas>;
using CVec =
    Eigen::Matrix<Complex, Eigen::Dynamic, 1, Eigen::ColMajor, kMaxAntennas, 1>;

struct Vec3 {
  double x = 0;
  double y = 0;
  double z = 0;
};

inline double distance_2d(const Vec3& a, const Vec3& b) {
  return std::hypot(a.x - b.x, a.y - b.y);
}

inline double distance_3d(const Vec3& a, const Vec3& b) {
  return std::hypot(a.x - b.x, a.y - b.y, a.z - b.z);
}

inline double db_to_lin(double db) { return std::pow(10.0, db / 10.0); }
inline double lin_to_db(double lin) { return 10.0 * std::log10(lin); }
inline double dbm_to_watt(double dbm) { return std::pow(10.0, (dbm - 30.0) / 10.0); }

/// Invalid or out-of-range configuration; reported before any run starts.
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

/// Deployment construction failed (e.g. user dropping cannot satisfy the
/// per-TRP attachment quota within the retry budget).
class SetupError : public std::runtime_error {
 public:
  explicit SetupError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace ncjt
