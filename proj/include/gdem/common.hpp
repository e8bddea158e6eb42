#pragma once

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include <charconv>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>

namespace gdem {

inline constexpr const char* kVersion = "0.1.0";

using Mat = Eigen::MatrixXd;
using Vec = Eigen::VectorXd;
using IVec = Eigen::VectorXi;
using SpMat = Eigen::SparseMatrix<double>;
using Rng = std::mt19937_64;

/// Bad input: malformed files, shape mismatches, violated preconditions.
/// The CLI maps this to exit code 1.
class ValidationError : public std::runtime_error {
 public:
  explicit ValidationError(const std::string& msg) : std::runtime_error(msg) {}
};

/// Numerical failure: NaN/Inf losses, divergence, solver breakdown.
/// The CLI maps this to exit code 2.
class NumericalError : public std::runtime_error {
 public:
  explicit NumericalError(const std::string& msg) : std::runtime_error(msg) {}
};

/// Shortest round-trip decimal representation, so CSV output is
/// byte-deterministic and parses back to the identical double.
inline std::string format_double(double v) {
  char buf[32];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

/// FNV-1a 64-bit, used for dataset checksums in run manifests.
inline std::uint64_t fnv1a64(const void* data, std::size_t len,
                             std::uint64_t h = 0xcbf29ce484222325ull) {
  const auto* p = static_cast<const unsigned char*>(data);
  for (std::size_t i = 0; i < len; ++i) {
    h ^= p[i];
    h *= 0x100000001b3ull;
  }
  return h;
}

}  // namespace gdem
