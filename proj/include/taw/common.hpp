#pragma once

#include <complex>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace taw {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using RealMatrix = Eigen::MatrixXd;
using RealVector = Eigen::VectorXd;

/// Letters are 1-based generator indices (words over {1..d}).
using Word = std::vector<int>;

enum class Errc {
  NotPositive,
  NotInvolutive,
  ModularMismatch,
  BadPairing,
  NonPositiveEigenvalue,
  InvalidNorm,
  BadParams,
  SizeCapExceeded,
  NotStrictlyPositive,
  ShapeMismatch,
  TruncationTooSmall,
  CapExceeded,
  NotAdmissible,
  NotOdd,
  NotASingleton,
  InconsistentSizes,
  WrongCase,
  IndexOutOfRange,
  WrongBasisMode,
  ConfigParse,
};

const char* errc_name(Errc c);

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& msg)
      : std::runtime_error(std::string(errc_name(code)) + ": " + msg), code_(code) {}
  Errc code() const { return code_; }

 private:
  Errc code_;
};

[[noreturn]] inline void fail(Errc code, const std::string& msg) { throw Error(code, msg); }

inline void require(bool cond, Errc code, const std::string& msg) {
  if (!cond) fail(code, msg);
}

/// Numeric knobs shared across modules. Defaults follow the library-wide
/// conventions; every value is overridable from the CLI.
struct Settings {
  double tolerance = 1e-10;           // structural identities
  double prune = 1e-14;               // polynomial coefficient pruning
  std::int64_t dense_entry_cap = std::int64_t(1) << 26;  // complex entries per dense matrix
  int strict_level = 6;               // P_{T,n} positivity checked for n <= this
  std::int64_t strict_dim_cap = 4096; // skip positivity levels with d^n above this
  int matching_cap = 10;              // enumerate P_{1,2}(n) only for n <= this
  long order_enum_cap = 10000;        // admissible linear-extension count guard
  int cf_denominator_bound = 64;      // rational approximation of log-ratios
  int rho_window = 64;                // sup window for the sigma R-norm
  int truncation = 6;                 // default Fock truncation N
  int series_order = 3;               // default conjugate series truncation M
};

std::int64_t pow_int(std::int64_t base, int exp);

/// d^n as a size, guarded against overflow.
std::int64_t level_dim(int d, int n);

}  // namespace taw
