#include "taw/common.hpp"

#include <atomic>

#include "taw/parallel.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace taw {

const char* errc_name(Errc c) {
  switch (c) {
    case Errc::NotPositive: return "NotPositive";
    case Errc::NotInvolutive: return "NotInvolutive";
    case Errc::ModularMismatch: return "ModularMismatch";
    case Errc::BadPairing: return "BadPairing";
    case Errc::NonPositiveEigenvalue: return "NonPositiveEigenvalue";
    case Errc::InvalidNorm: return "InvalidNorm";
    case Errc::BadParams: return "BadParams";
    case Errc::SizeCapExceeded: return "SizeCapExceeded";
    case Errc::NotStrictlyPositive: return "NotStrictlyPositive";
    case Errc::ShapeMismatch: return "ShapeMismatch";
    case Errc::TruncationTooSmall: return "TruncationTooSmall";
    case Errc::CapExceeded: return "CapExceeded";
    case Errc::NotAdmissible: return "NotAdmissible";
    case Errc::NotOdd: return "NotOdd";
    case Errc::NotASingleton: return "NotASingleton";
    case Errc::InconsistentSizes: return "InconsistentSizes";
    case Errc::WrongCase: return "WrongCase";
    case Errc::IndexOutOfRange: return "IndexOutOfRange";
    case Errc::WrongBasisMode: return "WrongBasisMode";
    case Errc::ConfigParse: return "ConfigParse";
  }
  return "UnknownError";
}

std::int64_t pow_int(std::int64_t base, int exp) {
  std::int64_t out = 1;
  for (int i = 0; i < exp; ++i) {
    if (out > (std::int64_t(1) << 56) / (base > 0 ? base : 1))
      fail(Errc::SizeCapExceeded, "integer power overflow");
    out *= base;
  }
  return out;
}

std::int64_t level_dim(int d, int n) { return pow_int(d, n); }

namespace {
std::atomic<int> g_max_threads{0};  // 0 means "use the OpenMP default"
}

int max_threads() {
  int t = g_max_threads.load(std::memory_order_relaxed);
  if (t > 0) return t;
#ifdef _OPENMP
  return omp_get_max_threads();
#else
  return 1;
#endif
}

void set_max_threads(int n) {
  g_max_threads.store(n > 0 ? n : 0, std::memory_order_relaxed);
#ifdef _OPENMP
  if (n > 0) omp_set_num_threads(n);
#endif
}

}  // namespace taw
