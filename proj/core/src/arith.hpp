#pragma once

// Cell arithmetic shared by every engine. Both the reference and the wavefront
// engine go through these helpers, so a given build rounds identically in both
// and the bit-identity checks between them are meaningful.

#include <cmath>
#include <string>

#include "pairhmm/error.hpp"
#include "pairhmm/model.hpp"

#if defined(__SSE2__)
#include <immintrin.h>
#endif

namespace pairhmm::detail {

#if defined(__FMA__) || defined(__FMA4__)
inline constexpr bool kFusedMultiplyAdd = true;
#else
inline constexpr bool kFusedMultiplyAdd = false;
#endif

// Flushes subnormal inputs and results to zero for the guard's lifetime.
// Far-from-alignment cells otherwise drift into the subnormal range in single
// precision and slow the kernel by an order of magnitude.
class FlushDenormals {
 public:
#if defined(__SSE2__)
  FlushDenormals() noexcept : saved_(_mm_getcsr()) { _mm_setcsr(saved_ | kFtz | kDaz); }
  ~FlushDenormals() { _mm_setcsr(saved_); }
#else
  FlushDenormals() noexcept = default;
#endif
  FlushDenormals(const FlushDenormals&) = delete;
  FlushDenormals& operator=(const FlushDenormals&) = delete;

 private:
#if defined(__SSE2__)
  static constexpr unsigned kFtz = 0x8000;
  static constexpr unsigned kDaz = 0x0040;
  unsigned saved_;
#endif
};

template <class Real>
inline Real mul_add(Real a, Real b, Real c) noexcept {
  if constexpr (kFusedMultiplyAdd) {
    return std::fma(a, b, c);
  } else {
    return a * b + c;
  }
}

// M(i,j) = lambda * (alpha * M(i-1,j-1) + beta * (I(i-1,j-1) + D(i-1,j-1)))
template <class Real>
inline Real match_cell(Real lambda, Real alpha, Real beta, Real m_diag, Real i_diag, Real d_diag) noexcept {
  return lambda * mul_add(alpha, m_diag, beta * (i_diag + d_diag));
}

// I(i,j) = delta * M(i-1,j) + epsilon * I(i-1,j)
template <class Real>
inline Real insertion_cell(Real delta, Real epsilon, Real m_prev, Real i_prev) noexcept {
  return mul_add(delta, m_prev, epsilon * i_prev);
}

// D(i,j) = zeta * M(i,j-1) + epsilon * D(i,j-1)
template <class Real>
inline Real deletion_cell(Real zeta, Real epsilon, Real m_prev, Real d_prev) noexcept {
  return mul_add(zeta, m_prev, epsilon * d_prev);
}

/// D(0,j) = 2^scale_log2 / n.
template <class Real>
inline Real boundary_deletion(int scale_log2, std::size_t hap_length) noexcept {
  return static_cast<Real>(std::ldexp(1.0, scale_log2)) / static_cast<Real>(hap_length);
}

inline Score finish_score(double accumulator, int scale_log2) {
  if (!std::isfinite(accumulator) || !(accumulator > 0.0)) {
    throw Error(ErrorKind::NumericOverflow,
                "likelihood sum is " + std::string(accumulator == 0.0 ? "zero" : "not finite") +
                    "; retry in double precision or with a different scale exponent");
  }
  static const double kLog10Two = std::log10(2.0);
  return Score{std::log10(accumulator) - scale_log2 * kLog10Two};
}

}  // namespace pairhmm::detail
