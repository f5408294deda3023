#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "petlab/errors.hpp"
#include "petlab/measure.hpp"
#include "petlab/parallel.hpp"

namespace petlab {

// Real function on Z_n, entry r holding the value at residue r.
template <class Scalar = double>
using CyclicSignal = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

namespace detail {

// sum_x g(x) for g = f * f(.+h_1) * ... after the remaining differencing
// levels, accumulated into `acc` as sum over h_{level..d-1} of (sum_x g)^2.
template <class Scalar>
Scalar box_recurse(const CyclicSignal<Scalar>& g, int levels, std::vector<CyclicSignal<Scalar>>& scratch) {
  const Eigen::Index n = g.size();
  if (levels == 0) {
    const Scalar s = g.sum();
    return s * s;
  }
  CyclicSignal<Scalar>& next = scratch[static_cast<std::size_t>(levels - 1)];
  Scalar acc(0);
  for (Eigen::Index h = 0; h < n; ++h) {
    next.head(n - h) = g.head(n - h).cwiseProduct(g.tail(n - h));
    if (h > 0) next.tail(h) = g.tail(h).cwiseProduct(g.head(h));
    acc += box_recurse(next, levels - 1, scratch);
  }
  return acc;
}

template <class Derived>
void require_finite(const Eigen::MatrixBase<Derived>& f) {
  if (!f.allFinite()) throw InvalidArgument("gowers: signal has non-finite values");
}

}  // namespace detail

// E_{x,h_1..h_d} prod_{w in {0,1}^d} f(x + w.h), the 2^d-th power of the
// U^d norm. For real f this equals E_{h_1..h_{d-1}} (E_x D_h f(x))^2 with
// D_h f the multiplicative derivative, which is how it is evaluated:
// O(n^d) work, the h_1 level split into blocks reduced in fixed order.
template <class Derived>
typename Derived::Scalar gowers_box_average(const Eigen::MatrixBase<Derived>& f, int d) {
  using Scalar = typename Derived::Scalar;
  if (d < 1) throw InvalidArgument("gowers: d must be >= 1");
  if (f.size() < 1) throw InvalidArgument("gowers: empty signal");
  detail::require_finite(f);
  const CyclicSignal<Scalar> g = f;
  const Eigen::Index n = g.size();
  const Scalar norm = std::pow(static_cast<Scalar>(n), static_cast<Scalar>(d + 1));
  if (d == 1) {
    const Scalar s = g.sum();
    return s * s / norm;
  }
  std::vector<Scalar> per_h(static_cast<std::size_t>(n));
  parallel::for_blocks(static_cast<std::size_t>(n), [&](std::size_t h) {
    std::vector<CyclicSignal<Scalar>> scratch(static_cast<std::size_t>(d - 2), CyclicSignal<Scalar>(n));
    const auto hh = static_cast<Eigen::Index>(h);
    CyclicSignal<Scalar> first(n);
    first.head(n - hh) = g.head(n - hh).cwiseProduct(g.tail(n - hh));
    if (hh > 0) first.tail(hh) = g.tail(hh).cwiseProduct(g.head(hh));
    per_h[h] = detail::box_recurse(first, d - 2, scratch);
  });
  return parallel::pairwise_sum(std::span<const Scalar>(per_h)) / norm;
}

// The U^d norm: 2^d-th root of gowers_box_average (clamped at 0 against
// rounding).
template <class Derived>
typename Derived::Scalar gowers_norm(const Eigen::MatrixBase<Derived>& f, int d) {
  using Scalar = typename Derived::Scalar;
  const Scalar box = gowers_box_average(f, d);
  if (box <= Scalar(0)) return Scalar(0);
  return std::pow(box, Scalar(1) / static_cast<Scalar>(1u << d));
}

// U^2 norm via Fourier coefficients: (sum_xi |f^(xi)|^4)^(1/4) with
// f^(xi) = E_x f(x) e(-x xi/n).
double gowers_u2_fft(const CyclicSignal<double>& f);

// Places a(n), n in [1, M], at residue n of Z_{(2d+1)M}. Throws
// InvalidArgument if a is non-zero beyond M.
CyclicSignal<double> embed_supported(const Measure& a, std::int64_t M, int d);
CyclicSignal<double> embed_supported(const Measure& a, int d);

// Lambda_{W,b;N} - 1_{[N]} on Z_{(2d+1)N} (values at residues 1..N).
CyclicSignal<double> lambda_deviation_signal(std::int64_t N, std::uint64_t W, std::uint64_t b, int d);

struct DeviationNormOptions {
  // Largest number of inner-loop operations a direct evaluation may take.
  double max_operations = 2e10;
};

// ||Lambda_{W,b;N} - 1_{[N]}||_{U^d(Z_{(2d+1)N})}. d = 2 uses the FFT path;
// larger d runs the direct O(n^d) sum and raises ResourceError with the
// estimated operation count when that exceeds the budget.
double lambda_deviation_norm(std::int64_t N, std::uint64_t W, std::uint64_t b, int d,
                             const DeviationNormOptions& options = {});
double lambda_deviation_norm(const Params& params, std::uint64_t b, int d,
                             const DeviationNormOptions& options = {});

// Estimated inner-loop operations of gowers_box_average on Z_n.
double gowers_direct_cost(std::int64_t n, int d);

}  // namespace petlab
