#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <vector>

#include "perlab/common.hpp"

namespace perlab {

// Constants of the Karp-Sipser limit law: y is the smallest fixed point of
// y = exp(-c exp(-c y)) in (0,1) and F is the asymptotic matching fraction
// 1 - (y + exp(-cy) + cy exp(-cy)) / 2.
struct KSConstants {
  double c = 0.0;
  double y = 0.0;
  double F = 0.0;
  double residual = 0.0;
  bool near_boundary = false;  // smallest root within 1e-9 of 1 (c -> 0 regime)
};

namespace detail {

inline double fixed_point_map(double c, double y) { return std::exp(-c * std::exp(-c * y)); }

}  // namespace detail

// Smallest root of exp(-c exp(-cy)) - y in (0,1). The map has multiple
// fixed points for c > e, so we bracket globally: scan 10^4 grid points for
// sign changes, bisect the first bracket to 1e-13.
inline double solve_y(double c) {
  if (!(c > 0.0)) throw DomainError("solve_y requires c > 0");
  auto g = [c](double y) { return detail::fixed_point_map(c, y) - y; };
  constexpr int kGrid = 10'000;
  double lo = 0.0, hi = 1.0;
  double glo = g(lo);
  bool found = false;
  for (int i = 1; i <= kGrid; ++i) {
    double x = static_cast<double>(i) / kGrid;
    double gx = g(x);
    if ((glo > 0.0) != (gx > 0.0) || gx == 0.0) {
      lo = static_cast<double>(i - 1) / kGrid;
      hi = x;
      found = true;
      break;
    }
    glo = gx;
  }
  if (!found) {
    // g(0) > 0 and g(1) < 0 guarantee a root; landing here means the root
    // hugs 1 tighter than the grid. Bisect the last cell.
    lo = 1.0 - 1.0 / kGrid;
    hi = 1.0;
  }
  double flo = g(lo);
  for (int iter = 0; iter < 200 && hi - lo > 1e-13; ++iter) {
    double mid = 0.5 * (lo + hi);
    double fmid = g(mid);
    if ((flo > 0.0) == (fmid > 0.0)) {
      lo = mid;
      flo = fmid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

// Independent route to y: the map is increasing, so iterating from 0
// climbs monotonically to the smallest fixed point.
inline double solve_y_fixed_point(double c, std::size_t max_steps = 1'000'000) {
  if (!(c > 0.0)) throw DomainError("solve_y_fixed_point requires c > 0");
  double y = 0.0;
  for (std::size_t i = 0; i < max_steps; ++i) {
    double next = detail::fixed_point_map(c, y);
    if (std::abs(next - y) < 1e-16) return next;
    y = next;
  }
  return y;
}

inline KSConstants eval_F(double c) {
  KSConstants k;
  k.c = c;
  k.y = solve_y(c);
  double ecy = std::exp(-c * k.y);
  k.F = 1.0 - (k.y + ecy + c * k.y * ecy) / 2.0;
  k.residual = std::abs(k.y - detail::fixed_point_map(c, k.y));
  k.near_boundary = k.y > 1.0 - 1e-9;
  return k;
}

namespace detail {

inline double log_binom_pmf(std::int64_t d, double p, std::int64_t k) {
  if (k < 0 || k > d) return -std::numeric_limits<double>::infinity();
  if (p <= 0.0) return k == 0 ? 0.0 : -std::numeric_limits<double>::infinity();
  if (p >= 1.0) return k == d ? 0.0 : -std::numeric_limits<double>::infinity();
  return std::lgamma(static_cast<double>(d) + 1) - std::lgamma(static_cast<double>(k) + 1) -
         std::lgamma(static_cast<double>(d - k) + 1) + k * std::log(p) +
         (d - k) * std::log1p(-p);
}

inline double log_poisson_pmf(double c, std::int64_t k) {
  if (k < 0) return -std::numeric_limits<double>::infinity();
  if (c <= 0.0) return k == 0 ? 0.0 : -std::numeric_limits<double>::infinity();
  return -c + k * std::log(c) - std::lgamma(static_cast<double>(k) + 1);
}

// Kahan-compensated accumulator.
struct Kahan {
  double sum = 0.0, comp = 0.0;
  void add(double x) {
    double y = x - comp;
    double t = sum + y;
    comp = (t - sum) - y;
    sum = t;
  }
};

}  // namespace detail

// Exact d_TV(Bin(d',p), Po(c)) = (1/2) sum_k |pmf diff|, with the binomial
// support extended by zeros beyond d'. Summation runs until both tails past
// k are below 1e-15.
inline double tv_bin_po(std::int64_t d_prime, double p, double c) {
  if (d_prime < 0) throw DomainError("tv_bin_po requires d' >= 0");
  if (p < 0.0 || p > 1.0) throw DomainError("tv_bin_po requires p in [0,1]");
  if (c < 0.0) throw DomainError("tv_bin_po requires c >= 0");
  detail::Kahan acc;
  double bin_cdf = 0.0, po_cdf = 0.0;
  for (std::int64_t k = 0;; ++k) {
    double bp = (k <= d_prime) ? std::exp(detail::log_binom_pmf(d_prime, p, k)) : 0.0;
    double pp = std::exp(detail::log_poisson_pmf(c, k));
    acc.add(std::abs(bp - pp));
    bin_cdf += bp;
    po_cdf += pp;
    bool bin_done = (k >= d_prime) || (1.0 - bin_cdf < 1e-15);
    bool po_done = (1.0 - po_cdf < 1e-15 || pp < 1e-18) && k > static_cast<std::int64_t>(c);
    if (bin_done && po_done) break;
    if (k > d_prime + 10'000'000) break;  // unreachable in practice
  }
  double tv = 0.5 * acc.sum;
  return std::clamp(tv, 0.0, 1.0);
}

struct ChernoffReport {
  double binom_tail = 0.0;
  double po_tail = 0.0;
  double bound = 0.0;
  bool holds = false;
  bool applicable = true;  // false when t < 10c (hypothesis violated)
};

// Exact upper tails P(Bin(d',p) >= t) and P(Po(c) >= t) against e^{-t/3}.
inline ChernoffReport chernoff_check(std::int64_t d_prime, double p, double c, double t) {
  if (d_prime < 0) throw DomainError("chernoff_check requires d' >= 0");
  ChernoffReport rep;
  rep.bound = std::exp(-t / 3.0);
  rep.applicable = t >= 10.0 * c;
  std::int64_t from = std::max<std::int64_t>(static_cast<std::int64_t>(std::ceil(t)), 0);
  // P(X >= t) with integer X means summing k >= ceil(t).
  detail::Kahan bin_acc, po_acc;
  for (std::int64_t k = from; k <= d_prime; ++k)
    bin_acc.add(std::exp(detail::log_binom_pmf(d_prime, p, k)));
  rep.binom_tail = std::clamp(bin_acc.sum, 0.0, 1.0);
  double po_cdf = 0.0;
  for (std::int64_t k = 0; k < from; ++k) po_cdf += std::exp(detail::log_poisson_pmf(c, k));
  // Sum the Poisson tail forward until negligible.
  for (std::int64_t k = from;; ++k) {
    double pp = std::exp(detail::log_poisson_pmf(c, k));
    po_acc.add(pp);
    po_cdf += pp;
    if ((1.0 - po_cdf < 1e-18 || pp < 1e-22) && k > static_cast<std::int64_t>(c) + 10) break;
  }
  rep.po_tail = std::clamp(po_acc.sum, 0.0, 1.0);
  rep.holds = rep.applicable && rep.binom_tail <= rep.bound && rep.po_tail <= rep.bound;
  return rep;
}

}  // namespace perlab
