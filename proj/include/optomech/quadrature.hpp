#pragma once

// Globally adaptive Gauss–Kronrod (10/21-point) quadrature for matrix-valued
// integrands on a finite interval.

#include <Eigen/Dense>

#include <algorithm>
#include <array>
#include <cmath>
#include <queue>
#include <span>
#include <vector>

#include "optomech/gaussian.hpp"

namespace optomech {

struct QuadratureOptions {
  double abs_tolerance = 1e-12;  // on the largest entry error of the whole integral
  double rel_tolerance = 0.0;
  int max_intervals = 20000;
};

struct QuadratureReport {
  int intervals = 0;
  long evaluations = 0;
  double error_estimate = 0.0;
  bool converged = false;
};

namespace detail {

// QUADPACK qk21 abscissae (descending, last is the centre) and weights.
inline constexpr std::array<double, 11> kronrod21_nodes = {
    0.995657163025808080735527280689003, 0.973906528517171720077964012084452,
    0.930157491355708226001207180059508, 0.865063366688984510732096688423493,
    0.780817726586416897063717578345042, 0.679409568299024406234327365114874,
    0.562757134668604683339000099272694, 0.433395394129247190799265943165784,
    0.294392862701460198131126603103866, 0.148874338981631210884826001129720,
    0.0};
inline constexpr std::array<double, 11> kronrod21_weights = {
    0.011694638867371874278064396062192, 0.032558162307964727478818972459390,
    0.054755896574351996031381300244580, 0.075039674810919952767043140916190,
    0.093125454583697605535065465083366, 0.109387158802297641899210590325805,
    0.123491976262065851077600525452584, 0.134709217311473325928054001771707,
    0.142775938577060080797094273138717, 0.147739104901338491374841515972068,
    0.149445554002916905664936468389821};
// Gauss 10-point weights, matching kronrod21_nodes[1], [3], ..., [9].
inline constexpr std::array<double, 5> gauss10_weights = {
    0.066671344308688137593568809893332, 0.149451349150580593145776339657697,
    0.219086362515982043995534934228163, 0.269266719309996355091226921569469,
    0.295524224714752870173892994651338};

template <typename Matrix>
struct QuadratureSegment {
  double lo = 0.0;
  double hi = 0.0;
  Matrix kronrod;
  double error = 0.0;

  bool operator<(const QuadratureSegment& other) const { return error < other.error; }
};

template <typename Matrix, typename Fn>
QuadratureSegment<Matrix> gauss_kronrod_21(Fn& f, double lo, double hi) {
  const double centre = 0.5 * (lo + hi);
  const double half = 0.5 * (hi - lo);
  Matrix fc = f(centre);
  Matrix kronrod = kronrod21_weights[10] * fc;
  Matrix gauss = Matrix::Zero(fc.rows(), fc.cols());
  for (std::size_t j = 0; j < 10; ++j) {
    const double dx = half * kronrod21_nodes[j];
    Matrix sum = f(centre - dx) + f(centre + dx);
    kronrod += kronrod21_weights[j] * sum;
    if (j % 2 == 1) gauss += gauss10_weights[j / 2] * sum;
  }
  QuadratureSegment<Matrix> seg;
  seg.lo = lo;
  seg.hi = hi;
  seg.kronrod = half * kronrod;
  seg.error = (half * (kronrod - gauss)).cwiseAbs().maxCoeff();
  return seg;
}

}  // namespace detail

/// ∫ f over [breakpoints.front(), breakpoints.back()], starting from the
/// subintervals between consecutive breakpoints and bisecting the worst one
/// until the summed error estimate meets the tolerance.
template <typename Matrix, typename Fn>
Matrix integrate_adaptive(Fn&& f, std::span<const double> breakpoints,
                          const QuadratureOptions& options = {},
                          QuadratureReport* report = nullptr) {
  if (breakpoints.size() < 2) throw DomainError("quadrature needs at least two breakpoints");
  std::priority_queue<detail::QuadratureSegment<Matrix>> queue;
  std::vector<detail::QuadratureSegment<Matrix>> frozen;
  double total_error = 0.0;
  long evaluations = 0;
  for (std::size_t k = 0; k + 1 < breakpoints.size(); ++k) {
    if (!(breakpoints[k + 1] > breakpoints[k])) continue;
    auto seg = detail::gauss_kronrod_21<Matrix>(f, breakpoints[k], breakpoints[k + 1]);
    evaluations += 21;
    total_error += seg.error;
    queue.push(std::move(seg));
  }
  if (queue.empty()) throw DomainError("quadrature interval is empty");

  auto sum_all = [&] {
    Matrix total = queue.top().kronrod * 0.0;
    auto copy = queue;
    while (!copy.empty()) {
      total += copy.top().kronrod;
      copy.pop();
    }
    for (const auto& seg : frozen) total += seg.kronrod;
    return total;
  };

  Matrix total = sum_all();
  auto tolerance = [&] {
    return std::max(options.abs_tolerance, options.rel_tolerance * total.cwiseAbs().maxCoeff());
  };

  while (total_error > tolerance() &&
         static_cast<int>(queue.size() + frozen.size()) < options.max_intervals && !queue.empty()) {
    auto worst = queue.top();
    queue.pop();
    const double mid = 0.5 * (worst.lo + worst.hi);
    // Stop refining once the interval is at the resolution of the abscissa.
    if (!(mid > worst.lo && mid < worst.hi) ||
        (worst.hi - worst.lo) < 1e-13 * std::max(std::abs(worst.lo), std::abs(worst.hi))) {
      frozen.push_back(std::move(worst));
      continue;
    }
    auto left = detail::gauss_kronrod_21<Matrix>(f, worst.lo, mid);
    auto right = detail::gauss_kronrod_21<Matrix>(f, mid, worst.hi);
    evaluations += 42;
    total_error += left.error + right.error - worst.error;
    total += left.kronrod + right.kronrod - worst.kronrod;
    queue.push(std::move(left));
    queue.push(std::move(right));
  }

  total = sum_all();
  // Recompute the error sum to drop accumulated cancellation.
  total_error = 0.0;
  {
    auto copy = queue;
    while (!copy.empty()) {
      total_error += copy.top().error;
      copy.pop();
    }
    for (const auto& seg : frozen) total_error += seg.error;
  }
  if (report) {
    report->intervals = static_cast<int>(queue.size() + frozen.size());
    report->evaluations = evaluations;
    report->error_estimate = total_error;
    report->converged = total_error <= tolerance();
  }
  return total;
}

}  // namespace optomech
