#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <numeric>
#include <vector>

#include "optomech/gaussian.hpp"

namespace optomech {

template <typename Scalar>
struct NelderMeadOptions {
  Scalar tolerance = Scalar(1e-10);  // on the spread of simplex values
  int max_evaluations = 2000;
};

template <typename Scalar>
struct NelderMeadResult {
  DenseVector<Scalar> x;
  Scalar value{};
  int evaluations = 0;
  bool converged = false;
};

/// Minimizes f with the Nelder–Mead simplex method using the
/// dimension-adaptive coefficients of Gao and Han (2012). The initial simplex
/// is x0 plus one vertex per coordinate offset by steps(i).
template <typename Scalar, typename Fn>
NelderMeadResult<Scalar> nelder_mead(Fn&& f, const DenseVector<Scalar>& x0,
                                     const DenseVector<Scalar>& steps,
                                     const NelderMeadOptions<Scalar>& options = {}) {
  const Index n = x0.size();
  const Scalar dim = Scalar(n);
  const Scalar reflect = Scalar(1);
  const Scalar expand = Scalar(1) + Scalar(2) / dim;
  const Scalar contract = Scalar(0.75) - Scalar(1) / (Scalar(2) * dim);
  const Scalar shrink = Scalar(1) - Scalar(1) / dim;

  std::vector<DenseVector<Scalar>> simplex(static_cast<std::size_t>(n + 1), x0);
  std::vector<Scalar> values(static_cast<std::size_t>(n + 1));
  int evals = 0;
  auto eval = [&](const DenseVector<Scalar>& x) {
    ++evals;
    return static_cast<Scalar>(f(x));
  };
  for (Index i = 0; i < n; ++i) simplex[static_cast<std::size_t>(i + 1)](i) += steps(i);
  for (std::size_t i = 0; i < simplex.size(); ++i) values[i] = eval(simplex[i]);

  std::vector<std::size_t> order(simplex.size());
  auto sort_simplex = [&] {
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
    std::vector<DenseVector<Scalar>> s2;
    std::vector<Scalar> v2;
    s2.reserve(order.size());
    v2.reserve(order.size());
    for (auto k : order) {
      s2.push_back(std::move(simplex[k]));
      v2.push_back(values[k]);
    }
    simplex = std::move(s2);
    values = std::move(v2);
  };

  bool converged = false;
  sort_simplex();
  while (evals < options.max_evaluations) {
    if (values.back() - values.front() <= options.tolerance) {
      converged = true;
      break;
    }
    const std::size_t worst = simplex.size() - 1;
    DenseVector<Scalar> centroid = DenseVector<Scalar>::Zero(n);
    for (std::size_t i = 0; i < worst; ++i) centroid += simplex[i];
    centroid /= dim;

    const DenseVector<Scalar> xr = centroid + reflect * (centroid - simplex[worst]);
    const Scalar fr = eval(xr);
    bool do_shrink = false;
    if (fr < values.front()) {
      const DenseVector<Scalar> xe = centroid + expand * (xr - centroid);
      const Scalar fe = eval(xe);
      if (fe < fr) {
        simplex[worst] = xe;
        values[worst] = fe;
      } else {
        simplex[worst] = xr;
        values[worst] = fr;
      }
    } else if (fr < values[worst - 1]) {
      simplex[worst] = xr;
      values[worst] = fr;
    } else if (fr < values[worst]) {
      const DenseVector<Scalar> xc = centroid + contract * (xr - centroid);
      const Scalar fc = eval(xc);
      if (fc <= fr) {
        simplex[worst] = xc;
        values[worst] = fc;
      } else {
        do_shrink = true;
      }
    } else {
      const DenseVector<Scalar> xc = centroid + contract * (simplex[worst] - centroid);
      const Scalar fc = eval(xc);
      if (fc < values[worst]) {
        simplex[worst] = xc;
        values[worst] = fc;
      } else {
        do_shrink = true;
      }
    }
    if (do_shrink) {
      for (std::size_t i = 1; i < simplex.size(); ++i) {
        simplex[i] = simplex.front() + shrink * (simplex[i] - simplex.front());
        values[i] = eval(simplex[i]);
      }
    }
    sort_simplex();
  }
  return {simplex.front(), values.front(), evals, converged};
}

}  // namespace optomech
