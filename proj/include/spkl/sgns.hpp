#pragma once

// Skip-gram negative-sampling objective for one (target, context) pair:
//
//   L = -ln s(u.v) - sum_i ln s(-u.n_i),   s(x) = 1 / (1 + e^-x)
//
// u is the target's input vector, v the context's output vector and n_i the
// output vectors of the sampled negatives (one per row).

#include <cmath>

#include <Eigen/Dense>

#include "spkl/error.hpp"

namespace spkl {

template <typename Scalar>
Scalar sigmoid(Scalar x) {
  if (x >= Scalar(0)) return Scalar(1) / (Scalar(1) + std::exp(-x));
  const Scalar e = std::exp(x);
  return e / (Scalar(1) + e);
}

/// -ln s(x), evaluated without overflow for large |x|.
template <typename Scalar>
Scalar neg_log_sigmoid(Scalar x) {
  if (x >= Scalar(0)) return std::log1p(std::exp(-x));
  return -x + std::log1p(std::exp(x));
}

template <typename Scalar>
using RowMatrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

namespace detail {

template <typename U, typename V, typename N>
void check_sgns_shapes(const Eigen::MatrixBase<U>& u, const Eigen::MatrixBase<V>& v,
                       const Eigen::MatrixBase<N>& negatives) {
  if (u.size() != v.size() || (negatives.rows() > 0 && negatives.cols() != u.size())) {
    throw InvariantError("sgns: dimension mismatch");
  }
}

}  // namespace detail

template <typename U, typename V, typename N>
typename U::Scalar sgns_loss(const Eigen::MatrixBase<U>& u, const Eigen::MatrixBase<V>& v,
                             const Eigen::MatrixBase<N>& negatives) {
  using Scalar = typename U::Scalar;
  detail::check_sgns_shapes(u, v, negatives);
  const auto uc = u.reshaped();
  Scalar loss = neg_log_sigmoid<Scalar>(uc.dot(v.reshaped()));
  for (Eigen::Index i = 0; i < negatives.rows(); ++i) {
    loss += neg_log_sigmoid<Scalar>(-negatives.row(i).dot(uc.transpose()));
  }
  return loss;
}

template <typename Scalar>
struct SgnsGradient {
  Eigen::VectorX<Scalar> target;    ///< dL/du
  Eigen::VectorX<Scalar> context;   ///< dL/dv
  RowMatrix<Scalar> negatives;      ///< row i = dL/dn_i
};

/// dL/du = (s(u.v) - 1) v + sum_i s(u.n_i) n_i
/// dL/dv = (s(u.v) - 1) u
/// dL/dn_i = s(u.n_i) u
template <typename U, typename V, typename N>
SgnsGradient<typename U::Scalar> sgns_grad(const Eigen::MatrixBase<U>& u, const Eigen::MatrixBase<V>& v,
                                           const Eigen::MatrixBase<N>& negatives) {
  using Scalar = typename U::Scalar;
  detail::check_sgns_shapes(u, v, negatives);
  const Eigen::VectorX<Scalar> uc = u.reshaped();
  const Eigen::VectorX<Scalar> vc = v.reshaped();

  SgnsGradient<Scalar> g;
  const Scalar pos = sigmoid<Scalar>(uc.dot(vc)) - Scalar(1);
  g.target = pos * vc;
  g.context = pos * uc;
  g.negatives.resize(negatives.rows(), uc.size());
  for (Eigen::Index i = 0; i < negatives.rows(); ++i) {
    const Scalar s = sigmoid<Scalar>(negatives.row(i).dot(uc.transpose()));
    g.target += s * negatives.row(i).transpose();
    g.negatives.row(i) = s * uc.transpose();
  }
  return g;
}

}  // namespace spkl
