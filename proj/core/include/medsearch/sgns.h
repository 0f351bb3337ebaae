#pragma once

#include <cmath>
#include <cstddef>
#include <span>

namespace medsearch::sgns {

template <typename T>
T dot(std::span<const T> a, std::span<const T> b) {
  T s{};
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

template <typename T>
T log_sigmoid(T x) {
  // log(1 / (1 + e^-x)) without overflow for large |x|
  return x >= T{0} ? -std::log1p(std::exp(-x)) : x - std::log1p(std::exp(x));
}

template <typename T>
T sigmoid(T x) {
  if (x >= T{0}) return T{1} / (T{1} + std::exp(-x));
  const T e = std::exp(x);
  return e / (T{1} + e);
}

/// Negative-sampling loss for one (center, context, negatives) step:
///   -log s(c.o) - sum_k log s(-c.n_k)
/// Gradients are written into the out-spans (same shapes as the inputs);
/// grad_negatives is laid out as negatives.size() rows of dim.
template <typename T>
T pair_loss_and_gradient(std::span<const T> center, std::span<const T> context,
                         std::span<const std::span<const T>> negatives, std::span<T> grad_center,
                         std::span<T> grad_context, std::span<T> grad_negatives) {
  const std::size_t dim = center.size();
  for (auto& g : grad_center) g = T{0};

  const T pos = dot(center, context);
  T loss = -log_sigmoid(pos);
  // d/dx of -log s(x) is s(x) - 1
  const T g_pos = sigmoid(pos) - T{1};
  for (std::size_t i = 0; i < dim; ++i) {
    grad_center[i] += g_pos * context[i];
    grad_context[i] = g_pos * center[i];
  }

  for (std::size_t k = 0; k < negatives.size(); ++k) {
    const auto neg = negatives[k];
    const T score = dot(center, neg);
    loss -= log_sigmoid(-score);
    // d/dx of -log s(-x) is s(x)
    const T g_neg = sigmoid(score);
    auto grad_neg = grad_negatives.subspan(k * dim, dim);
    for (std::size_t i = 0; i < dim; ++i) {
      grad_center[i] += g_neg * neg[i];
      grad_neg[i] = g_neg * center[i];
    }
  }
  return loss;
}

}  // namespace medsearch::sgns
