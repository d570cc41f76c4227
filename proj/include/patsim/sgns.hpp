#pragma once

#include <cmath>
#include <concepts>
#include <cstddef>
#include <span>

#include "patsim/errors.hpp"

namespace patsim {

template <std::floating_point T>
T sigmoid(T x) {
  if (x >= T(0)) return T(1) / (T(1) + std::exp(-x));
  const T e = std::exp(x);
  return e / (T(1) + e);
}

/// log(sigmoid(x)) without overflow for large |x|.
template <std::floating_point T>
T log_sigmoid(T x) {
  return x >= T(0) ? -std::log1p(std::exp(-x)) : x - std::log1p(std::exp(x));
}

template <std::floating_point T>
T dot(std::span<const T> a, std::span<const T> b) {
  T s = 0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

/// Skip-gram negative-sampling loss for one sample.
/// outputs[0] is the output row of the observed word, outputs[1..k] the sampled negatives:
///   L = -log s(u_0 . v) - sum_i log s(-u_i . v)
/// PV-DBOW uses the same objective with the document vector as `center`.
template <std::floating_point T>
T sgns_loss(std::span<const T> center, std::span<const std::span<const T>> outputs) {
  T loss = 0;
  for (std::size_t r = 0; r < outputs.size(); ++r) {
    const T score = dot(center, outputs[r]);
    loss -= r == 0 ? log_sigmoid(score) : log_sigmoid(-score);
  }
  return loss;
}

/// Analytic gradient of sgns_loss. grad_outputs holds outputs.size() rows of center.size().
/// Both gradient buffers are overwritten. Returns the loss.
///   dL/dv   = sum_r (s(u_r . v) - y_r) u_r
///   dL/du_r = (s(u_r . v) - y_r) v          with y_0 = 1, y_{r>0} = 0
template <std::floating_point T>
T sgns_gradient(std::span<const T> center, std::span<const std::span<const T>> outputs, std::span<T> grad_center,
                std::span<T> grad_outputs) {
  const std::size_t d = center.size();
  if (grad_center.size() != d || grad_outputs.size() != outputs.size() * d)
    throw ContractError("sgns_gradient: gradient buffer size mismatch");
  for (auto& g : grad_center) g = 0;
  T loss = 0;
  for (std::size_t r = 0; r < outputs.size(); ++r) {
    const auto& u = outputs[r];
    if (u.size() != d) throw ContractError("sgns_gradient: row dimension mismatch");
    const T score = dot(center, u);
    const T label = r == 0 ? T(1) : T(0);
    loss -= r == 0 ? log_sigmoid(score) : log_sigmoid(-score);
    const T g = sigmoid(score) - label;
    T* gu = grad_outputs.data() + r * d;
    for (std::size_t i = 0; i < d; ++i) {
      grad_center[i] += g * u[i];
      gu[i] = g * center[i];
    }
  }
  return loss;
}

}  // namespace patsim
