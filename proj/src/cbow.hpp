/*
 * Copyright 2026 Segue developers
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

// CBOW negative-sampling step for one (context window, center) pair:
//
//   h = mean of the context input vectors
//   L = -log sigmoid(u_center . h) - sum_n log sigmoid(-u_n . h)
//
// The SGD update is the exact simultaneous gradient step of L, including the
// 1/m factor on the context rows; the same template backs the float training
// path and the double-precision gradient checks.

#pragma once

#include <cmath>
#include <cstdint>
#include <map>
#include <vector>

namespace segue {

template <typename T>
inline T sigmoid(T x) {
  return T(1) / (T(1) + std::exp(-x));
}

namespace cbow_detail {

template <typename T>
void mean_context(const T* input, std::uint32_t dim, const std::vector<std::uint32_t>& context,
                  std::vector<T>& h) {
  h.assign(dim, T(0));
  for (std::uint32_t row : context) {
    const T* v = input + static_cast<std::size_t>(row) * dim;
    for (std::uint32_t d = 0; d < dim; ++d) h[d] += v[d];
  }
  const T inv_m = T(1) / static_cast<T>(context.size());
  for (std::uint32_t d = 0; d < dim; ++d) h[d] *= inv_m;
}

template <typename T>
T dot(const T* a, const T* b, std::uint32_t dim) {
  T s = 0;
  for (std::uint32_t d = 0; d < dim; ++d) s += a[d] * b[d];
  return s;
}

}  // namespace cbow_detail

/// Loss only, no update.
template <typename T>
T cbow_pair_loss(const T* input, const T* output, std::uint32_t dim,
                 const std::vector<std::uint32_t>& context, std::uint32_t center,
                 const std::vector<std::uint32_t>& negatives, std::vector<T>& h_buf) {
  cbow_detail::mean_context(input, dim, context, h_buf);
  const T* u_c = output + static_cast<std::size_t>(center) * dim;
  T loss = -std::log(sigmoid(cbow_detail::dot(u_c, h_buf.data(), dim)));
  for (std::uint32_t n : negatives) {
    const T* u_n = output + static_cast<std::size_t>(n) * dim;
    loss -= std::log(sigmoid(-cbow_detail::dot(u_n, h_buf.data(), dim)));
  }
  return loss;
}

/// One SGD step; returns the loss at the pre-update parameters.
template <typename T>
T cbow_pair_train(T* input, T* output, std::uint32_t dim, const std::vector<std::uint32_t>& context,
                  std::uint32_t center, const std::vector<std::uint32_t>& negatives, T lr,
                  std::vector<T>& h_buf, std::vector<T>& gh_buf) {
  cbow_detail::mean_context(input, dim, context, h_buf);
  gh_buf.assign(dim, T(0));
  T loss = 0;

  auto sample = [&](std::uint32_t row, T target) {
    T* u = output + static_cast<std::size_t>(row) * dim;
    T s = sigmoid(cbow_detail::dot(u, h_buf.data(), dim));
    loss -= target > T(0.5) ? std::log(s) : std::log(T(1) - s);
    T g = s - target;  // dL/d(u.h)
    for (std::uint32_t d = 0; d < dim; ++d) {
      gh_buf[d] += g * u[d];
      u[d] -= lr * g * h_buf[d];
    }
  };
  sample(center, T(1));
  for (std::uint32_t n : negatives) sample(n, T(0));

  const T inv_m = T(1) / static_cast<T>(context.size());
  for (std::uint32_t row : context) {
    T* v = input + static_cast<std::size_t>(row) * dim;
    for (std::uint32_t d = 0; d < dim; ++d) v[d] -= lr * inv_m * gh_buf[d];
  }
  return loss;
}

/// Analytic gradients accumulated per row (duplicate rows accumulate), for
/// finite-difference verification.
template <typename T>
void cbow_pair_gradients(const T* input, const T* output, std::uint32_t dim,
                         const std::vector<std::uint32_t>& context, std::uint32_t center,
                         const std::vector<std::uint32_t>& negatives,
                         std::map<std::uint32_t, std::vector<T>>& grad_input,
                         std::map<std::uint32_t, std::vector<T>>& grad_output) {
  std::vector<T> h;
  cbow_detail::mean_context(input, dim, context, h);
  std::vector<T> gh(dim, T(0));
  grad_input.clear();
  grad_output.clear();

  auto sample = [&](std::uint32_t row, T target) {
    const T* u = output + static_cast<std::size_t>(row) * dim;
    T g = sigmoid(cbow_detail::dot(u, h.data(), dim)) - target;
    auto& gu = grad_output[row];
    if (gu.empty()) gu.assign(dim, T(0));
    for (std::uint32_t d = 0; d < dim; ++d) {
      gu[d] += g * h[d];
      gh[d] += g * u[d];
    }
  };
  sample(center, T(1));
  for (std::uint32_t n : negatives) sample(n, T(0));

  const T inv_m = T(1) / static_cast<T>(context.size());
  for (std::uint32_t row : context) {
    auto& gv = grad_input[row];
    if (gv.empty()) gv.assign(dim, T(0));
    for (std::uint32_t d = 0; d < dim; ++d) gv[d] += inv_m * gh[d];
  }
}

}  // namespace segue
