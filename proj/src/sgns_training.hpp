#pragma once

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <span>
#include <vector>

#include "patsim/rng.hpp"
#include "patsim/sgns.hpp"
#include "patsim/vocabulary.hpp"

namespace patsim::detail {

/// Draws token indices with probability proportional to corpus_frequency^power.
class UnigramSampler {
 public:
  UnigramSampler(const Vocabulary& vocab, double power) {
    cumulative_.reserve(vocab.size());
    double total = 0.0;
    for (const auto& e : vocab.entries()) {
      total += std::pow(static_cast<double>(e.corpus_frequency), power);
      cumulative_.push_back(total);
    }
    for (auto& c : cumulative_) c /= total;
  }

  std::uint32_t draw(CounterRng& rng) const {
    const double u = rng.uniform01();
    const auto it = std::upper_bound(cumulative_.begin(), cumulative_.end(), u);
    return static_cast<std::uint32_t>(std::min<std::size_t>(it - cumulative_.begin(), cumulative_.size() - 1));
  }

 private:
  std::vector<double> cumulative_;
};

inline float linear_lr(float start, float end, double progress) {
  return static_cast<float>(start - (start - end) * std::clamp(progress, 0.0, 1.0));
}

// Rows are shared between workers in multi-worker mode; relaxed atomic access keeps
// the lock-free updates well-defined without ordering cost.
inline void load_row(const float* src, std::span<float> dst) {
  for (std::size_t i = 0; i < dst.size(); ++i)
    dst[i] = std::atomic_ref<float>(*const_cast<float*>(src + i)).load(std::memory_order_relaxed);
}

inline void add_scaled(float* dst, std::span<const float> delta, float scale) {
  for (std::size_t i = 0; i < delta.size(); ++i) {
    std::atomic_ref<float> ref(dst[i]);
    ref.store(ref.load(std::memory_order_relaxed) + scale * delta[i], std::memory_order_relaxed);
  }
}

/// Per-worker buffers for one SGNS step.
struct SgnsScratch {
  explicit SgnsScratch(std::size_t dim) : dim(dim), center(dim), grad_center(dim) {}

  std::size_t dim;
  std::vector<float> center, grad_center, rows, grad_rows;
  std::vector<std::span<const float>> views;
};

/// One SGD step on the SGNS objective. outputs[0] is the observed word's output row.
/// Returns the pre-update loss.
inline float sgns_step(float* center, std::span<float* const> outputs, float lr, SgnsScratch& s,
                       bool update_outputs = true) {
  const std::size_t d = s.dim;
  s.rows.resize(outputs.size() * d);
  s.grad_rows.resize(outputs.size() * d);
  s.views.clear();
  load_row(center, s.center);
  for (std::size_t r = 0; r < outputs.size(); ++r) {
    load_row(outputs[r], std::span(s.rows).subspan(r * d, d));
    s.views.emplace_back(s.rows.data() + r * d, d);
  }
  const float loss = sgns_gradient<float>(s.center, s.views, s.grad_center, s.grad_rows);
  if (update_outputs)
    for (std::size_t r = 0; r < outputs.size(); ++r)
      add_scaled(outputs[r], std::span<const float>(s.grad_rows).subspan(r * d, d), -lr);
  add_scaled(center, s.grad_center, -lr);
  return loss;
}

/// Seeded initial row: uniform in [-0.5, 0.5) / dim.
inline void init_row(std::span<float> row, std::uint64_t key, std::uint64_t stream) {
  CounterRng rng(key, stream);
  const auto d = static_cast<double>(row.size());
  for (auto& v : row) v = static_cast<float>((rng.uniform01() - 0.5) / d);
}

}  // namespace patsim::detail
