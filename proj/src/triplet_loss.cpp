#include "patsim/triplet_loss.hpp"

#include <algorithm>
#include <cmath>

#include "patsim/errors.hpp"

namespace patsim {

void TripletLossConfig::validate() const {
  if (!(margin > 0.0) || !std::isfinite(margin)) throw ParameterError("triplet margin must be positive");
  if (batch_size == 0 || epochs == 0 || validation_every == 0)
    throw ParameterError("triplet batch size, epochs and validation interval must be positive");
}

namespace {

double euclidean(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += (a[i] - b[i]) * (a[i] - b[i]);
  return std::sqrt(s);
}

}  // namespace

double triplet_loss(std::span<const double> anchor, std::span<const double> positive,
                    std::span<const double> negative, double margin) {
  if (anchor.size() != positive.size() || anchor.size() != negative.size())
    throw ContractError("triplet_loss: dimension mismatch");
  return std::max(euclidean(anchor, positive) - euclidean(anchor, negative) + margin, 0.0);
}

}  // namespace patsim
