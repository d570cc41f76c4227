#pragma once

#include <cstdint>
#include <span>

namespace patsim {

/// Fine-tuning settings handed to the external sentence-encoder trainer. Distance is
/// euclidean and pooling is mean; neither is configurable.
struct TripletLossConfig {
  double margin = 5.0;
  std::uint32_t batch_size = 8;
  std::uint32_t epochs = 1;
  std::uint32_t validation_every = 1000;

  void validate() const;
};

/// max(|a-p| - |a-n| + margin, 0) with euclidean distance.
double triplet_loss(std::span<const double> anchor, std::span<const double> positive,
                    std::span<const double> negative, double margin);

}  // namespace patsim
