#include "patsim/vector.hpp"

#include <algorithm>
#include <cmath>

#include "patsim/errors.hpp"

namespace patsim {

DenseVector::DenseVector(std::vector<double> values) : values_(std::move(values)) {
  if (values_.empty()) throw ContractError("DenseVector must have positive dimension");
  for (double v : values_)
    if (!std::isfinite(v)) throw ContractError("DenseVector entries must be finite");
}

double cosine(const DenseVector& a, const DenseVector& b) {
  if (a.dim() != b.dim())
    throw ContractError("cosine: dimension mismatch " + std::to_string(a.dim()) + " vs " + std::to_string(b.dim()));
  double dot = 0.0, na = 0.0, nb = 0.0;
  for (std::size_t i = 0; i < a.dim(); ++i) {
    dot += a[i] * b[i];
    na += a[i] * a[i];
    nb += b[i] * b[i];
  }
  if (na == 0.0 || nb == 0.0) throw UndefinedSimilarity("cosine of a zero vector is undefined");
  return std::clamp(dot / (std::sqrt(na) * std::sqrt(nb)), -1.0, 1.0);
}

}  // namespace patsim
