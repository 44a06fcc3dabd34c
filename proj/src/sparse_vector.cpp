#include "taxenrich/sparse_vector.hpp"

#include <cmath>

namespace taxenrich {

double SparseVector::get(std::string_view key) const {
  const auto it = weights_.find(key);
  return it == weights_.end() ? 0.0 : it->second;
}

void SparseVector::set(std::string_view key, double value) {
  const auto it = weights_.find(key);
  if (it == weights_.end()) {
    weights_.emplace(std::string(key), value);
  } else {
    it->second = value;
  }
}

void SparseVector::add(std::string_view key, double delta) {
  const auto it = weights_.find(key);
  if (it == weights_.end()) {
    weights_.emplace(std::string(key), delta);
  } else {
    it->second += delta;
  }
}

void SparseVector::add_scaled(const SparseVector& other, double factor) {
  for (const auto& [key, w] : other.weights_) add(key, factor * w);
}

SparseVector SparseVector::scaled(double factor) const {
  SparseVector out = *this;
  for (auto& entry : out.weights_) entry.second *= factor;
  return out;
}

void SparseVector::drop_nonpositive() {
  std::erase_if(weights_, [](const auto& entry) { return !(entry.second > 0.0); });
}

double SparseVector::dot(const SparseVector& other) const {
  double sum = 0.0;
  auto a = weights_.begin();
  auto b = other.weights_.begin();
  while (a != weights_.end() && b != other.weights_.end()) {
    if (a->first < b->first) {
      ++a;
    } else if (b->first < a->first) {
      ++b;
    } else {
      sum += a->second * b->second;
      ++a;
      ++b;
    }
  }
  return sum;
}

double SparseVector::norm() const {
  double sq = 0.0;
  for (const auto& entry : weights_) sq += entry.second * entry.second;
  return std::sqrt(sq);
}

SparseVector SparseVector::normalized() const {
  const double n = norm();
  if (n == 0.0) return {};
  return scaled(1.0 / n);
}

double cosine(const SparseVector& a, const SparseVector& b) {
  const double na = a.norm();
  const double nb = b.norm();
  if (na == 0.0 || nb == 0.0) return 0.0;
  return a.dot(b) / (na * nb);
}

}  // namespace taxenrich
