#pragma once

#include <cstddef>
#include <functional>
#include <map>
#include <string>
#include <string_view>

namespace taxenrich {

/// Sparse real vector keyed by string dimensions. Iteration is in key order,
/// so every reduction over it is deterministic.
class SparseVector {
 public:
  using Map = std::map<std::string, double, std::less<>>;
  using const_iterator = Map::const_iterator;

  SparseVector() = default;
  explicit SparseVector(Map weights) : weights_(std::move(weights)) {}

  double get(std::string_view key) const;
  void set(std::string_view key, double value);
  void add(std::string_view key, double delta);

  /// this += factor * other
  void add_scaled(const SparseVector& other, double factor);
  SparseVector scaled(double factor) const;

  /// Removes entries with weight <= 0.
  void drop_nonpositive();

  double dot(const SparseVector& other) const;
  double norm() const;
  /// Unit L2 norm; the empty vector stays empty.
  SparseVector normalized() const;

  bool empty() const noexcept { return weights_.empty(); }
  std::size_t size() const noexcept { return weights_.size(); }
  const_iterator begin() const noexcept { return weights_.begin(); }
  const_iterator end() const noexcept { return weights_.end(); }
  const Map& weights() const noexcept { return weights_; }

  friend bool operator==(const SparseVector&, const SparseVector&) = default;

 private:
  Map weights_;
};

/// Concept-space weights of a category (tf-idf concept weights) or an entity
/// (typicality scores). All stored weights are > 0.
using ConceptVector = SparseVector;
/// tf-idf weights over word terms.
using TermVector = SparseVector;

double cosine(const SparseVector& a, const SparseVector& b);

}  // namespace taxenrich
