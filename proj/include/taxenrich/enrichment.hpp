#pragma once

#include <cstddef>
#include <functional>
#include <iosfwd>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "taxenrich/concept_kb.hpp"
#include "taxenrich/entity_typing.hpp"
#include "taxenrich/sparse_vector.hpp"
#include "taxenrich/taxonomy.hpp"

namespace taxenrich {

/// Σ_{c_t} Σ_{c_e} sim(c_t, c_e)·w(c_t)·w(c_e). Exact-match similarity
/// short-circuits to the sparse dot product.
double relevance(const ConceptVector& category, const ConceptVector& entity,
                 const ConceptSimilarity& sim, const ConceptKB& kb);

/// exp((x_i - max x) / temperature), normalized to sum 1.
std::vector<double> softmax(std::span<const double> scores, double temperature = 1.0);

struct RankedCategory {
  CategoryId category = 0;
  double probability = 0.0;

  friend bool operator==(const RankedCategory&, const RankedCategory&) = default;
};

/// Top-k categories of one entity, ordered by descending relevance with
/// ascending CategoryId breaking ties.
struct EntityAttachment {
  std::string entity;
  std::vector<RankedCategory> ranked;

  friend bool operator==(const EntityAttachment&, const EntityAttachment&) = default;
};

struct AttachedEntity {
  std::string entity;
  double probability = 0.0;

  friend bool operator==(const AttachedEntity&, const AttachedEntity&) = default;
};

/// Taxonomy categories annotated with the KB entities attached to them.
/// `by_category` and `by_entity` describe the same attachment set.
struct EnrichedTaxonomy {
  std::vector<std::vector<AttachedEntity>> by_category;  // indexed by CategoryId
  std::map<std::string, EntityAttachment, std::less<>> by_entity;
  /// Entities with zero relevance to every category.
  std::vector<std::string> skipped;

  /// Rebuilds by_category from by_entity, ordered by (-probability, entity).
  void index_categories(std::size_t category_count);
};

struct AttachOptions {
  std::size_t k = 5;
  double temperature = 1.0;
};

EnrichedTaxonomy attach_entities(const Taxonomy& tax, std::span<const ConceptVector> vectors,
                                 const TypedEntities& typed, const ConceptSimilarity& sim,
                                 const ConceptKB& kb, const AttachOptions& options);

/// entity TAB category_path TAB probability TAB rank (1-based), sorted by
/// (entity, rank).
void write_attachments(std::ostream& out, const Taxonomy& tax, const EnrichedTaxonomy& enriched);
EnrichedTaxonomy read_attachments(std::istream& in, const Taxonomy& tax, const std::string& stage);

}  // namespace taxenrich
