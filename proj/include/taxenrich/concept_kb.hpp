#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "taxenrich/text.hpp"

namespace taxenrich {

struct KBRow {
  std::string concept_name;
  std::string entity;
  std::uint64_t count = 0;
};

struct NamedCount {
  std::string name;
  std::uint64_t count = 0;
};

/// Concept-entity isA pairs with co-occurrence counts n(c, e). Strings are
/// stored in normalize_key() form; every index below is derived from the
/// pair table on construction and never changes afterwards.
class ConceptKB {
 public:
  using PairMap = std::map<std::pair<std::string, std::string>, std::uint64_t>;

  ConceptKB() = default;
  /// Normalizes, sums duplicate pairs. Throws DataError("concept_kb.load")
  /// for a zero count or an empty string.
  static ConceptKB from_rows(std::span<const KBRow> rows);

  std::uint64_t count(std::string_view concept_name, std::string_view entity) const;
  /// Sorted by entity name; empty for an unknown concept.
  std::span<const NamedCount> entities_of(std::string_view concept_name) const;
  /// Sorted by concept name; empty for an unknown entity.
  std::span<const NamedCount> concepts_of(std::string_view entity) const;
  /// Σ_e n(c, e)
  std::uint64_t concept_total(std::string_view concept_name) const;
  /// Σ_c n(c, e)
  std::uint64_t entity_total(std::string_view entity) const;

  bool has_concept(std::string_view concept_name) const;
  bool has_entity(std::string_view entity) const;

  const PairMap& pairs() const noexcept { return pairs_; }
  std::size_t concept_count() const noexcept { return entities_of_.size(); }
  std::size_t entity_count() const noexcept { return concepts_of_.size(); }
  bool empty() const noexcept { return pairs_.empty(); }

  /// Concept names in ascending order.
  std::vector<std::string> concepts() const;
  /// Entity names in ascending order.
  std::vector<std::string> entities() const;

 private:
  struct Marginal {
    std::vector<NamedCount> items;
    std::uint64_t total = 0;
  };
  using Index = std::map<std::string, Marginal, std::less<>>;

  PairMap pairs_;
  Index entities_of_;
  Index concepts_of_;
};

ConceptKB parse_kb(std::istream& in);
ConceptKB load_kb(const std::string& pairs_file);
/// concept TAB entity TAB count, sorted by (concept, entity).
void write_kb(std::ostream& out, const ConceptKB& kb);

enum class SimilarityMode { exact_match, table, cooccurrence_cosine };

std::string_view to_string(SimilarityMode mode);
/// Accepts "exact-match", "table", "co-occurrence-cosine".
SimilarityMode parse_similarity_mode(std::string_view s);

/// Pluggable concept-concept similarity in [0, 1].
class ConceptSimilarity {
 public:
  explicit ConceptSimilarity(SimilarityMode mode = SimilarityMode::exact_match) : mode_(mode) {}

  SimilarityMode mode() const noexcept { return mode_; }

  /// Stores a symmetric table entry. Self-pairs must score 1.
  void set(std::string_view c1, std::string_view c2, double score);
  const std::map<std::pair<std::string, std::string>, double>& table() const noexcept {
    return table_;
  }

  double operator()(const ConceptKB& kb, std::string_view c1, std::string_view c2) const;

 private:
  SimilarityMode mode_;
  std::map<std::pair<std::string, std::string>, double> table_;
};

/// Table rows concept TAB concept TAB score; the result is in table mode.
ConceptSimilarity parse_similarity_table(std::istream& in);
ConceptSimilarity load_similarity_table(const std::string& path);

double similarity(const ConceptSimilarity& sim, const ConceptKB& kb, std::string_view c1,
                  std::string_view c2);

/// Entities whose total count reaches min_total, keyed for longest-match
/// detection in running text.
PhraseLexicon build_entity_lexicon(const ConceptKB& kb, std::uint64_t min_total);

}  // namespace taxenrich
