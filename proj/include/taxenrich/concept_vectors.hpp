#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "taxenrich/concept_kb.hpp"
#include "taxenrich/sparse_vector.hpp"
#include "taxenrich/taxonomy.hpp"
#include "taxenrich/text.hpp"

namespace taxenrich {

inline constexpr std::size_t kDefaultSegmentWindow = 4;

/// Lexicon over the KB's concept strings.
PhraseLexicon concept_lexicon(const ConceptKB& kb);

/// Greedy longest-match concept occurrences in `text`, at most `max_len`
/// tokens each, non-overlapping, with multiplicity.
std::vector<PhraseMatch> segment_concepts(std::string_view text, const PhraseLexicon& concepts,
                                          std::size_t max_len);
std::vector<PhraseMatch> segment_concepts(std::string_view text, const ConceptKB& kb,
                                          std::size_t max_len);

using CountMap = std::map<std::string, std::uint64_t, std::less<>>;

/// Corpus counts feeding the category concept weights.
struct ConceptStats {
  std::vector<CountMap> tf;  // indexed by CategoryId
  CountMap df_odp;           // taxonomy documents containing the concept
  CountMap df_pro;           // distinct KB entities under the concept
  std::size_t total_documents = 0;

  std::uint64_t term_frequency(CategoryId t, std::string_view concept_name) const;
  std::uint64_t taxonomy_df(std::string_view concept_name) const;
  std::uint64_t kb_df(std::string_view concept_name) const;
};

ConceptStats collect_stats(const Taxonomy& tax, const ConceptKB& kb,
                           std::size_t max_len = kDefaultSegmentWindow);

/// cw·ln(cw) for the taxonomy side times the same for the KB side, where
/// cw = tf / ln(1 + df). Zero unless both cw values exceed 1.
double concept_weight(double tf, double df_odp, double df_pro);
double category_concept_weight(const ConceptStats& stats, CategoryId t, std::string_view concept_name);

/// One vector per category, holding every concept with positive weight.
std::vector<ConceptVector> base_vectors(const ConceptStats& stats, const Taxonomy& tax);

/// Bottom-up hierarchy merge:
///   v'(t) = alpha·v(t) + (1 - alpha)·mean over children of v'(child)
/// with v'(leaf) = v(leaf). Entries that end up <= 0 are dropped.
std::vector<SparseVector> enrich_vectors(std::span<const SparseVector> base, const Taxonomy& tax,
                                         double alpha);

/// category_path TAB key TAB weight, sorted by (path, -weight, key).
void write_vector_dump(std::ostream& out, const Taxonomy& tax,
                       std::span<const SparseVector> vectors);
std::vector<SparseVector> read_vector_dump(std::istream& in, const Taxonomy& tax,
                                           const std::string& stage);

}  // namespace taxenrich
