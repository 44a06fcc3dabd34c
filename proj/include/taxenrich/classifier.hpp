#pragma once

#include <cstddef>
#include <functional>
#include <iosfwd>
#include <map>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "taxenrich/enrichment.hpp"
#include "taxenrich/sparse_vector.hpp"
#include "taxenrich/taxonomy.hpp"
#include "taxenrich/text.hpp"

namespace taxenrich {

/// Version tag of the bundled stopword list.
std::string_view stopword_list_version();
bool is_stopword(std::string_view token);

/// Word tokens of `text` minus stopwords.
std::vector<std::string> content_terms(std::string_view text);

using IdfTable = std::map<std::string, double, std::less<>>;

/// idf(term) = ln(1 + N / df) over all taxonomy documents.
IdfTable compute_idf(const Taxonomy& tax);

/// Raw term frequency times idf; terms without an idf entry are ignored.
TermVector document_vector(std::string_view text, const IdfTable& idf);

struct CentroidParams {
  double alpha_centroid = 0.7;
  /// Weight of the optional top-down pass child += alpha_up·parent; 0 = off.
  double alpha_up = 0.0;
};

struct CentroidSet {
  IdfTable idf;
  std::vector<TermVector> centroids;  // unit L2 norm or empty
  std::vector<CategoryId> empty_categories;
};

/// Per-category mean of document tf-idf vectors, merged bottom-up with the
/// same recursion as the concept vectors, then L2-normalized.
CentroidSet build_centroids(const Taxonomy& tax, const CentroidParams& params);

struct ClassifierParams {
  double tau = 0.8;
  std::size_t k = 5;
  std::size_t max_len = 4;
};

/// Everything needed to classify text. Immutable once built; concurrent
/// scoring calls are safe.
struct ClassifierModel {
  std::shared_ptr<const Taxonomy> taxonomy;
  std::vector<TermVector> centroids;
  IdfTable idf;
  /// Attachment ranking of each entity (the entity's top-k categories).
  std::map<std::string, std::vector<RankedCategory>, std::less<>> entity_index;
  PhraseLexicon lexicon;
  ClassifierParams params;
};

/// Restricts `lexicon` to entities that carry attachments.
ClassifierModel make_classifier(std::shared_ptr<const Taxonomy> tax, CentroidSet centroids,
                                const EnrichedTaxonomy& enriched, const PhraseLexicon& lexicon,
                                const ClassifierParams& params);

/// Per-category evidence before the tau combination.
struct ScoreBreakdown {
  std::vector<double> term;    // cosine(text, centroid)
  std::vector<double> entity;  // mean attachment probability of detected entities
  std::vector<PhraseMatch> detected_entities;
};

ScoreBreakdown score_components(const ClassifierModel& model, std::string_view text);

struct Classification {
  std::vector<std::pair<CategoryId, double>> ranked;
  std::vector<PhraseMatch> detected_entities;
};

/// (1 - tau)·term + tau·entity, top-k with ascending-id tie-break.
Classification combine_scores(const ScoreBreakdown& scores, double tau, std::size_t k);
Classification score(const ClassifierModel& model, std::string_view text);

/// One classification per input line, written as
/// line_number TAB rank TAB category_path TAB score.
void classify_stream(const ClassifierModel& model, std::istream& in, std::ostream& out,
                     std::size_t k);
void classify_file(const ClassifierModel& model, const std::string& input_file, std::ostream& out,
                   std::size_t k);

}  // namespace taxenrich
