#include "taxenrich/classifier.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <numeric>
#include <ostream>
#include <set>
#include <stdexcept>
#include <unordered_set>

#include "taxenrich/concept_vectors.hpp"
#include "taxenrich/error.hpp"

namespace taxenrich {
namespace detail {
extern const std::string_view kStopwordData;
}  // namespace detail

namespace {

struct StopwordList {
  std::string version = "unversioned";
  std::unordered_set<std::string> words;
};

const StopwordList& stopword_list() {
  static const StopwordList list = [] {
    StopwordList out;
    std::string_view data = detail::kStopwordData;
    while (!data.empty()) {
      const auto nl = data.find('\n');
      const auto line = trim(data.substr(0, nl));
      data = nl == std::string_view::npos ? std::string_view{} : data.substr(nl + 1);
      if (line.empty()) continue;
      if (line.front() == '#') {
        constexpr std::string_view kTag = "# version:";
        if (line.starts_with(kTag)) out.version = trim(std::string_view(line).substr(kTag.size()));
        continue;
      }
      out.words.insert(line);
    }
    return out;
  }();
  return list;
}

}  // namespace

std::string_view stopword_list_version() { return stopword_list().version; }

bool is_stopword(std::string_view token) {
  return stopword_list().words.contains(std::string(token));
}

std::vector<std::string> content_terms(std::string_view text) {
  auto tokens = tokenize(text);
  std::erase_if(tokens, [](const std::string& t) { return is_stopword(t); });
  return tokens;
}

IdfTable compute_idf(const Taxonomy& tax) {
  std::map<std::string, std::size_t, std::less<>> df;
  for (CategoryId t = 0; t < tax.size(); ++t) {
    for (const auto& doc : tax.documents(t)) {
      auto terms = content_terms(doc.text);
      std::sort(terms.begin(), terms.end());
      terms.erase(std::unique(terms.begin(), terms.end()), terms.end());
      for (auto& term : terms) ++df[term];
    }
  }
  IdfTable idf;
  const double n = static_cast<double>(tax.document_count());
  for (const auto& [term, count] : df) {
    idf.emplace(term, std::log1p(n / static_cast<double>(count)));
  }
  return idf;
}

TermVector document_vector(std::string_view text, const IdfTable& idf) {
  std::map<std::string, double, std::less<>> tf;
  for (auto& term : content_terms(text)) tf[std::move(term)] += 1.0;
  TermVector v;
  for (const auto& [term, count] : tf) {
    const auto it = idf.find(term);
    if (it != idf.end() && it->second > 0.0) v.set(term, count * it->second);
  }
  return v;
}

CentroidSet build_centroids(const Taxonomy& tax, const CentroidParams& params) {
  if (tax.empty()) throw std::invalid_argument("build_centroids: empty taxonomy");
  if (!(params.alpha_centroid >= 0.0 && params.alpha_centroid <= 1.0)) {
    throw std::invalid_argument("build_centroids: alpha_centroid must lie in [0,1]");
  }
  if (!(params.alpha_up >= 0.0)) {
    throw std::invalid_argument("build_centroids: alpha_up must be >= 0");
  }
  CentroidSet out;
  out.idf = compute_idf(tax);

  std::vector<TermVector> raw(tax.size());
  for (CategoryId t = 0; t < tax.size(); ++t) {
    const auto& docs = tax.documents(t);
    if (docs.empty()) continue;
    for (const auto& doc : docs) raw[t].add_scaled(document_vector(doc.text, out.idf), 1.0);
    raw[t] = raw[t].scaled(1.0 / static_cast<double>(docs.size()));
  }

  auto merged = enrich_vectors(raw, tax, params.alpha_centroid);
  if (params.alpha_up > 0.0) {
    // Parents precede children, so each child sees its parent's final vector.
    std::vector<TermVector> down = merged;
    for (CategoryId t = 0; t < tax.size(); ++t) {
      if (const auto p = tax.category(t).parent) down[t].add_scaled(down[*p], params.alpha_up);
    }
    merged = std::move(down);
  }

  out.centroids.resize(tax.size());
  for (CategoryId t = 0; t < tax.size(); ++t) {
    out.centroids[t] = merged[t].normalized();
    if (out.centroids[t].empty()) out.empty_categories.push_back(t);
  }
  return out;
}

ClassifierModel make_classifier(std::shared_ptr<const Taxonomy> tax, CentroidSet centroids,
                                const EnrichedTaxonomy& enriched, const PhraseLexicon& lexicon,
                                const ClassifierParams& params) {
  if (!(params.tau >= 0.0 && params.tau <= 1.0)) {
    throw std::invalid_argument("classifier: tau must lie in [0,1]");
  }
  if (params.k < 1) throw std::invalid_argument("classifier: k must be >= 1");
  ClassifierModel model;
  model.taxonomy = std::move(tax);
  model.centroids = std::move(centroids.centroids);
  model.idf = std::move(centroids.idf);
  model.params = params;
  for (const auto& entry : lexicon.entries()) {
    const auto it = enriched.by_entity.find(entry.label);
    if (it == enriched.by_entity.end() || it->second.ranked.empty()) continue;
    model.lexicon.insert(entry.label);
    model.entity_index.emplace(entry.label, it->second.ranked);
  }
  return model;
}

ScoreBreakdown score_components(const ClassifierModel& model, std::string_view text) {
  const std::size_t n = model.taxonomy->size();
  ScoreBreakdown out;
  out.term.assign(n, 0.0);
  out.entity.assign(n, 0.0);

  const TermVector v = document_vector(text, model.idf);
  for (CategoryId t = 0; t < n; ++t) {
    out.term[t] = std::clamp(cosine(v, model.centroids[t]), 0.0, 1.0);
  }

  const auto tokens = tokenize(text);
  out.detected_entities = model.lexicon.match(tokens, std::max<std::size_t>(model.params.max_len, 1));
  if (!out.detected_entities.empty()) {
    for (const auto& m : out.detected_entities) {
      const auto it = model.entity_index.find(m.label);
      if (it == model.entity_index.end()) continue;
      for (const auto& rc : it->second) out.entity[rc.category] += rc.probability;
    }
    const double count = static_cast<double>(out.detected_entities.size());
    for (auto& s : out.entity) s /= count;
  }
  return out;
}

Classification combine_scores(const ScoreBreakdown& scores, double tau, std::size_t k) {
  if (!(tau >= 0.0 && tau <= 1.0)) throw std::invalid_argument("tau must lie in [0,1]");
  const std::size_t n = scores.term.size();
  std::vector<double> final_score(n);
  for (std::size_t t = 0; t < n; ++t) {
    final_score[t] = (1.0 - tau) * scores.term[t] + tau * scores.entity[t];
  }
  std::vector<CategoryId> order(n);
  std::iota(order.begin(), order.end(), CategoryId{0});
  const std::size_t keep = std::min(k, n);
  std::partial_sort(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(keep), order.end(),
                    [&](CategoryId a, CategoryId b) {
                      if (final_score[a] != final_score[b]) return final_score[a] > final_score[b];
                      return a < b;
                    });
  Classification out;
  out.detected_entities = scores.detected_entities;
  for (std::size_t r = 0; r < keep; ++r) out.ranked.emplace_back(order[r], final_score[order[r]]);
  return out;
}

Classification score(const ClassifierModel& model, std::string_view text) {
  return combine_scores(score_components(model, text), model.params.tau, model.params.k);
}

void classify_stream(const ClassifierModel& model, std::istream& in, std::ostream& out,
                     std::size_t k) {
  std::size_t line_no = 0;
  for (const auto& line : read_lines(in)) {
    ++line_no;
    const auto result = combine_scores(score_components(model, line), model.params.tau, k);
    for (std::size_t r = 0; r < result.ranked.size(); ++r) {
      out << line_no << '\t' << (r + 1) << '\t' << model.taxonomy->path(result.ranked[r].first)
          << '\t' << format_double(result.ranked[r].second) << '\n';
    }
  }
}

void classify_file(const ClassifierModel& model, const std::string& input_file, std::ostream& out,
                   std::size_t k) {
  std::ifstream in(input_file, std::ios::binary);
  if (!in) throw DataError("classifier.classify", "cannot open input file '" + input_file + "'");
  classify_stream(model, in, out, k);
}

}  // namespace taxenrich
