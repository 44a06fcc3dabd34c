#include "taxenrich/enrichment.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <numeric>
#include <ostream>
#include <stdexcept>

#include "taxenrich/error.hpp"
#include "taxenrich/text.hpp"

namespace taxenrich {

double relevance(const ConceptVector& category, const ConceptVector& entity,
                 const ConceptSimilarity& sim, const ConceptKB& kb) {
  if (sim.mode() == SimilarityMode::exact_match) return category.dot(entity);
  double sum = 0.0;
  for (const auto& [ct, wt] : category) {
    for (const auto& [ce, we] : entity) {
      const double s = sim(kb, ct, ce);
      if (s != 0.0) sum += s * wt * we;
    }
  }
  return sum;
}

std::vector<double> softmax(std::span<const double> scores, double temperature) {
  if (!(temperature > 0.0)) throw std::invalid_argument("softmax: temperature must be > 0");
  std::vector<double> out(scores.size());
  if (scores.empty()) return out;
  const double top = *std::max_element(scores.begin(), scores.end());
  double total = 0.0;
  for (std::size_t i = 0; i < scores.size(); ++i) {
    out[i] = std::exp((scores[i] - top) / temperature);
    total += out[i];
  }
  for (auto& p : out) p /= total;
  return out;
}

void EnrichedTaxonomy::index_categories(std::size_t category_count) {
  by_category.assign(category_count, {});
  for (const auto& [name, att] : by_entity) {
    for (const auto& rc : att.ranked) by_category.at(rc.category).push_back({name, rc.probability});
  }
  for (auto& list : by_category) {
    std::stable_sort(list.begin(), list.end(), [](const auto& a, const auto& b) {
      return a.probability > b.probability;
    });
  }
}

EnrichedTaxonomy attach_entities(const Taxonomy& tax, std::span<const ConceptVector> vectors,
                                 const TypedEntities& typed, const ConceptSimilarity& sim,
                                 const ConceptKB& kb, const AttachOptions& options) {
  if (options.k < 1) throw std::invalid_argument("attach_entities: k must be >= 1");
  if (vectors.size() != tax.size()) {
    throw std::invalid_argument("attach_entities: one vector per category required");
  }
  EnrichedTaxonomy out;
  std::vector<double> rel(tax.size());
  std::vector<CategoryId> order(tax.size());
  for (const auto& [name, te] : typed) {
    bool any = false;
    for (CategoryId t = 0; t < tax.size(); ++t) {
      rel[t] = relevance(vectors[t], te.concepts, sim, kb);
      any = any || rel[t] != 0.0;
    }
    if (!any) {
      out.skipped.push_back(name);
      continue;
    }
    const auto probs = softmax(rel, options.temperature);
    std::iota(order.begin(), order.end(), CategoryId{0});
    const std::size_t keep = std::min(options.k, order.size());
    // Rank by raw relevance: exp may map distinct scores to one double.
    std::partial_sort(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(keep),
                      order.end(), [&](CategoryId a, CategoryId b) {
                        if (rel[a] != rel[b]) return rel[a] > rel[b];
                        return a < b;
                      });
    EntityAttachment att{name, {}};
    for (std::size_t r = 0; r < keep; ++r) att.ranked.push_back({order[r], probs[order[r]]});
    out.by_entity.emplace(name, std::move(att));
  }
  out.index_categories(tax.size());
  return out;
}

void write_attachments(std::ostream& out, const Taxonomy& tax, const EnrichedTaxonomy& enriched) {
  for (const auto& [name, att] : enriched.by_entity) {
    for (std::size_t r = 0; r < att.ranked.size(); ++r) {
      out << name << '\t' << tax.path(att.ranked[r].category) << '\t'
          << format_double(att.ranked[r].probability) << '\t' << (r + 1) << '\n';
    }
  }
}

EnrichedTaxonomy read_attachments(std::istream& in, const Taxonomy& tax,
                                  const std::string& stage) {
  EnrichedTaxonomy out;
  std::size_t line_no = 0;
  for (const auto& line : read_lines(in)) {
    ++line_no;
    if (line.empty()) continue;
    const auto fields = split_tabs(line);
    const std::string where = "line " + std::to_string(line_no);
    double p = 0.0;
    std::uint64_t rank = 0;
    if (fields.size() != 4 || !parse_double(fields[2], p) || !parse_uint(fields[3], rank) ||
        !(p > 0.0 && p <= 1.0)) {
      throw DataError(stage, where + ": malformed attachment row");
    }
    const auto id = tax.find(fields[1]);
    if (!id) throw DataError(stage, where + ": unknown category '" + std::string(fields[1]) + "'");
    auto& att = out.by_entity[std::string(fields[0])];
    att.entity = std::string(fields[0]);
    if (rank != att.ranked.size() + 1) throw DataError(stage, where + ": ranks out of sequence");
    att.ranked.push_back({*id, p});
  }
  out.index_categories(tax.size());
  return out;
}

}  // namespace taxenrich
