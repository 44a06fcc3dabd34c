#include "taxenrich/concept_vectors.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <ostream>
#include <set>
#include <stdexcept>

#include "taxenrich/error.hpp"

namespace taxenrich {
namespace {

std::uint64_t lookup(const CountMap& m, std::string_view key) {
  const auto it = m.find(key);
  return it == m.end() ? 0 : it->second;
}

}  // namespace

PhraseLexicon concept_lexicon(const ConceptKB& kb) {
  PhraseLexicon lexicon;
  for (const auto& concept_name : kb.concepts()) lexicon.insert(concept_name);
  return lexicon;
}

std::vector<PhraseMatch> segment_concepts(std::string_view text, const PhraseLexicon& concepts,
                                          std::size_t max_len) {
  if (max_len < 1) throw std::invalid_argument("segment_concepts: max_len must be >= 1");
  const auto tokens = tokenize(text);
  return concepts.match(tokens, max_len);
}

std::vector<PhraseMatch> segment_concepts(std::string_view text, const ConceptKB& kb,
                                          std::size_t max_len) {
  return segment_concepts(text, concept_lexicon(kb), max_len);
}

std::uint64_t ConceptStats::term_frequency(CategoryId t, std::string_view concept_name) const {
  if (t >= tf.size()) return 0;
  return lookup(tf[t], concept_name);
}

std::uint64_t ConceptStats::taxonomy_df(std::string_view concept_name) const {
  return lookup(df_odp, concept_name);
}

std::uint64_t ConceptStats::kb_df(std::string_view concept_name) const {
  return lookup(df_pro, concept_name);
}

ConceptStats collect_stats(const Taxonomy& tax, const ConceptKB& kb, std::size_t max_len) {
  const PhraseLexicon lexicon = concept_lexicon(kb);
  ConceptStats stats;
  stats.tf.resize(tax.size());
  stats.total_documents = tax.document_count();
  for (CategoryId t = 0; t < tax.size(); ++t) {
    for (const auto& doc : tax.documents(t)) {
      std::set<std::string, std::less<>> seen;
      for (auto& match : segment_concepts(doc.text, lexicon, max_len)) {
        ++stats.tf[t][match.label];
        seen.insert(std::move(match.label));
      }
      for (const auto& concept_name : seen) ++stats.df_odp[concept_name];
    }
  }
  for (const auto& entry : stats.df_odp) {
    stats.df_pro[entry.first] = kb.entities_of(entry.first).size();
  }
  return stats;
}

double concept_weight(double tf, double df_odp, double df_pro) {
  if (!(tf > 0.0) || !(df_odp > 0.0) || !(df_pro > 0.0)) return 0.0;
  const double cw_odp = tf / std::log1p(df_odp);
  const double cw_pro = tf / std::log1p(df_pro);
  if (!(cw_odp > 1.0) || !(cw_pro > 1.0)) return 0.0;
  return cw_odp * std::log(cw_odp) * cw_pro * std::log(cw_pro);
}

double category_concept_weight(const ConceptStats& stats, CategoryId t, std::string_view concept_name) {
  return concept_weight(static_cast<double>(stats.term_frequency(t, concept_name)),
                        static_cast<double>(stats.taxonomy_df(concept_name)),
                        static_cast<double>(stats.kb_df(concept_name)));
}

std::vector<ConceptVector> base_vectors(const ConceptStats& stats, const Taxonomy& tax) {
  std::vector<ConceptVector> out(tax.size());
  for (CategoryId t = 0; t < tax.size() && t < stats.tf.size(); ++t) {
    for (const auto& entry : stats.tf[t]) {
      const double w = category_concept_weight(stats, t, entry.first);
      if (w > 0.0) out[t].set(entry.first, w);
    }
  }
  return out;
}

std::vector<SparseVector> enrich_vectors(std::span<const SparseVector> base, const Taxonomy& tax,
                                         double alpha) {
  if (!(alpha >= 0.0 && alpha <= 1.0)) {
    throw std::invalid_argument("enrich_vectors: alpha must lie in [0,1]");
  }
  if (base.size() != tax.size()) {
    throw std::invalid_argument("enrich_vectors: one vector per category required");
  }
  std::vector<SparseVector> out(tax.size());
  for (std::size_t i = tax.size(); i-- > 0;) {
    const auto& children = tax.category(i).children;
    if (children.empty()) {
      out[i] = base[i];
    } else {
      SparseVector merged = base[i].scaled(alpha);
      const double share = (1.0 - alpha) / static_cast<double>(children.size());
      for (const CategoryId child : children) merged.add_scaled(out[child], share);
      out[i] = std::move(merged);
    }
    out[i].drop_nonpositive();
  }
  return out;
}

void write_vector_dump(std::ostream& out, const Taxonomy& tax,
                       std::span<const SparseVector> vectors) {
  std::vector<CategoryId> order(vectors.size());
  for (CategoryId i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(),
            [&](CategoryId a, CategoryId b) { return tax.path(a) < tax.path(b); });
  for (const CategoryId id : order) {
    std::vector<std::pair<std::string, double>> rows(vectors[id].begin(), vectors[id].end());
    std::stable_sort(rows.begin(), rows.end(),
                     [](const auto& a, const auto& b) { return a.second > b.second; });
    for (const auto& [key, w] : rows) {
      out << tax.path(id) << '\t' << key << '\t' << format_double(w) << '\n';
    }
  }
}

std::vector<SparseVector> read_vector_dump(std::istream& in, const Taxonomy& tax,
                                           const std::string& stage) {
  std::vector<SparseVector> vectors(tax.size());
  std::size_t line_no = 0;
  for (const auto& line : read_lines(in)) {
    ++line_no;
    if (line.empty()) continue;
    const auto fields = split_tabs(line);
    const std::string where = "line " + std::to_string(line_no);
    double w = 0.0;
    if (fields.size() != 3 || !parse_double(fields[2], w) || !std::isfinite(w)) {
      throw DataError(stage, where + ": malformed vector row");
    }
    const auto id = tax.find(fields[0]);
    if (!id) throw DataError(stage, where + ": unknown category '" + std::string(fields[0]) + "'");
    vectors[*id].set(fields[1], w);
  }
  return vectors;
}

}  // namespace taxenrich
