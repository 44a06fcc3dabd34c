#include "taxenrich/concept_kb.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>

#include "taxenrich/error.hpp"

namespace taxenrich {
namespace {

constexpr const char* kLoadStage = "concept_kb.load";
constexpr const char* kSimStage = "concept_kb.load_similarity";

std::pair<std::string, std::string> ordered(std::string a, std::string b) {
  if (b < a) std::swap(a, b);
  return {std::move(a), std::move(b)};
}

}  // namespace

ConceptKB ConceptKB::from_rows(std::span<const KBRow> rows) {
  ConceptKB kb;
  for (const auto& row : rows) {
    auto concept_name = normalize_key(row.concept_name);
    auto entity = normalize_key(row.entity);
    if (concept_name.empty() || entity.empty()) {
      throw DataError(kLoadStage, "empty concept or entity string");
    }
    if (row.count == 0) {
      throw DataError(kLoadStage, "non-positive count for (" + concept_name + ", " + entity + ")");
    }
    kb.pairs_[{std::move(concept_name), std::move(entity)}] += row.count;
  }
  for (const auto& [key, n] : kb.pairs_) {
    auto& by_concept = kb.entities_of_[key.first];
    by_concept.items.push_back({key.second, n});
    by_concept.total += n;
    auto& by_entity = kb.concepts_of_[key.second];
    by_entity.items.push_back({key.first, n});
    by_entity.total += n;
  }
  // pairs_ iterates by (concept, entity), so entities_of_ lists are already
  // sorted; concepts_of_ lists are filled in concept order as well.
  return kb;
}

std::uint64_t ConceptKB::count(std::string_view concept_name, std::string_view entity) const {
  const auto it = pairs_.find({std::string(concept_name), std::string(entity)});
  return it == pairs_.end() ? 0 : it->second;
}

std::span<const NamedCount> ConceptKB::entities_of(std::string_view concept_name) const {
  const auto it = entities_of_.find(concept_name);
  if (it == entities_of_.end()) return {};
  return it->second.items;
}

std::span<const NamedCount> ConceptKB::concepts_of(std::string_view entity) const {
  const auto it = concepts_of_.find(entity);
  if (it == concepts_of_.end()) return {};
  return it->second.items;
}

std::uint64_t ConceptKB::concept_total(std::string_view concept_name) const {
  const auto it = entities_of_.find(concept_name);
  return it == entities_of_.end() ? 0 : it->second.total;
}

std::uint64_t ConceptKB::entity_total(std::string_view entity) const {
  const auto it = concepts_of_.find(entity);
  return it == concepts_of_.end() ? 0 : it->second.total;
}

bool ConceptKB::has_concept(std::string_view concept_name) const {
  return entities_of_.find(concept_name) != entities_of_.end();
}

bool ConceptKB::has_entity(std::string_view entity) const {
  return concepts_of_.find(entity) != concepts_of_.end();
}

std::vector<std::string> ConceptKB::concepts() const {
  std::vector<std::string> out;
  out.reserve(entities_of_.size());
  for (const auto& entry : entities_of_) out.push_back(entry.first);
  return out;
}

std::vector<std::string> ConceptKB::entities() const {
  std::vector<std::string> out;
  out.reserve(concepts_of_.size());
  for (const auto& entry : concepts_of_) out.push_back(entry.first);
  return out;
}

ConceptKB parse_kb(std::istream& in) {
  std::vector<KBRow> rows;
  std::size_t line_no = 0;
  for (const auto& line : read_lines(in)) {
    ++line_no;
    if (trim(line).empty() || line.front() == '#') continue;
    const auto fields = split_tabs(line);
    const std::string where = "line " + std::to_string(line_no);
    if (fields.size() != 3) {
      throw DataError(kLoadStage, where + ": expected concept TAB entity TAB count");
    }
    KBRow row{std::string(fields[0]), std::string(fields[1]), 0};
    const std::string count_field = trim(fields[2]);
    if (!count_field.empty() && count_field.front() == '-') {
      throw DataError(kLoadStage, where + ": non-positive count '" + count_field + "'");
    }
    if (!parse_uint(count_field, row.count)) {
      throw DataError(kLoadStage, where + ": malformed count '" + count_field + "'");
    }
    if (row.count == 0) throw DataError(kLoadStage, where + ": non-positive count 0");
    if (normalize_key(row.concept_name).empty() || normalize_key(row.entity).empty()) {
      throw DataError(kLoadStage, where + ": empty concept or entity");
    }
    rows.push_back(std::move(row));
  }
  return ConceptKB::from_rows(rows);
}

ConceptKB load_kb(const std::string& pairs_file) {
  std::ifstream in(pairs_file, std::ios::binary);
  if (!in) throw DataError(kLoadStage, "cannot open pairs file '" + pairs_file + "'");
  return parse_kb(in);
}

void write_kb(std::ostream& out, const ConceptKB& kb) {
  for (const auto& [key, n] : kb.pairs()) {
    out << key.first << '\t' << key.second << '\t' << n << '\n';
  }
}

std::string_view to_string(SimilarityMode mode) {
  switch (mode) {
    case SimilarityMode::exact_match: return "exact-match";
    case SimilarityMode::table: return "table";
    case SimilarityMode::cooccurrence_cosine: return "co-occurrence-cosine";
  }
  return "exact-match";
}

SimilarityMode parse_similarity_mode(std::string_view s) {
  if (s == "exact-match") return SimilarityMode::exact_match;
  if (s == "table") return SimilarityMode::table;
  if (s == "co-occurrence-cosine") return SimilarityMode::cooccurrence_cosine;
  throw std::invalid_argument("unknown similarity mode '" + std::string(s) + "'");
}

void ConceptSimilarity::set(std::string_view c1, std::string_view c2, double score) {
  if (!(score >= 0.0 && score <= 1.0)) {
    throw std::invalid_argument("similarity score outside [0,1]");
  }
  auto a = normalize_key(c1);
  auto b = normalize_key(c2);
  if (a == b && score != 1.0) {
    throw std::invalid_argument("self-similarity of '" + a + "' must be 1");
  }
  table_[ordered(std::move(a), std::move(b))] = score;
}

double ConceptSimilarity::operator()(const ConceptKB& kb, std::string_view c1,
                                     std::string_view c2) const {
  switch (mode_) {
    case SimilarityMode::exact_match:
      return c1 == c2 ? 1.0 : 0.0;
    case SimilarityMode::table: {
      if (c1 == c2) return 1.0;
      const auto it = table_.find(ordered(std::string(c1), std::string(c2)));
      return it == table_.end() ? 0.0 : it->second;
    }
    case SimilarityMode::cooccurrence_cosine: {
      if (!kb.has_concept(c1) || !kb.has_concept(c2)) return 0.0;
      if (c1 == c2) return 1.0;
      // Fixed argument order keeps the floating-point result symmetric.
      const auto a = kb.entities_of(c1 < c2 ? c1 : c2);
      const auto b = kb.entities_of(c1 < c2 ? c2 : c1);
      double dot = 0.0;
      double na = 0.0;
      double nb = 0.0;
      for (const auto& x : a) na += static_cast<double>(x.count) * static_cast<double>(x.count);
      for (const auto& y : b) nb += static_cast<double>(y.count) * static_cast<double>(y.count);
      std::size_t i = 0;
      std::size_t j = 0;
      while (i < a.size() && j < b.size()) {
        if (a[i].name < b[j].name) {
          ++i;
        } else if (b[j].name < a[i].name) {
          ++j;
        } else {
          dot += static_cast<double>(a[i].count) * static_cast<double>(b[j].count);
          ++i;
          ++j;
        }
      }
      const double score = dot / (std::sqrt(na) * std::sqrt(nb));
      return std::clamp(score, 0.0, 1.0);
    }
  }
  return 0.0;
}

ConceptSimilarity parse_similarity_table(std::istream& in) {
  ConceptSimilarity sim(SimilarityMode::table);
  std::size_t line_no = 0;
  for (const auto& line : read_lines(in)) {
    ++line_no;
    if (trim(line).empty() || line.front() == '#') continue;
    const auto fields = split_tabs(line);
    const std::string where = "line " + std::to_string(line_no);
    if (fields.size() != 3) {
      throw DataError(kSimStage, where + ": expected concept TAB concept TAB score");
    }
    double score = 0.0;
    if (!parse_double(trim(fields[2]), score)) {
      throw DataError(kSimStage, where + ": malformed score");
    }
    try {
      sim.set(fields[0], fields[1], score);
    } catch (const std::invalid_argument& e) {
      throw DataError(kSimStage, where + ": " + e.what());
    }
  }
  return sim;
}

ConceptSimilarity load_similarity_table(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError(kSimStage, "cannot open similarity file '" + path + "'");
  return parse_similarity_table(in);
}

double similarity(const ConceptSimilarity& sim, const ConceptKB& kb, std::string_view c1,
                  std::string_view c2) {
  return sim(kb, c1, c2);
}

PhraseLexicon build_entity_lexicon(const ConceptKB& kb, std::uint64_t min_total) {
  PhraseLexicon lexicon;
  for (const auto& entity : kb.entities()) {
    if (kb.entity_total(entity) >= min_total) lexicon.insert(entity);
  }
  return lexicon;
}

}  // namespace taxenrich
