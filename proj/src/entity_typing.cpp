#include "taxenrich/entity_typing.hpp"

#include <algorithm>
#include <ostream>
#include <stdexcept>
#include <vector>

#include "taxenrich/text.hpp"

namespace taxenrich {
namespace {

std::uint64_t require_pair(const ConceptKB& kb, std::string_view concept_name,
                           std::string_view entity) {
  const auto n = kb.count(concept_name, entity);
  if (n == 0) {
    throw std::out_of_range("no KB pair (" + std::string(concept_name) + ", " + std::string(entity) +
                            ")");
  }
  return n;
}

}  // namespace

double entity_given_concept(const ConceptKB& kb, std::string_view concept_name,
                            std::string_view entity) {
  const auto n = require_pair(kb, concept_name, entity);
  return static_cast<double>(n) / static_cast<double>(kb.concept_total(concept_name));
}

double concept_given_entity(const ConceptKB& kb, std::string_view concept_name,
                            std::string_view entity) {
  const auto n = require_pair(kb, concept_name, entity);
  return static_cast<double>(n) / static_cast<double>(kb.entity_total(entity));
}

double typicality(const ConceptKB& kb, std::string_view concept_name, std::string_view entity) {
  return entity_given_concept(kb, concept_name, entity) * concept_given_entity(kb, concept_name, entity);
}

TypedEntities type_entities(const ConceptKB& kb, double beta) {
  if (!(beta >= 0.0)) throw std::invalid_argument("type_entities: beta must be >= 0");
  TypedEntities out;
  for (const auto& entity : kb.entities()) {
    const double entity_total = static_cast<double>(kb.entity_total(entity));
    ConceptVector concepts;
    for (const auto& c : kb.concepts_of(entity)) {
      const double n = static_cast<double>(c.count);
      const double score =
          (n / static_cast<double>(kb.concept_total(c.name))) * (n / entity_total);
      if (score > beta) concepts.set(c.name, score);
    }
    if (!concepts.empty()) out.emplace(entity, TypedEntity{entity, std::move(concepts)});
  }
  return out;
}

void write_typed_dump(std::ostream& out, const TypedEntities& typed) {
  for (const auto& [name, te] : typed) {
    std::vector<std::pair<std::string, double>> rows(te.concepts.begin(), te.concepts.end());
    std::stable_sort(rows.begin(), rows.end(),
                     [](const auto& a, const auto& b) { return a.second > b.second; });
    for (const auto& [concept_name, score] : rows) {
      out << name << '\t' << concept_name << '\t' << format_double(score) << '\n';
    }
  }
}

}  // namespace taxenrich
