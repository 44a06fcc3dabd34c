#pragma once

#include <functional>
#include <iosfwd>
#include <map>
#include <string>
#include <string_view>

#include "taxenrich/concept_kb.hpp"
#include "taxenrich/sparse_vector.hpp"

namespace taxenrich {

/// A KB entity described by its representative concepts; weights are
/// typicality scores in (0, 1].
struct TypedEntity {
  std::string entity;
  ConceptVector concepts;
};

using TypedEntities = std::map<std::string, TypedEntity, std::less<>>;

/// n(c,e) / Σ_i n(c,e_i)
double entity_given_concept(const ConceptKB& kb, std::string_view concept_name, std::string_view entity);
/// n(c,e) / Σ_i n(c_i,e)
double concept_given_entity(const ConceptKB& kb, std::string_view concept_name, std::string_view entity);

/// P(e|c)·P(c|e). Throws std::out_of_range when (c, e) is not a KB pair.
double typicality(const ConceptKB& kb, std::string_view concept_name, std::string_view entity);

/// Keeps, per entity, the concepts whose typicality strictly exceeds beta;
/// entities left without concepts are omitted.
TypedEntities type_entities(const ConceptKB& kb, double beta);

/// entity TAB concept TAB typicality, sorted by (entity, -typicality, concept).
void write_typed_dump(std::ostream& out, const TypedEntities& typed);

}  // namespace taxenrich
