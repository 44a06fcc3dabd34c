#pragma once

#include <memory>
#include <string>
#include <vector>

#include "taxenrich/classifier.hpp"
#include "taxenrich/evaluation.hpp"
#include "test_support.hpp"

namespace taxenrich::testing {

/// Two categories where term and entity evidence disagree on every line:
/// line 1 needs the term side (tau < ~0.76), line 2 the entity side
/// (tau > ~0.36). Only an interior tau gets both right.
struct ComplementaryFixture {
  ClassifierModel model;
  std::vector<std::string> lines;
  AnnotationSet annotations;
};

inline ComplementaryFixture complementary_fixture() {
  ComplementaryFixture f;
  auto tax = std::make_shared<Taxonomy>(make_taxonomy("/R\n/R/X\n/R/Y\n"));
  f.model.taxonomy = tax;
  f.model.idf = {{"xterm", 1.0}, {"yterm", 1.0}};
  f.model.centroids.resize(tax->size());
  f.model.centroids[1].set("xterm", 1.0);
  f.model.centroids[2].set("yterm", 1.0);
  f.model.entity_index["eone"] = {{2, 0.6}, {1, 0.4}};
  f.model.entity_index["etwo"] = {{2, 0.9}, {1, 0.1}};
  f.model.lexicon.insert("eone");
  f.model.lexicon.insert("etwo");
  f.model.params = {0.5, 1, 4};
  f.lines = {"xterm xterm xterm yterm eone", "xterm xterm yterm etwo"};
  f.annotations.set("1", "/R/X", Grade::relevant);
  f.annotations.set("2", "/R/Y", Grade::relevant);
  return f;
}

}  // namespace taxenrich::testing
