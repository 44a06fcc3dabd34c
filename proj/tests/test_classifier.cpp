#include <gtest/gtest.h>

#include <cmath>
#include <memory>
#include <numeric>
#include <random>
#include <sstream>

#include "taxenrich/classifier.hpp"
#include "test_support.hpp"

namespace taxenrich {
namespace {

using testing::make_taxonomy;

TEST(Stopwords, BundledListIsVersioned) {
  EXPECT_EQ(stopword_list_version(), "1");
  EXPECT_TRUE(is_stopword("the"));
  EXPECT_TRUE(is_stopword("don't"));
  EXPECT_FALSE(is_stopword("phone"));
  EXPECT_EQ(content_terms("The phone and THE case"), (std::vector<std::string>{"phone", "case"}));
}

TEST(Centroids, SingleDocumentIsNormalizedTfIdf) {
  const auto tax = make_taxonomy("/A\n", "d\t/A\tapple banana apple\n");
  const auto set = build_centroids(tax, {});
  ASSERT_EQ(set.centroids.size(), 1u);
  EXPECT_DOUBLE_EQ(set.idf.at("apple"), std::log(2.0));
  const auto& c = set.centroids[0];
  EXPECT_NEAR(c.get("apple"), 2.0 / std::sqrt(5.0), 1e-15);
  EXPECT_NEAR(c.get("banana"), 1.0 / std::sqrt(5.0), 1e-15);
  EXPECT_TRUE(set.empty_categories.empty());
}

TEST(Centroids, IdenticalDocumentsMatchSingleDocument) {
  const auto one = build_centroids(make_taxonomy("/A\n", "d\t/A\tapple banana apple\n"), {});
  const auto two = build_centroids(
      make_taxonomy("/A\n", "d1\t/A\tapple banana apple\nd2\t/A\tapple banana apple\n"), {});
  for (const auto& [k, w] : one.centroids[0]) EXPECT_NEAR(two.centroids[0].get(k), w, 1e-15);
}

TEST(Centroids, ChainParentIsProportionalToChild) {
  const auto tax = make_taxonomy("/A\n/A/B\n", "d1\t/A/B\tapple banana apple cherry\n");
  const auto set = build_centroids(tax, {0.5, 0.0});
  ASSERT_EQ(set.centroids[0].size(), set.centroids[1].size());
  for (const auto& [k, w] : set.centroids[1]) EXPECT_NEAR(set.centroids[0].get(k), w, 1e-15);
}

TEST(Centroids, EmptySubtreeIsFlagged) {
  const auto tax = make_taxonomy("/A\n/A/B\n/A/C\n", "d1\t/A/B\tapple\n");
  const auto set = build_centroids(tax, {});
  EXPECT_EQ(set.empty_categories, (std::vector<CategoryId>{2}));
  EXPECT_TRUE(set.centroids[2].empty());
}

TEST(Centroids, AlphaOneKeepsRawCentroids) {
  const auto tax = make_taxonomy("/A\n/A/B\n", "d0\t/A\tkiwi mango\nd1\t/A/B\tapple banana\n");
  const auto merged = build_centroids(tax, {1.0, 0.0});
  const auto idf = compute_idf(tax);
  const auto raw_a = document_vector("kiwi mango", idf).normalized();
  EXPECT_EQ(merged.centroids[0].size(), raw_a.size());
  for (const auto& [k, w] : raw_a) EXPECT_NEAR(merged.centroids[0].get(k), w, 1e-15);
}

TEST(Centroids, UnitNormAndDuplicationInvariance) {
  std::mt19937_64 rng(71);
  const std::vector<std::string> words = {"alpha", "beta", "gamma", "delta", "omega", "sigma"};
  auto doc = [&] {
    std::string s;
    for (int i = 0; i < 6; ++i) s += words[rng() % words.size()] + " ";
    return s;
  };
  std::string docs;
  for (int d = 0; d < 12; ++d) {
    docs += "d" + std::to_string(d) + "\t" + (d % 3 == 0 ? "/R" : d % 3 == 1 ? "/R/X" : "/R/Y") +
            "\t" + doc() + "\n";
  }
  const auto tax = make_taxonomy("/R\n/R/X\n/R/Y\n", docs);
  const auto set = build_centroids(tax, {0.7, 0.0});
  for (const auto& c : set.centroids) {
    if (!c.empty()) {
      EXPECT_NEAR(c.norm(), 1.0, 1e-12);
    }
  }

  // Mean of document vectors under a fixed idf is unchanged by duplication.
  TermVector once;
  TermVector twice;
  for (const auto& d : tax.documents(1)) once.add_scaled(document_vector(d.text, set.idf), 1.0);
  for (const auto& d : tax.documents(1)) {
    twice.add_scaled(document_vector(d.text, set.idf), 1.0);
    twice.add_scaled(document_vector(d.text, set.idf), 1.0);
  }
  once = once.scaled(1.0 / static_cast<double>(tax.documents(1).size()));
  twice = twice.scaled(1.0 / static_cast<double>(2 * tax.documents(1).size()));
  for (const auto& [k, w] : once) EXPECT_NEAR(twice.get(k), w, 1e-12);
}

TEST(Centroids, OptionalAncestorPass) {
  const auto tax = make_taxonomy("/A\n/A/B\n", "d0\t/A\tkiwi\nd1\t/A/B\tapple\n");
  const auto off = build_centroids(tax, {0.7, 0.0});
  const auto on = build_centroids(tax, {0.7, 0.5});
  EXPECT_EQ(off.centroids[1].get("kiwi"), 0.0);
  EXPECT_GT(on.centroids[1].get("kiwi"), 0.0);
}

/// Hand-built model: wireless shopping, search engines, movies.
ClassifierModel toy_model(double tau) {
  auto tax = std::make_shared<Taxonomy>(make_taxonomy(
      "/Shopping\n/Shopping/Wireless\n/Shopping/Search\n/Shopping/Movies\n",
      "w1\t/Shopping/Wireless\tphone carrier plans and phone deals\n"
      "s1\t/Shopping/Search\tsearch engine spec comparison\n"
      "m1\t/Shopping/Movies\tfilm reviews and trailers\n"));
  auto centroids = build_centroids(*tax, {0.7, 0.0});
  EnrichedTaxonomy enriched;
  enriched.by_entity["galaxy nexus"] = {"galaxy nexus", {{1, 0.9}, {0, 0.06}, {2, 0.03}}};
  enriched.by_entity["google"] = {"google", {{2, 0.8}, {0, 0.1}}};
  enriched.index_categories(tax->size());
  PhraseLexicon lexicon;
  lexicon.insert("galaxy nexus");
  lexicon.insert("google");
  lexicon.insert("unattached thing");
  return make_classifier(tax, std::move(centroids), enriched, lexicon, {tau, 3, 4});
}

TEST(Score, EntityEvidenceWinsAtDefaultTau) {
  const auto model = toy_model(0.8);
  EXPECT_FALSE(model.lexicon.contains_label("unattached thing"));
  const auto c = score(model, "galaxy nexus spec");
  ASSERT_EQ(c.ranked.size(), 3u);
  EXPECT_EQ(model.taxonomy->path(c.ranked[0].first), "/Shopping/Wireless");
  ASSERT_EQ(c.detected_entities.size(), 1u);
  EXPECT_EQ(c.detected_entities[0].label, "galaxy nexus");
  // Term evidence alone ("spec") points at the search category.
  const auto terms_only = score(toy_model(0.0), "galaxy nexus spec");
  EXPECT_EQ(model.taxonomy->path(terms_only.ranked[0].first), "/Shopping/Search");
}

TEST(Score, TauZeroIsPureCentroidRanking) {
  const auto model = toy_model(0.0);
  const std::string text = "google phone deals and film";
  const auto c = score(model, text);
  const auto v = document_vector(text, model.idf);
  std::vector<std::pair<double, CategoryId>> expect;
  for (CategoryId t = 0; t < model.taxonomy->size(); ++t) {
    expect.emplace_back(-cosine(v, model.centroids[t]), t);
  }
  std::sort(expect.begin(), expect.end());
  for (std::size_t r = 0; r < c.ranked.size(); ++r) {
    EXPECT_EQ(c.ranked[r].first, expect[r].second);
    EXPECT_DOUBLE_EQ(c.ranked[r].second, -expect[r].first);
  }
}

TEST(Score, TauOneOnEntityOnlyTextFollowsAttachment) {
  const auto model = toy_model(1.0);
  const auto c = score(model, "galaxy nexus");
  const auto& att = model.entity_index.at("galaxy nexus");
  for (std::size_t r = 0; r < att.size(); ++r) {
    EXPECT_EQ(c.ranked[r].first, att[r].category);
    EXPECT_DOUBLE_EQ(c.ranked[r].second, att[r].probability);
  }
}

TEST(Score, EntityScoreAveragesDetections) {
  const auto model = toy_model(1.0);
  const auto s = score_components(model, "galaxy nexus versus google");
  EXPECT_DOUBLE_EQ(s.entity[0], (0.06 + 0.1) / 2);
  EXPECT_DOUBLE_EQ(s.entity[1], 0.9 / 2);
  EXPECT_DOUBLE_EQ(s.entity[2], (0.03 + 0.8) / 2);
  EXPECT_DOUBLE_EQ(s.entity[3], 0.0);
}

TEST(Score, EmptyTextScoresZero) {
  const auto model = toy_model(0.8);
  const auto c = score(model, "");
  for (const auto& [id, s] : c.ranked) EXPECT_EQ(s, 0.0);
  EXPECT_EQ(c.ranked[0].first, 0u);  // all tied: ascending id
}

TEST(Score, ScoresInUnitIntervalAndLinearInTau) {
  const auto model = toy_model(0.5);
  for (const std::string text : {"galaxy nexus phone", "google search engine", "film", "spec"}) {
    const auto s = score_components(model, text);
    const std::size_t n = s.term.size();
    for (std::size_t t = 0; t < n; ++t) {
      EXPECT_GE(s.term[t], 0.0);
      EXPECT_LE(s.term[t], 1.0);
      EXPECT_GE(s.entity[t], 0.0);
      EXPECT_LE(s.entity[t], 1.0);
    }
    const double h = 1e-3;
    for (int i = 0; i <= 10; ++i) {
      const double tau = 0.1 * i;
      const auto a = combine_scores(s, std::max(0.0, tau - h), n);
      const auto b = combine_scores(s, std::min(1.0, tau + h), n);
      std::vector<double> fa(n), fb(n);
      for (const auto& [id, v] : a.ranked) fa[id] = v;
      for (const auto& [id, v] : b.ranked) fb[id] = v;
      const double span = std::min(1.0, tau + h) - std::max(0.0, tau - h);
      for (std::size_t t = 0; t < n; ++t) {
        EXPECT_NEAR((fb[t] - fa[t]) / span, s.entity[t] - s.term[t], 1e-9);
      }
    }
  }
}

TEST(ClassifyStream, OneRecordPerLineAndDeterministic) {
  const auto model = toy_model(0.8);
  std::istringstream empty("");
  std::ostringstream none;
  classify_stream(model, empty, none, 1);
  EXPECT_TRUE(none.str().empty());

  const std::string input = "galaxy nexus spec\nfilm reviews\n\nsearch engine\n";
  std::istringstream in1(input), in2(input);
  std::ostringstream out1, out2;
  classify_stream(model, in1, out1, 1);
  classify_stream(model, in2, out2, 1);
  EXPECT_EQ(out1.str(), out2.str());
  const auto rows = out1.str();
  EXPECT_EQ(std::count(rows.begin(), rows.end(), '\n'), 4);
  EXPECT_EQ(rows.substr(0, rows.find('\n')), "1\t1\t/Shopping/Wireless\t" +
                                                  format_double(score(model, "galaxy nexus spec").ranked[0].second));
}

}  // namespace
}  // namespace taxenrich
