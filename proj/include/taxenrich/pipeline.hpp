#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "taxenrich/classifier.hpp"
#include "taxenrich/concept_kb.hpp"
#include "taxenrich/evaluation.hpp"

namespace taxenrich {

inline constexpr int kModelFormatVersion = 1;

struct PipelineConfig {
  std::filesystem::path taxonomy;
  std::filesystem::path documents;
  std::filesystem::path kb_pairs;
  std::filesystem::path similarity_table;  // optional
  std::filesystem::path annotations;       // optional

  double alpha = 0.7;   // concept-vector merge ratio
  double beta = 0.004;  // typicality threshold
  double tau = 0.8;     // entity weight
  std::size_t k = 5;
  double alpha_centroid = 0.7;
  double alpha_up = 0.0;
  std::size_t max_len = 4;
  std::size_t min_docs_subtree = 0;
  int max_depth = 64;
  SimilarityMode similarity_mode = SimilarityMode::exact_match;
  bool count_somewhat = false;
  double temperature = 1.0;
  std::uint64_t min_entity_total = 1;

  /// Applies one key=value assignment; relative paths resolve against
  /// base_dir. Throws std::invalid_argument on unknown keys or bad values.
  void set(std::string_view key, std::string_view value,
           const std::filesystem::path& base_dir = {});
  /// Throws std::invalid_argument naming the first violated constraint.
  void validate() const;

  /// Parameter lines recorded in the model manifest.
  std::map<std::string, std::string> parameters() const;
};

/// key=value lines; '#' starts a comment line.
PipelineConfig parse_config(std::istream& in, const std::filesystem::path& base_dir = {});
PipelineConfig load_config(const std::filesystem::path& path);

struct BuildSummary {
  std::size_t categories = 0;
  std::size_t documents = 0;
  std::size_t documents_skipped_empty = 0;
  std::size_t kb_concepts = 0;
  std::size_t kb_entities = 0;
  std::size_t entities_typed = 0;
  std::size_t entities_attached = 0;
  std::size_t entities_skipped = 0;
  std::size_t empty_centroids = 0;
};

void write_summary(std::ostream& out, const BuildSummary& s);

/// Runs ingest, concept vectors, typing, enrichment and centroid building,
/// and writes the model directory. Errors are DataError tagged with the
/// failing stage.
BuildSummary build_model(const PipelineConfig& config, const std::filesystem::path& model_dir);

/// Names of the artifact files in a model directory, manifest excluded.
std::span<const std::string_view> model_artifacts();

std::string sha256_hex(std::string_view data);

/// Reads the manifest and verifies every checksum; throws DataError
/// ("model.load") on a missing file, corrupt manifest or mismatch.
std::map<std::string, std::string> verify_model(const std::filesystem::path& model_dir);
ClassifierModel load_model(const std::filesystem::path& model_dir);

/// Classification rows for every line of input_file, produced in memory.
std::string classify_to_string(const ClassifierModel& model, const std::filesystem::path& input_file,
                               std::size_t k);

struct TauPoint {
  double tau = 0.0;
  double precision = 0.0;
};

/// Precision@eval_k of the classifier for each tau, item ids being 1-based
/// input line numbers. Term and entity scores are computed once per line.
std::vector<TauPoint> sweep_tau(const ClassifierModel& model, std::span<const std::string> lines,
                                const AnnotationSet& annotations, std::span<const double> taus,
                                std::size_t eval_k, bool count_somewhat = false);

}  // namespace taxenrich
