#include "taxenrich/pipeline.hpp"

#include <openssl/evp.h>

#include <array>
#include <cmath>
#include <fstream>
#include <memory>
#include <sstream>
#include <stdexcept>

#include "taxenrich/concept_vectors.hpp"
#include "taxenrich/entity_typing.hpp"
#include "taxenrich/enrichment.hpp"
#include "taxenrich/error.hpp"
#include "taxenrich/taxonomy.hpp"
#include "taxenrich/text.hpp"

namespace taxenrich {
namespace fs = std::filesystem;

namespace {

constexpr const char* kModelStage = "model.load";
constexpr const char* kManifest = "manifest.txt";

constexpr std::array<std::string_view, 9> kArtifacts = {
    "taxonomy.tsv",     "base_vectors.tsv", "enriched_vectors.tsv",
    "typed_entities.tsv", "attachments.tsv", "skipped_entities.txt",
    "centroids.tsv",    "idf.tsv",          "lexicon.tsv"};

double to_real(std::string_view key, std::string_view value) {
  double v = 0.0;
  if (!parse_double(trim(value), v) || !std::isfinite(v)) {
    throw std::invalid_argument("config key '" + std::string(key) + "': expected a number");
  }
  return v;
}

std::uint64_t to_count(std::string_view key, std::string_view value) {
  std::uint64_t v = 0;
  if (!parse_uint(trim(value), v)) {
    throw std::invalid_argument("config key '" + std::string(key) +
                                "': expected a non-negative integer");
  }
  return v;
}

bool to_flag(std::string_view key, std::string_view value) {
  const auto v = trim(value);
  if (v == "true" || v == "1" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "no") return false;
  throw std::invalid_argument("config key '" + std::string(key) + "': expected true or false");
}

fs::path resolve(const fs::path& base, std::string_view value) {
  fs::path p{trim(value)};
  if (p.empty() || p.is_absolute() || base.empty()) return p;
  return base / p;
}

/// Runs `fn`, re-tagging anything but DataError with `stage`.
template <typename Fn>
auto run_stage(const char* stage, Fn&& fn) {
  try {
    return fn();
  } catch (const DataError&) {
    throw;
  } catch (const std::exception& e) {
    throw DataError(stage, e.what());
  }
}

std::string read_file(const fs::path& path, const char* stage) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError(stage, "cannot open '" + path.string() + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const fs::path& path, std::string_view contents) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw DataError("model.write", "cannot write '" + path.string() + "'");
  out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
  if (!out) throw DataError("model.write", "write failed for '" + path.string() + "'");
}

}  // namespace

void PipelineConfig::set(std::string_view key, std::string_view value, const fs::path& base_dir) {
  if (key == "taxonomy") {
    taxonomy = resolve(base_dir, value);
  } else if (key == "documents") {
    documents = resolve(base_dir, value);
  } else if (key == "kb_pairs") {
    kb_pairs = resolve(base_dir, value);
  } else if (key == "similarity_table") {
    similarity_table = resolve(base_dir, value);
  } else if (key == "annotations") {
    annotations = resolve(base_dir, value);
  } else if (key == "alpha") {
    alpha = to_real(key, value);
  } else if (key == "beta") {
    beta = to_real(key, value);
  } else if (key == "tau") {
    tau = to_real(key, value);
  } else if (key == "k") {
    k = to_count(key, value);
  } else if (key == "alpha_centroid") {
    alpha_centroid = to_real(key, value);
  } else if (key == "alpha_up") {
    alpha_up = to_real(key, value);
  } else if (key == "max_len") {
    max_len = to_count(key, value);
  } else if (key == "min_docs_subtree") {
    min_docs_subtree = to_count(key, value);
  } else if (key == "max_depth") {
    max_depth = static_cast<int>(to_count(key, value));
  } else if (key == "similarity_mode") {
    similarity_mode = parse_similarity_mode(trim(value));
  } else if (key == "count_somewhat") {
    count_somewhat = to_flag(key, value);
  } else if (key == "temperature") {
    temperature = to_real(key, value);
  } else if (key == "min_entity_total") {
    min_entity_total = to_count(key, value);
  } else {
    throw std::invalid_argument("unknown config key '" + std::string(key) + "'");
  }
}

void PipelineConfig::validate() const {
  if (!(alpha >= 0.0 && alpha <= 1.0)) throw std::invalid_argument("alpha must lie in [0,1]");
  if (!(tau >= 0.0 && tau <= 1.0)) throw std::invalid_argument("tau must lie in [0,1]");
  if (!(beta >= 0.0)) throw std::invalid_argument("beta must be >= 0");
  if (k < 1) throw std::invalid_argument("k must be >= 1");
  if (!(alpha_centroid >= 0.0 && alpha_centroid <= 1.0)) {
    throw std::invalid_argument("alpha_centroid must lie in [0,1]");
  }
  if (!(alpha_up >= 0.0)) throw std::invalid_argument("alpha_up must be >= 0");
  if (max_len < 1) throw std::invalid_argument("max_len must be >= 1");
  if (max_depth < 1) throw std::invalid_argument("max_depth must be >= 1");
  if (!(temperature > 0.0)) throw std::invalid_argument("temperature must be > 0");
  if (min_entity_total < 1) throw std::invalid_argument("min_entity_total must be >= 1");
  if (taxonomy.empty() || documents.empty() || kb_pairs.empty()) {
    throw std::invalid_argument("taxonomy, documents and kb_pairs paths are required");
  }
  if (similarity_mode == SimilarityMode::table && similarity_table.empty()) {
    throw std::invalid_argument("similarity_mode=table requires similarity_table");
  }
}

std::map<std::string, std::string> PipelineConfig::parameters() const {
  return {
      {"alpha", format_double(alpha)},
      {"alpha_centroid", format_double(alpha_centroid)},
      {"alpha_up", format_double(alpha_up)},
      {"beta", format_double(beta)},
      {"count_somewhat", count_somewhat ? "true" : "false"},
      {"k", std::to_string(k)},
      {"max_depth", std::to_string(max_depth)},
      {"max_len", std::to_string(max_len)},
      {"min_docs_subtree", std::to_string(min_docs_subtree)},
      {"min_entity_total", std::to_string(min_entity_total)},
      {"similarity_mode", std::string(to_string(similarity_mode))},
      {"tau", format_double(tau)},
      {"temperature", format_double(temperature)},
  };
}

PipelineConfig parse_config(std::istream& in, const fs::path& base_dir) {
  PipelineConfig config;
  std::size_t line_no = 0;
  for (const auto& raw : read_lines(in)) {
    ++line_no;
    const auto line = trim(raw);
    if (line.empty() || line.front() == '#') continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw std::invalid_argument("config line " + std::to_string(line_no) +
                                  ": expected key=value");
    }
    config.set(trim(std::string_view(line).substr(0, eq)),
               std::string_view(line).substr(eq + 1), base_dir);
  }
  return config;
}

PipelineConfig load_config(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::invalid_argument("cannot open config file '" + path.string() + "'");
  return parse_config(in, path.parent_path());
}

void write_summary(std::ostream& out, const BuildSummary& s) {
  out << "categories=" << s.categories << '\n'
      << "documents=" << s.documents << '\n'
      << "documents_skipped_empty=" << s.documents_skipped_empty << '\n'
      << "kb_concepts=" << s.kb_concepts << '\n'
      << "kb_entities=" << s.kb_entities << '\n'
      << "entities_typed=" << s.entities_typed << '\n'
      << "entities_attached=" << s.entities_attached << '\n'
      << "entities_skipped=" << s.entities_skipped << '\n'
      << "empty_centroids=" << s.empty_centroids << '\n';
}

std::span<const std::string_view> model_artifacts() { return kArtifacts; }

std::string sha256_hex(std::string_view data) {
  std::array<unsigned char, EVP_MAX_MD_SIZE> digest{};
  unsigned int len = 0;
  if (EVP_Digest(data.data(), data.size(), digest.data(), &len, EVP_sha256(), nullptr) != 1) {
    throw std::runtime_error("sha256 digest failed");
  }
  static constexpr char kHex[] = "0123456789abcdef";
  std::string out;
  out.reserve(len * 2);
  for (unsigned int i = 0; i < len; ++i) {
    out.push_back(kHex[digest[i] >> 4]);
    out.push_back(kHex[digest[i] & 0xF]);
  }
  return out;
}

BuildSummary build_model(const PipelineConfig& config, const fs::path& model_dir) {
  run_stage("config", [&] {
    config.validate();
    return 0;
  });
  BuildSummary summary;

  TaxonomyLoadReport load_report;
  const Taxonomy loaded = run_stage("taxonomy.load", [&] {
    return load_taxonomy(config.taxonomy.string(), config.documents.string(), &load_report);
  });
  auto tax = std::make_shared<const Taxonomy>(run_stage("taxonomy.filter", [&] {
    return filter_taxonomy(loaded, config.max_depth, config.min_docs_subtree);
  }));
  summary.categories = tax->size();
  summary.documents = tax->document_count();
  summary.documents_skipped_empty = load_report.documents_skipped_empty;

  const ConceptKB kb =
      run_stage("concept_kb.load", [&] { return load_kb(config.kb_pairs.string()); });
  summary.kb_concepts = kb.concept_count();
  summary.kb_entities = kb.entity_count();
  ConceptSimilarity sim(config.similarity_mode);
  if (config.similarity_mode == SimilarityMode::table) {
    sim = run_stage("concept_kb.load_similarity",
                    [&] { return load_similarity_table(config.similarity_table.string()); });
  }

  const ConceptStats stats =
      run_stage("concept_vectors.collect_stats", [&] { return collect_stats(*tax, kb, config.max_len); });
  const auto base = base_vectors(stats, *tax);
  const auto enriched_vectors = run_stage("concept_vectors.enrich", [&] {
    return enrich_vectors(base, *tax, config.alpha);
  });

  const TypedEntities typed =
      run_stage("entity_typing", [&] { return type_entities(kb, config.beta); });
  summary.entities_typed = typed.size();

  const EnrichedTaxonomy enriched = run_stage("enrichment", [&] {
    return attach_entities(*tax, enriched_vectors, typed, sim, kb,
                           AttachOptions{config.k, config.temperature});
  });
  summary.entities_attached = enriched.by_entity.size();
  summary.entities_skipped = enriched.skipped.size();

  CentroidSet centroids = run_stage("classifier.build_centroids", [&] {
    return build_centroids(*tax, CentroidParams{config.alpha_centroid, config.alpha_up});
  });
  summary.empty_centroids = centroids.empty_categories.size();

  const PhraseLexicon entity_lexicon = build_entity_lexicon(kb, config.min_entity_total);
  const IdfTable idf = centroids.idf;
  const ClassifierModel model = run_stage("classifier.build", [&] {
    return make_classifier(tax, std::move(centroids), enriched, entity_lexicon,
                           ClassifierParams{config.tau, config.k, config.max_len});
  });

  std::map<std::string, std::string, std::less<>> files;
  {
    std::ostringstream s;
    for (CategoryId t = 0; t < tax->size(); ++t) {
      s << tax->path(t) << '\t' << tax->documents(t).size() << '\n';
    }
    files["taxonomy.tsv"] = s.str();
  }
  {
    std::ostringstream s;
    write_vector_dump(s, *tax, base);
    files["base_vectors.tsv"] = s.str();
  }
  {
    std::ostringstream s;
    write_vector_dump(s, *tax, enriched_vectors);
    files["enriched_vectors.tsv"] = s.str();
  }
  {
    std::ostringstream s;
    write_typed_dump(s, typed);
    files["typed_entities.tsv"] = s.str();
  }
  {
    std::ostringstream s;
    write_attachments(s, *tax, enriched);
    files["attachments.tsv"] = s.str();
  }
  {
    std::ostringstream s;
    for (const auto& name : enriched.skipped) s << name << '\n';
    files["skipped_entities.txt"] = s.str();
  }
  {
    std::ostringstream s;
    write_vector_dump(s, *tax, model.centroids);
    files["centroids.tsv"] = s.str();
  }
  {
    std::ostringstream s;
    for (const auto& [term, w] : idf) s << term << '\t' << format_double(w) << '\n';
    files["idf.tsv"] = s.str();
  }
  {
    std::ostringstream s;
    for (const auto& entry : model.lexicon.entries()) s << entry.label << '\t' << entry.tokens << '\n';
    files["lexicon.tsv"] = s.str();
  }

  std::ostringstream manifest;
  manifest << "format_version=" << kModelFormatVersion << '\n';
  manifest << "stopwords_version=" << stopword_list_version() << '\n';
  for (const auto& [key, value] : config.parameters()) manifest << "param." << key << '=' << value << '\n';
  const std::pair<const char*, const fs::path*> inputs[] = {
      {"documents", &config.documents},
      {"kb_pairs", &config.kb_pairs},
      {"similarity_table", &config.similarity_table},
      {"taxonomy", &config.taxonomy},
  };
  for (const auto& [name, path] : inputs) {
    if (path->empty() || (std::string_view(name) == "similarity_table" &&
                          config.similarity_mode != SimilarityMode::table)) {
      continue;
    }
    manifest << "input." << name << ".sha256=" << sha256_hex(read_file(*path, "model.write")) << '\n';
  }
  for (const auto& [name, contents] : files) {
    manifest << "file." << name << ".sha256=" << sha256_hex(contents) << '\n';
  }

  std::error_code ec;
  fs::create_directories(model_dir, ec);
  if (ec) throw DataError("model.write", "cannot create '" + model_dir.string() + "': " + ec.message());
  // Removing the old manifest first means an interrupted rebuild never
  // leaves a manifest that vouches for stale files.
  fs::remove(model_dir / kManifest, ec);
  for (const auto& [name, contents] : files) write_file(model_dir / name, contents);
  write_file(model_dir / kManifest, manifest.str());
  return summary;
}

std::map<std::string, std::string> verify_model(const fs::path& model_dir) {
  const std::string text = read_file(model_dir / kManifest, kModelStage);
  std::map<std::string, std::string> manifest;
  std::istringstream in(text);
  std::size_t line_no = 0;
  for (const auto& line : read_lines(in)) {
    ++line_no;
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos || eq == 0) {
      throw DataError(kModelStage, "corrupt manifest at line " + std::to_string(line_no));
    }
    manifest[line.substr(0, eq)] = line.substr(eq + 1);
  }
  if (manifest["format_version"] != std::to_string(kModelFormatVersion)) {
    throw DataError(kModelStage, "unsupported or missing format_version in manifest");
  }
  for (const auto name : kArtifacts) {
    const auto key = "file." + std::string(name) + ".sha256";
    const auto it = manifest.find(key);
    if (it == manifest.end()) throw DataError(kModelStage, "manifest lacks checksum for " + std::string(name));
    const auto actual = sha256_hex(read_file(model_dir / name, kModelStage));
    if (actual != it->second) {
      throw DataError(kModelStage, "checksum mismatch for " + std::string(name));
    }
  }
  return manifest;
}

ClassifierModel load_model(const fs::path& model_dir) {
  const auto manifest = verify_model(model_dir);
  auto param = [&](const std::string& key) -> std::string {
    const auto it = manifest.find("param." + key);
    if (it == manifest.end()) throw DataError(kModelStage, "manifest lacks param." + key);
    return it->second;
  };

  ClassifierModel model;
  try {
    PipelineConfig p;
    p.set("tau", param("tau"));
    p.set("k", param("k"));
    p.set("max_len", param("max_len"));
    model.params = ClassifierParams{p.tau, p.k, p.max_len};
  } catch (const std::invalid_argument& e) {
    throw DataError(kModelStage, e.what());
  }

  std::vector<std::string> paths;
  {
    std::istringstream in(read_file(model_dir / "taxonomy.tsv", kModelStage));
    for (const auto& line : read_lines(in)) {
      if (line.empty()) continue;
      paths.emplace_back(split_tabs(line).front());
    }
  }
  if (paths.empty()) throw DataError(kModelStage, "model has no categories");
  try {
    model.taxonomy = std::make_shared<const Taxonomy>(Taxonomy::from_paths(paths));
  } catch (const DataError& e) {
    throw DataError(kModelStage, e.message());
  }
  const Taxonomy& tax = *model.taxonomy;

  {
    std::istringstream in(read_file(model_dir / "centroids.tsv", kModelStage));
    model.centroids = read_vector_dump(in, tax, kModelStage);
  }
  {
    std::istringstream in(read_file(model_dir / "idf.tsv", kModelStage));
    std::size_t line_no = 0;
    for (const auto& line : read_lines(in)) {
      ++line_no;
      if (line.empty()) continue;
      const auto fields = split_tabs(line);
      double w = 0.0;
      if (fields.size() != 2 || !parse_double(fields[1], w)) {
        throw DataError(kModelStage, "idf.tsv line " + std::to_string(line_no) + ": malformed");
      }
      model.idf.emplace(std::string(fields[0]), w);
    }
  }
  EnrichedTaxonomy enriched;
  {
    std::istringstream in(read_file(model_dir / "attachments.tsv", kModelStage));
    enriched = read_attachments(in, tax, kModelStage);
  }
  {
    std::istringstream in(read_file(model_dir / "lexicon.tsv", kModelStage));
    for (const auto& line : read_lines(in)) {
      if (line.empty()) continue;
      const std::string label(split_tabs(line).front());
      const auto it = enriched.by_entity.find(label);
      if (it == enriched.by_entity.end()) {
        throw DataError(kModelStage, "lexicon entity '" + label + "' has no attachments");
      }
      model.lexicon.insert(label);
      model.entity_index.emplace(label, it->second.ranked);
    }
  }
  return model;
}

std::string classify_to_string(const ClassifierModel& model, const fs::path& input_file,
                               std::size_t k) {
  std::ostringstream out;
  classify_file(model, input_file.string(), out, k);
  return out.str();
}

std::vector<TauPoint> sweep_tau(const ClassifierModel& model, std::span<const std::string> lines,
                                const AnnotationSet& annotations, std::span<const double> taus,
                                std::size_t eval_k, bool count_somewhat) {
  if (eval_k < 1) throw std::invalid_argument("sweep_tau: eval_k must be >= 1");
  std::vector<ScoreBreakdown> cached;
  cached.reserve(lines.size());
  for (const auto& line : lines) cached.push_back(score_components(model, line));

  std::vector<TauPoint> out;
  for (const double tau : taus) {
    if (!(tau >= 0.0 && tau <= 1.0)) throw std::invalid_argument("sweep_tau: tau outside [0,1]");
    double sum = 0.0;
    for (std::size_t i = 0; i < cached.size(); ++i) {
      const auto c = combine_scores(cached[i], tau, eval_k);
      std::vector<std::string> ranked;
      for (const auto& [id, s] : c.ranked) ranked.push_back(model.taxonomy->path(id));
      sum += precision_at_k(ranked, annotations, std::to_string(i + 1), eval_k, count_somewhat);
    }
    out.push_back({tau, cached.empty() ? 0.0 : sum / static_cast<double>(cached.size())});
  }
  return out;
}

}  // namespace taxenrich
