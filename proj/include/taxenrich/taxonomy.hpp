#pragma once

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace taxenrich {

/// Dense index of a category, assigned in category-file order.
using CategoryId = std::size_t;

struct Category {
  CategoryId id = 0;
  std::string path;  // "/Shopping/Consumer_Electronics"
  std::optional<CategoryId> parent;
  std::vector<CategoryId> children;
  int depth = 0;
};

struct Document {
  std::string id;
  CategoryId category = 0;
  std::string text;
};

struct TaxonomyLoadReport {
  std::size_t documents_accepted = 0;
  std::size_t documents_skipped_empty = 0;
};

/// Rooted category tree with the documents filed under each category.
/// Categories are stored parent-before-child, so ascending ids are a
/// topological order and descending ids visit children before parents.
class Taxonomy {
 public:
  Taxonomy() = default;

  /// Builds the tree from category paths given parent-first. Throws
  /// DataError("taxonomy.load", ...) on orphan, duplicate, or second root.
  static Taxonomy from_paths(const std::vector<std::string>& paths);

  /// Files a document; throws DataError on an unknown category or a
  /// duplicate id within the category.
  void add_document(Document doc);

  std::size_t size() const noexcept { return categories_.size(); }
  bool empty() const noexcept { return categories_.empty(); }
  CategoryId root() const;
  const Category& category(CategoryId id) const;
  const std::vector<Category>& categories() const noexcept { return categories_; }
  std::optional<CategoryId> find(std::string_view path) const;
  const std::string& path(CategoryId id) const { return category(id).path; }
  bool is_leaf(CategoryId id) const { return category(id).children.empty(); }

  const std::vector<Document>& documents(CategoryId id) const;
  std::size_t document_count() const noexcept { return document_count_; }

  /// Strict descendants in pre-order.
  std::vector<CategoryId> descendants(CategoryId id) const;
  /// Documents filed in each category's subtree, indexed by id.
  std::vector<std::size_t> subtree_document_counts() const;

  friend bool operator==(const Taxonomy& a, const Taxonomy& b);

 private:
  std::vector<Category> categories_;
  std::vector<std::vector<Document>> docs_;
  std::unordered_map<std::string, CategoryId> by_path_;
  std::size_t document_count_ = 0;
};

/// Parses the category file (one path per line, '#' comments) and the
/// document file (doc_id TAB category_path TAB text). Rows whose text is
/// blank after unescaping and trimming are skipped and counted in `report`.
Taxonomy parse_taxonomy(std::istream& categories, std::istream& documents,
                        TaxonomyLoadReport* report = nullptr);
Taxonomy load_taxonomy(const std::string& category_file, const std::string& document_file,
                       TaxonomyLoadReport* report = nullptr);

/// Keeps categories at depth <= max_depth whose subtree holds at least
/// min_docs_subtree documents; repeats until stable so the result is a fixed
/// point. Ids are re-densified in original order. Throws DataError
/// ("taxonomy.filter") when the root itself would be removed.
Taxonomy filter_taxonomy(const Taxonomy& tax, int max_depth, std::size_t min_docs_subtree);

std::vector<CategoryId> descendants(const Taxonomy& tax, CategoryId id);

}  // namespace taxenrich
