#include "taxenrich/taxonomy.hpp"

#include <fstream>
#include <istream>
#include <unordered_set>

#include "taxenrich/error.hpp"
#include "taxenrich/text.hpp"

namespace taxenrich {
namespace {

constexpr const char* kLoadStage = "taxonomy.load";

}  // namespace

Taxonomy Taxonomy::from_paths(const std::vector<std::string>& paths) {
  Taxonomy tax;
  for (const auto& path : paths) {
    if (path.size() < 2 || path.front() != '/' || path.back() == '/' ||
        path.find("//") != std::string::npos) {
      throw DataError(kLoadStage, "malformed category path '" + path + "'");
    }
    if (tax.by_path_.contains(path)) {
      throw DataError(kLoadStage, "duplicate category '" + path + "'");
    }
    Category cat;
    cat.id = tax.categories_.size();
    cat.path = path;
    const auto slash = path.rfind('/');
    if (slash == 0) {
      if (!tax.categories_.empty()) {
        throw DataError(kLoadStage, "second root category '" + path + "'");
      }
    } else {
      const auto parent = tax.by_path_.find(path.substr(0, slash));
      if (parent == tax.by_path_.end()) {
        throw DataError(kLoadStage, "orphan category '" + path + "' (parent '" +
                                        path.substr(0, slash) + "' not defined before it)");
      }
      if (tax.categories_.empty()) {
        throw DataError(kLoadStage, "first category must be the root");
      }
      cat.parent = parent->second;
      cat.depth = tax.categories_[parent->second].depth + 1;
      tax.categories_[parent->second].children.push_back(cat.id);
    }
    tax.by_path_.emplace(path, cat.id);
    tax.categories_.push_back(std::move(cat));
  }
  tax.docs_.resize(tax.categories_.size());
  return tax;
}

void Taxonomy::add_document(Document doc) {
  if (doc.category >= categories_.size()) {
    throw DataError(kLoadStage, "document '" + doc.id + "' references unknown category");
  }
  auto& list = docs_[doc.category];
  for (const auto& existing : list) {
    if (existing.id == doc.id) {
      throw DataError(kLoadStage, "duplicate document id '" + doc.id + "' in category '" +
                                      categories_[doc.category].path + "'");
    }
  }
  list.push_back(std::move(doc));
  ++document_count_;
}

CategoryId Taxonomy::root() const {
  if (categories_.empty()) throw std::out_of_range("empty taxonomy has no root");
  return 0;
}

const Category& Taxonomy::category(CategoryId id) const {
  if (id >= categories_.size()) {
    throw std::out_of_range("unknown category id " + std::to_string(id));
  }
  return categories_[id];
}

std::optional<CategoryId> Taxonomy::find(std::string_view path) const {
  const auto it = by_path_.find(std::string(path));
  if (it == by_path_.end()) return std::nullopt;
  return it->second;
}

const std::vector<Document>& Taxonomy::documents(CategoryId id) const {
  category(id);
  return docs_[id];
}

std::vector<CategoryId> Taxonomy::descendants(CategoryId id) const {
  std::vector<CategoryId> out;
  std::vector<CategoryId> stack;
  const auto& kids = category(id).children;
  stack.assign(kids.rbegin(), kids.rend());
  while (!stack.empty()) {
    const CategoryId cur = stack.back();
    stack.pop_back();
    out.push_back(cur);
    const auto& ch = categories_[cur].children;
    stack.insert(stack.end(), ch.rbegin(), ch.rend());
  }
  return out;
}

std::vector<std::size_t> Taxonomy::subtree_document_counts() const {
  std::vector<std::size_t> counts(categories_.size(), 0);
  for (std::size_t i = categories_.size(); i-- > 0;) {
    counts[i] += docs_[i].size();
    if (categories_[i].parent) counts[*categories_[i].parent] += counts[i];
  }
  return counts;
}

bool operator==(const Taxonomy& a, const Taxonomy& b) {
  if (a.categories_.size() != b.categories_.size()) return false;
  for (std::size_t i = 0; i < a.categories_.size(); ++i) {
    const auto& x = a.categories_[i];
    const auto& y = b.categories_[i];
    if (x.path != y.path || x.parent != y.parent || x.children != y.children ||
        x.depth != y.depth) {
      return false;
    }
    if (a.docs_[i].size() != b.docs_[i].size()) return false;
    for (std::size_t j = 0; j < a.docs_[i].size(); ++j) {
      if (a.docs_[i][j].id != b.docs_[i][j].id || a.docs_[i][j].text != b.docs_[i][j].text) {
        return false;
      }
    }
  }
  return true;
}

Taxonomy parse_taxonomy(std::istream& categories, std::istream& documents,
                        TaxonomyLoadReport* report) {
  std::vector<std::string> paths;
  std::size_t line_no = 0;
  for (const auto& raw : read_lines(categories)) {
    ++line_no;
    const std::string line = trim(raw);
    if (line.empty() || line.front() == '#') continue;
    if (line.find('\t') != std::string::npos || line.front() != '/') {
      throw DataError(kLoadStage,
                      "category file line " + std::to_string(line_no) + ": malformed path");
    }
    paths.push_back(line);
  }
  if (paths.empty()) throw DataError(kLoadStage, "category file defines no categories");
  Taxonomy tax;
  try {
    tax = Taxonomy::from_paths(paths);
  } catch (const DataError& e) {
    throw DataError(kLoadStage, "category file: " + e.message());
  }

  TaxonomyLoadReport local;
  line_no = 0;
  for (const auto& line : read_lines(documents)) {
    ++line_no;
    if (line.empty()) continue;
    const auto fields = split_tabs(line);
    const std::string where = "document file line " + std::to_string(line_no);
    if (fields.size() != 3) {
      throw DataError(kLoadStage, where + ": expected 3 tab-separated columns, got " +
                                      std::to_string(fields.size()));
    }
    const std::string doc_id = trim(fields[0]);
    if (doc_id.empty()) throw DataError(kLoadStage, where + ": empty document id");
    const auto cat = tax.find(trim(fields[1]));
    if (!cat) {
      throw DataError(kLoadStage, where + ": unknown category '" + std::string(fields[1]) + "'");
    }
    std::string text = unescape_field(fields[2]);
    if (trim(text).empty()) {
      ++local.documents_skipped_empty;
      continue;
    }
    try {
      tax.add_document({doc_id, *cat, std::move(text)});
    } catch (const DataError& e) {
      throw DataError(kLoadStage, where + ": " + e.message());
    }
    ++local.documents_accepted;
  }
  if (report) *report = local;
  return tax;
}

Taxonomy load_taxonomy(const std::string& category_file, const std::string& document_file,
                       TaxonomyLoadReport* report) {
  std::ifstream cats(category_file, std::ios::binary);
  if (!cats) throw DataError(kLoadStage, "cannot open category file '" + category_file + "'");
  std::ifstream docs(document_file, std::ios::binary);
  if (!docs) throw DataError(kLoadStage, "cannot open document file '" + document_file + "'");
  return parse_taxonomy(cats, docs, report);
}

Taxonomy filter_taxonomy(const Taxonomy& tax, int max_depth, std::size_t min_docs_subtree) {
  if (max_depth < 1) throw std::invalid_argument("filter_taxonomy: max_depth must be >= 1");
  if (tax.empty()) throw DataError("taxonomy.filter", "empty taxonomy");

  std::vector<bool> keep(tax.size());
  for (CategoryId id = 0; id < tax.size(); ++id) keep[id] = tax.category(id).depth <= max_depth;

  // Dropping a category removes its documents from every ancestor's count,
  // so iterate until no further category falls below the threshold.
  bool changed = true;
  while (changed) {
    changed = false;
    std::vector<std::size_t> counts(tax.size(), 0);
    for (std::size_t i = tax.size(); i-- > 0;) {
      if (!keep[i]) continue;
      counts[i] += tax.documents(i).size();
      if (const auto p = tax.category(i).parent) counts[*p] += counts[i];
    }
    for (CategoryId id = 0; id < tax.size(); ++id) {
      if (keep[id] && counts[id] < min_docs_subtree) {
        keep[id] = false;
        changed = true;
      }
    }
  }
  if (!keep[tax.root()]) {
    throw DataError("taxonomy.filter", "pruning would remove the root category '" +
                                           tax.path(tax.root()) + "'");
  }

  std::vector<std::string> paths;
  for (CategoryId id = 0; id < tax.size(); ++id) {
    // A kept category always has a kept parent: counts and depth are monotone
    // along root paths.
    if (keep[id]) paths.push_back(tax.path(id));
  }
  Taxonomy out = Taxonomy::from_paths(paths);
  for (CategoryId id = 0; id < tax.size(); ++id) {
    if (!keep[id]) continue;
    const CategoryId new_id = *out.find(tax.path(id));
    for (const auto& doc : tax.documents(id)) out.add_document({doc.id, new_id, doc.text});
  }
  return out;
}

std::vector<CategoryId> descendants(const Taxonomy& tax, CategoryId id) {
  return tax.descendants(id);
}

}  // namespace taxenrich
