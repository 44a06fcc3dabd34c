#include "taxenrich/evaluation.hpp"

#include <algorithm>
#include <cstdint>
#include <fstream>
#include <iomanip>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "taxenrich/error.hpp"
#include "taxenrich/text.hpp"

namespace taxenrich {
namespace {

constexpr const char* kAnnotationStage = "evaluation.load_annotations";
constexpr const char* kResultsStage = "evaluation.load_results";

bool is_hit(Grade g, bool count_somewhat) {
  return g == Grade::relevant || (count_somewhat && g == Grade::somewhat);
}

}  // namespace

void AnnotationSet::set(std::string item, std::string path, Grade grade) {
  auto [it, inserted] = judgments_.insert_or_assign({item, std::move(path)}, grade);
  if (inserted) ++items_[std::move(item)];
}

Grade AnnotationSet::grade(std::string_view item, std::string_view path) const {
  const auto it = judgments_.find({std::string(item), std::string(path)});
  return it == judgments_.end() ? Grade::not_relevant : it->second;
}

bool AnnotationSet::has_item(std::string_view item) const {
  return items_.find(item) != items_.end();
}

AnnotationSet parse_annotations(std::istream& in) {
  AnnotationSet set;
  std::size_t line_no = 0;
  for (const auto& line : read_lines(in)) {
    ++line_no;
    if (trim(line).empty() || line.front() == '#') continue;
    const auto fields = split_tabs(line);
    std::uint64_t grade = 0;
    if (fields.size() != 3 || !parse_uint(trim(fields[2]), grade) || grade > 2) {
      throw DataError(kAnnotationStage,
                      "line " + std::to_string(line_no) + ": expected item TAB path TAB 0|1|2");
    }
    set.set(trim(fields[0]), trim(fields[1]), static_cast<Grade>(grade));
  }
  return set;
}

AnnotationSet load_annotations(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError(kAnnotationStage, "cannot open annotation file '" + path + "'");
  return parse_annotations(in);
}

AnnotationSet merge_majority(std::span<const AnnotationSet> annotators) {
  std::map<std::pair<std::string, std::string>, std::vector<int>> votes;
  for (const auto& a : annotators) {
    for (const auto& entry : a.judgments()) votes.try_emplace(entry.first);
  }
  AnnotationSet merged;
  for (auto& [key, grades] : votes) {
    for (const auto& a : annotators) grades.push_back(static_cast<int>(a.grade(key.first, key.second)));
    int counts[3] = {0, 0, 0};
    for (int g : grades) ++counts[g];
    int chosen = -1;
    for (int g = 0; g < 3; ++g) {
      if (2 * counts[g] > static_cast<int>(grades.size())) chosen = g;
    }
    if (chosen < 0) {
      std::sort(grades.begin(), grades.end());
      chosen = grades[(grades.size() - 1) / 2];
    }
    merged.set(key.first, key.second, static_cast<Grade>(chosen));
  }
  return merged;
}

double precision_at_k(std::span<const std::string> ranked, const AnnotationSet& judgments,
                      std::string_view item, std::size_t k, bool count_somewhat) {
  if (k < 1) throw std::invalid_argument("precision_at_k: k must be >= 1");
  std::size_t hits = 0;
  const std::size_t n = std::min(k, ranked.size());
  for (std::size_t i = 0; i < n; ++i) {
    if (is_hit(judgments.grade(item, ranked[i]), count_somewhat)) ++hits;
  }
  return static_cast<double>(hits) / static_cast<double>(k);
}

RunResults parse_results(std::istream& in) {
  std::map<std::string, std::vector<std::pair<std::uint64_t, std::string>>, std::less<>> rows;
  RunResults out;
  std::size_t line_no = 0;
  for (const auto& line : read_lines(in)) {
    ++line_no;
    if (line.empty()) continue;
    const auto fields = split_tabs(line);
    std::uint64_t rank = 0;
    double score = 0.0;
    if (fields.size() != 4 || fields[0].empty() || !parse_uint(fields[1], rank) || rank == 0 ||
        !parse_double(fields[3], score)) {
      throw DataError(kResultsStage, "line " + std::to_string(line_no) +
                                         ": expected item TAB rank TAB path TAB score");
    }
    auto [it, inserted] = rows.try_emplace(std::string(fields[0]));
    if (inserted) out.items.emplace_back(fields[0]);
    it->second.emplace_back(rank, std::string(fields[2]));
  }
  for (auto& [item, list] : rows) {
    std::stable_sort(list.begin(), list.end(),
                     [](const auto& a, const auto& b) { return a.first < b.first; });
    auto& paths = out.ranked[item];
    for (std::size_t i = 0; i < list.size(); ++i) {
      if (list[i].first != i + 1) {
        throw DataError(kResultsStage, "item '" + item + "': ranks must be 1..n without gaps");
      }
      paths.push_back(std::move(list[i].second));
    }
  }
  return out;
}

RunResults load_results(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError(kResultsStage, "cannot open results file '" + path + "'");
  return parse_results(in);
}

EvalReport evaluate(const RunResults& results, const AnnotationSet& judgments,
                    std::span<const std::size_t> ks, bool count_somewhat) {
  EvalReport report;
  report.count_somewhat = count_somewhat;
  report.n_items = results.items.size();
  for (const std::size_t k : ks) {
    if (k < 1) throw std::invalid_argument("evaluate: every k must be >= 1");
    report.precision_at[k] = 0.0;
  }
  for (const auto& item : results.items) {
    const auto& ranked = results.ranked.at(item);
    if (!judgments.has_item(item)) report.unjudged_items.push_back(item);
    auto& hits = report.per_item[item];
    for (const auto& path : ranked) hits.push_back(is_hit(judgments.grade(item, path), count_somewhat));
    for (auto& [k, sum] : report.precision_at) {
      sum += precision_at_k(ranked, judgments, item, k, count_somewhat);
    }
  }
  if (report.n_items > 0) {
    for (auto& entry : report.precision_at) entry.second /= static_cast<double>(report.n_items);
  }
  return report;
}

EvalReport evaluate_run(const std::string& results_file, const std::string& annotations_file,
                        std::span<const std::size_t> ks, bool count_somewhat) {
  return evaluate(load_results(results_file), load_annotations(annotations_file), ks,
                  count_somewhat);
}

void write_report(std::ostream& out, const EvalReport& report, std::string_view run_name) {
  std::ostringstream table;
  table << std::left << std::setw(12) << "Method";
  for (const auto& entry : report.precision_at) {
    table << std::setw(14) << ("Precision@" + std::to_string(entry.first));
  }
  table << '\n' << std::setw(12) << run_name;
  for (const auto& entry : report.precision_at) {
    std::ostringstream cell;
    cell << std::fixed << std::setprecision(3) << entry.second;
    table << std::setw(14) << cell.str();
  }
  out << table.str() << "\n\n";
  if (report.n_items == 0) out << "# warning: results contain no items\n";
  if (!report.unjudged_items.empty()) {
    out << "# warning: " << report.unjudged_items.size() << " of " << report.n_items
        << " items have no annotations\n";
  }
  out << "n_items=" << report.n_items << '\n';
  out << "n_unjudged=" << report.unjudged_items.size() << '\n';
  const double frac = report.n_items == 0 ? 0.0
                                          : static_cast<double>(report.unjudged_items.size()) /
                                                static_cast<double>(report.n_items);
  out << "unjudged_fraction=" << format_double(frac) << '\n';
  out << "count_somewhat=" << (report.count_somewhat ? "true" : "false") << '\n';
  for (const auto& [k, p] : report.precision_at) {
    out << "precision@" << k << '=' << format_double(p) << '\n';
  }
}

}  // namespace taxenrich
