#pragma once

#include <cstddef>
#include <iosfwd>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace taxenrich {

enum class Grade { not_relevant = 0, somewhat = 1, relevant = 2 };

/// Graded judgments per (item, category path); unjudged pairs read as
/// not relevant.
class AnnotationSet {
 public:
  void set(std::string item, std::string path, Grade grade);
  Grade grade(std::string_view item, std::string_view path) const;
  bool has_item(std::string_view item) const;
  std::size_t size() const noexcept { return judgments_.size(); }
  const std::map<std::pair<std::string, std::string>, Grade>& judgments() const noexcept {
    return judgments_;
  }

 private:
  std::map<std::pair<std::string, std::string>, Grade> judgments_;
  std::map<std::string, std::size_t, std::less<>> items_;
};

/// item_id TAB category_path TAB grade (0 not, 1 somewhat, 2 relevant).
AnnotationSet parse_annotations(std::istream& in);
AnnotationSet load_annotations(const std::string& path);

/// Merges several annotators: the grade given by a strict majority, otherwise
/// the median grade. Pairs an annotator left out count as not relevant.
AnnotationSet merge_majority(std::span<const AnnotationSet> annotators);

/// Hits among the first k entries divided by k. Shorter lists count the
/// missing positions as misses.
double precision_at_k(std::span<const std::string> ranked, const AnnotationSet& judgments,
                      std::string_view item, std::size_t k, bool count_somewhat = false);

/// Ranked category paths per item, in order of first appearance.
struct RunResults {
  std::vector<std::string> items;
  std::map<std::string, std::vector<std::string>, std::less<>> ranked;
};

/// Parses item TAB rank TAB category_path TAB score rows.
RunResults parse_results(std::istream& in);
RunResults load_results(const std::string& path);

struct EvalReport {
  std::map<std::size_t, double> precision_at;
  std::map<std::string, std::vector<bool>> per_item;  // hit flags per position
  std::size_t n_items = 0;
  std::vector<std::string> unjudged_items;
  bool count_somewhat = false;
};

EvalReport evaluate(const RunResults& results, const AnnotationSet& judgments,
                    std::span<const std::size_t> ks, bool count_somewhat = false);
EvalReport evaluate_run(const std::string& results_file, const std::string& annotations_file,
                        std::span<const std::size_t> ks, bool count_somewhat = false);

/// Text table followed by key=value lines.
void write_report(std::ostream& out, const EvalReport& report, std::string_view run_name = "run");

}  // namespace taxenrich
