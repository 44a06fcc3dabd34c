#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace taxenrich {

/// Canonical form shared by taxonomy labels and KB strings: ASCII lower-case,
/// underscores read as spaces, trimmed, internal whitespace collapsed.
std::string normalize_key(std::string_view s);

/// Lower-cased word tokens. Token bytes are ASCII alphanumerics and any byte
/// >= 0x80 (UTF-8 continuation of non-ASCII letters); an apostrophe is kept
/// only between two token bytes ("don't" stays one token).
std::vector<std::string> tokenize(std::string_view text);

std::string trim(std::string_view s);
std::vector<std::string_view> split_tabs(std::string_view line);

/// "\n", "\t" and "\\" escapes used by the tab-separated file formats.
std::string unescape_field(std::string_view s);
std::string escape_field(std::string_view s);

/// Shortest representation that parses back to the same double.
std::string format_double(double v);

/// Strict parse of the whole field; false on trailing junk or empty input.
bool parse_double(std::string_view s, double& out);
bool parse_uint(std::string_view s, std::uint64_t& out);

struct PhraseMatch {
  std::string label;
  std::size_t first_token = 0;
  std::size_t end_token = 0;  // one past the last matched token

  friend bool operator==(const PhraseMatch&, const PhraseMatch&) = default;
};

/// Dictionary of multi-token phrases matched greedily, longest first, over a
/// token stream. Phrases are keyed by their tokenization so a label such as
/// "multi-touch phone" matches the tokens ["multi", "touch", "phone"].
class PhraseLexicon {
 public:
  struct Entry {
    std::string label;
    std::size_t tokens = 0;
  };

  /// Returns false when the label has no tokens or its token key is taken.
  bool insert(std::string_view label);

  bool contains_label(std::string_view label) const;
  std::size_t size() const noexcept { return entries_.size(); }
  bool empty() const noexcept { return entries_.empty(); }
  std::size_t max_tokens() const noexcept { return max_tokens_; }
  const std::vector<Entry>& entries() const noexcept { return entries_; }

  /// Non-overlapping matches, scanning left to right and preferring the
  /// longest phrase of at most `max_len` tokens at each position.
  std::vector<PhraseMatch> match(std::span<const std::string> tokens,
                                 std::size_t max_len) const;

 private:
  std::unordered_map<std::string, std::size_t> by_key_;
  std::unordered_map<std::string, std::size_t> by_label_;
  std::vector<Entry> entries_;
  std::size_t max_tokens_ = 0;
};

/// Reads all lines of a file, throwing DataError(stage, ...) if it cannot be
/// opened. A trailing '\r' is stripped from each line.
std::vector<std::string> read_lines(const std::string& path, const std::string& stage);
std::vector<std::string> read_lines(std::istream& in);

}  // namespace taxenrich
