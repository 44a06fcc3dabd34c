#include "taxenrich/text.hpp"

#include <charconv>
#include <fstream>
#include <istream>

#include "taxenrich/error.hpp"

namespace taxenrich {
namespace {

bool is_token_byte(unsigned char ch) {
  return (ch >= '0' && ch <= '9') || (ch >= 'a' && ch <= 'z') || (ch >= 'A' && ch <= 'Z') ||
         ch >= 0x80;
}

char ascii_lower(char ch) {
  return (ch >= 'A' && ch <= 'Z') ? static_cast<char>(ch - 'A' + 'a') : ch;
}

bool is_space(char ch) {
  return ch == ' ' || ch == '\t' || ch == '\n' || ch == '\r' || ch == '\f' || ch == '\v';
}

}  // namespace

std::string normalize_key(std::string_view s) {
  std::string out;
  out.reserve(s.size());
  bool pending_space = false;
  for (char ch : s) {
    if (ch == '_' || is_space(ch)) {
      pending_space = !out.empty();
      continue;
    }
    if (pending_space) {
      out.push_back(' ');
      pending_space = false;
    }
    out.push_back(ascii_lower(ch));
  }
  return out;
}

std::vector<std::string> tokenize(std::string_view text) {
  std::vector<std::string> tokens;
  std::string current;
  for (std::size_t i = 0; i < text.size(); ++i) {
    const auto ch = static_cast<unsigned char>(text[i]);
    if (is_token_byte(ch)) {
      current.push_back(ascii_lower(static_cast<char>(ch)));
    } else if (ch == '\'' && !current.empty() && i + 1 < text.size() &&
               is_token_byte(static_cast<unsigned char>(text[i + 1]))) {
      current.push_back('\'');
    } else if (!current.empty()) {
      tokens.push_back(std::move(current));
      current.clear();
    }
  }
  if (!current.empty()) tokens.push_back(std::move(current));
  return tokens;
}

std::string trim(std::string_view s) {
  std::size_t b = 0;
  std::size_t e = s.size();
  while (b < e && is_space(s[b])) ++b;
  while (e > b && is_space(s[e - 1])) --e;
  return std::string(s.substr(b, e - b));
}

std::vector<std::string_view> split_tabs(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  while (true) {
    const auto pos = line.find('\t', start);
    if (pos == std::string_view::npos) {
      fields.push_back(line.substr(start));
      return fields;
    }
    fields.push_back(line.substr(start, pos - start));
    start = pos + 1;
  }
}

std::string unescape_field(std::string_view s) {
  std::string out;
  out.reserve(s.size());
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s[i] == '\\' && i + 1 < s.size()) {
      const char next = s[i + 1];
      if (next == 'n') {
        out.push_back('\n');
        ++i;
        continue;
      }
      if (next == 't') {
        out.push_back('\t');
        ++i;
        continue;
      }
      if (next == '\\') {
        out.push_back('\\');
        ++i;
        continue;
      }
    }
    out.push_back(s[i]);
  }
  return out;
}

std::string escape_field(std::string_view s) {
  std::string out;
  out.reserve(s.size());
  for (char ch : s) {
    switch (ch) {
      case '\n': out += "\\n"; break;
      case '\t': out += "\\t"; break;
      case '\\': out += "\\\\"; break;
      default: out.push_back(ch);
    }
  }
  return out;
}

std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

bool parse_double(std::string_view s, double& out) {
  if (s.empty()) return false;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), out);
  return res.ec == std::errc() && res.ptr == s.data() + s.size();
}

bool parse_uint(std::string_view s, std::uint64_t& out) {
  if (s.empty()) return false;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), out);
  return res.ec == std::errc() && res.ptr == s.data() + s.size();
}

bool PhraseLexicon::insert(std::string_view label) {
  const auto tokens = tokenize(label);
  if (tokens.empty()) return false;
  std::string key;
  for (const auto& t : tokens) {
    if (!key.empty()) key.push_back(' ');
    key += t;
  }
  if (by_key_.contains(key)) return false;
  const std::size_t index = entries_.size();
  entries_.push_back({std::string(label), tokens.size()});
  by_key_.emplace(std::move(key), index);
  by_label_.emplace(std::string(label), index);
  if (tokens.size() > max_tokens_) max_tokens_ = tokens.size();
  return true;
}

bool PhraseLexicon::contains_label(std::string_view label) const {
  return by_label_.contains(std::string(label));
}

std::vector<PhraseMatch> PhraseLexicon::match(std::span<const std::string> tokens,
                                              std::size_t max_len) const {
  std::vector<PhraseMatch> matches;
  const std::size_t window = std::min(max_len, max_tokens_);
  std::string key;
  std::size_t i = 0;
  while (i < tokens.size()) {
    std::size_t len = std::min(window, tokens.size() - i);
    bool found = false;
    for (; len >= 1; --len) {
      key.clear();
      for (std::size_t j = i; j < i + len; ++j) {
        if (j > i) key.push_back(' ');
        key += tokens[j];
      }
      const auto it = by_key_.find(key);
      if (it != by_key_.end()) {
        matches.push_back({entries_[it->second].label, i, i + len});
        i += len;
        found = true;
        break;
      }
    }
    if (!found) ++i;
  }
  return matches;
}

std::vector<std::string> read_lines(std::istream& in) {
  std::vector<std::string> lines;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    lines.push_back(std::move(line));
  }
  return lines;
}

std::vector<std::string> read_lines(const std::string& path, const std::string& stage) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError(stage, "cannot open file '" + path + "'");
  return read_lines(in);
}

}  // namespace taxenrich
