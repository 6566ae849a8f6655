#pragma once

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "dtdkit/dtdkit.hpp"

#ifndef DTDKIT_DATA_DIR
#define DTDKIT_DATA_DIR "data"
#endif

namespace support {

using namespace dtdkit;

inline std::string data_path(std::string_view name) { return std::string(DTDKIT_DATA_DIR) + "/" + std::string(name); }

inline std::string read_data(std::string_view name) {
  std::ifstream f(data_path(name), std::ios::binary);
  if (!f) throw std::runtime_error("missing data file " + std::string(name));
  std::ostringstream s;
  s << f.rdbuf();
  return s.str();
}

/// Regular expression over the tag names of `tags`, compiled to a minimal DFA over tag ids.
inline Dfa rx(std::string_view text, const TagAlphabet& tags) {
  const SymbolResolver resolve = [&](std::string_view tok) -> Symbol { return tags.at(tok); };
  return regex_to_dfa(parse_regex(text, resolve), tags.size());
}

inline Regex rx_ast(std::string_view text, const TagAlphabet& tags) {
  const SymbolResolver resolve = [&](std::string_view tok) -> Symbol { return tags.at(tok); };
  return parse_regex(text, resolve);
}

/// Regular expression over letter tokens `a`, `/a`.
inline Dfa letter_rx(std::string_view text, TagAlphabet& tags) {
  const SymbolResolver resolve = [&](std::string_view tok) -> Symbol { return parse_letter(tok, tags, false).code(); };
  return regex_to_dfa(parse_regex(text, resolve, {false, true, {}}), tags.letter_count());
}

inline TaggedDfa letter_dfa(std::string_view text, std::vector<std::string> names) {
  TagAlphabet tags(names);
  auto d = letter_rx(text, tags);
  return {tags, d};
}

inline std::vector<std::string> words_of(const std::vector<Word>& ws, const TagAlphabet& tags) {
  std::vector<std::string> out;
  for (const auto& w : ws) {
    std::string s;
    for (auto x : w) s += (s.empty() ? "" : " ") + tags.name(x);
    out.push_back(s.empty() ? "~e~" : s);
  }
  return out;
}

inline std::vector<std::string> formatted(const std::vector<TaggedWord>& ws, const TagAlphabet& tags) {
  std::vector<std::string> out;
  for (const auto& w : ws) out.push_back(format_word(w, tags));
  return out;
}

inline std::vector<std::string> data_files(std::string_view ext) {
  std::vector<std::string> out;
  for (const auto& e : std::filesystem::directory_iterator(DTDKIT_DATA_DIR))
    if (e.path().extension() == ext) out.push_back(e.path().filename().string());
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace support
