#pragma once

// DTD fragments: <!DOCTYPE root [ <!ELEMENT name content> ... ]>.
// Children content models use `,` `|` `*` `+` `?`; EMPTY is ε, ANY is the
// star of all declared elements, #PCDATA contributes ε. ATTLIST, ENTITY,
// NOTATION, comments and processing instructions are skipped.

#include <cctype>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "dtdkit/error.hpp"
#include "dtdkit/regex.hpp"
#include "dtdkit/xml_grammar.hpp"

namespace dtdkit {

namespace detail {

class DtdScanner {
 public:
  explicit DtdScanner(std::string_view text) : text_(text) {}

  struct Element {
    std::string name;
    std::string model;
    SourcePos name_pos;
    SourcePos model_pos;
  };

  void scan() {
    skip_space_and_comments();
    while (!at_end()) {
      if (starts("<!DOCTYPE")) {
        if (root_) fail("duplicate DOCTYPE");
        pos_ += 9;
        skip_space();
        root_pos_ = where();
        root_ = read_name("a root element name after DOCTYPE");
        skip_space();
        if (starts("[")) {
          ++pos_;
          in_subset_ = true;
        } else {
          expect('>');
        }
      } else if (starts("<!ELEMENT")) {
        pos_ += 9;
        skip_space();
        Element e;
        e.name_pos = where();
        e.name = read_name("an element name");
        skip_space();
        e.model_pos = where();
        const std::size_t start = pos_;
        while (!at_end() && text_[pos_] != '>') ++pos_;
        if (at_end()) fail("expected '>' closing ELEMENT");
        e.model = std::string(trim(text_.substr(start, pos_ - start)));
        if (e.model.empty()) fail("expected a content model");
        ++pos_;
        for (const auto& d : elements_)
          if (d.name == e.name) throw parse_error(e.name_pos, "duplicate ELEMENT '" + e.name + "'");
        elements_.push_back(std::move(e));
      } else if (starts("<!ATTLIST") || starts("<!ENTITY") || starts("<!NOTATION")) {
        skip_declaration();
      } else if (starts("<?")) {
        const auto end = text_.find("?>", pos_);
        if (end == std::string_view::npos) fail("unterminated processing instruction");
        pos_ = end + 2;
      } else if (in_subset_ && starts("]")) {
        ++pos_;
        skip_space();
        expect('>');
        in_subset_ = false;
      } else {
        fail("expected '<!DOCTYPE', '<!ELEMENT', '<!ATTLIST', '<!ENTITY' or ']>'");
      }
      skip_space_and_comments();
    }
    if (in_subset_) fail("expected ']>' closing the DOCTYPE");
  }

  const std::optional<std::string>& root() const { return root_; }
  SourcePos root_pos() const { return root_pos_; }
  const std::vector<Element>& elements() const { return elements_; }

 private:
  bool at_end() const { return pos_ >= text_.size(); }
  bool starts(std::string_view s) const { return text_.substr(pos_, s.size()) == s; }
  static std::string_view trim(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return s;
  }
  SourcePos where() const {
    SourcePos p;
    for (std::size_t i = 0; i < pos_; ++i) {
      if (text_[i] == '\n') {
        ++p.line;
        p.column = 1;
      } else {
        ++p.column;
      }
    }
    return p;
  }
  [[noreturn]] void fail(const std::string& msg) const { throw parse_error(where(), msg); }
  void skip_space() {
    while (!at_end() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }
  void skip_space_and_comments() {
    for (;;) {
      skip_space();
      if (!starts("<!--")) return;
      const auto end = text_.find("-->", pos_ + 4);
      if (end == std::string_view::npos) fail("unterminated comment");
      pos_ = end + 3;
    }
  }
  void expect(char c) {
    if (at_end() || text_[pos_] != c) fail(std::string("expected '") + c + "'");
    ++pos_;
  }
  std::string read_name(const std::string& what) {
    const std::size_t start = pos_;
    while (!at_end() && (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_' ||
                         text_[pos_] == '-'))
      ++pos_;
    const auto name = text_.substr(start, pos_ - start);
    if (!is_tag_name(name)) {
      pos_ = start;
      fail("expected " + what);
    }
    return std::string(name);
  }
  void skip_declaration() {
    char quote = 0;
    for (; !at_end(); ++pos_) {
      const char c = text_[pos_];
      if (quote) {
        if (c == quote) quote = 0;
      } else if (c == '"' || c == '\'') {
        quote = c;
      } else if (c == '>') {
        ++pos_;
        return;
      }
    }
    fail("unterminated declaration");
  }

  std::string_view text_;
  std::size_t pos_ = 0;
  bool in_subset_ = false;
  std::optional<std::string> root_;
  SourcePos root_pos_;
  std::vector<Element> elements_;
};

}  // namespace detail

/// Parses a DTD into an XML-grammar whose axiom is the DOCTYPE root (the first
/// declared element when no DOCTYPE is present).
inline XmlGrammar parse_dtd(std::string_view text) {
  detail::DtdScanner scan(text);
  scan.scan();
  if (scan.elements().empty()) throw parse_error({1, 1}, "no ELEMENT declarations");
  TagAlphabet tags;
  for (const auto& e : scan.elements()) tags.add(e.name);
  const std::string root = scan.root() ? *scan.root() : scan.elements().front().name;
  if (!tags.find(root))
    throw Error(ErrorCode::undeclared_element, std::to_string(scan.root_pos().line) + ":" +
                                                   std::to_string(scan.root_pos().column) + ": root element '" + root +
                                                   "' is not declared");
  const std::size_t n = tags.size();
  std::vector<Dfa> content(n, Dfa::empty(n));
  bool undeclared = false;
  const SymbolResolver resolve = [&](std::string_view tok) -> Symbol {
    if (auto id = tags.find(tok)) return *id;
    undeclared = true;
    throw Error(ErrorCode::undeclared_element, "element '" + std::string(tok) + "' is not declared");
  };
  for (const auto& e : scan.elements()) {
    const TagId a = tags.at(e.name);
    if (e.model == "EMPTY") {
      content[a] = Dfa::epsilon(n);
    } else if (e.model == "ANY") {
      content[a] = Dfa::universal(n);
    } else {
      undeclared = false;
      try {
        content[a] = regex_to_dfa(parse_regex(e.model, resolve, {true, false, e.model_pos}), n);
      } catch (const Error& err) {
        if (undeclared) throw Error(ErrorCode::undeclared_element, err.message());
        throw;
      }
    }
  }
  const TagId axiom = tags.at(root);
  return make_xml_grammar(std::move(tags), std::move(content), axiom);
}

}  // namespace dtdkit
