#ifndef CORPCOMP_XML_HPP
#define CORPCOMP_XML_HPP

#include <cstddef>
#include <cstdint>
#include <memory>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "corpcomp/error.hpp"
#include "corpcomp/tokenize.hpp"

// Small non-validating XML reader: elements, attributes, character data,
// CDATA, comments, processing instructions and a DOCTYPE without an
// internal subset. Entity references are limited to the five predefined
// entities plus numeric character references.
namespace corpcomp::xml {

struct Element;

using Node = std::variant<std::string, std::unique_ptr<Element>>;

struct Element {
  std::string name;
  std::vector<std::pair<std::string, std::string>> attributes;
  std::vector<Node> children;
  std::size_t offset = 0;  // byte offset of '<'

  const std::string* attribute(std::string_view key) const {
    for (const auto& [k, v] : attributes) {
      if (k == key) return &v;
    }
    return nullptr;
  }
};

namespace detail {

class Parser {
 public:
  explicit Parser(std::string_view text) : text_(text) {}

  std::unique_ptr<Element> parse_document() {
    skip_bom();
    skip_misc();
    if (at_end() || peek() != '<') fail("expected root element");
    auto root = parse_element();
    skip_misc();
    if (!at_end()) fail("content after root element");
    return root;
  }

 private:
  [[noreturn]] void fail(const std::string& msg) const { throw ParseError("XML: " + msg, pos_); }

  bool at_end() const { return pos_ >= text_.size(); }
  char peek() const { return text_[pos_]; }
  bool starts_with(std::string_view s) const { return text_.substr(pos_).starts_with(s); }

  static bool is_space(char c) { return c == ' ' || c == '\t' || c == '\n' || c == '\r'; }

  static bool is_name_char(char c) {
    const auto u = static_cast<unsigned char>(c);
    return u >= 0x80 || (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') ||
           (c >= '0' && c <= '9') || c == '_' || c == ':' || c == '-' || c == '.';
  }

  void skip_bom() {
    if (starts_with("\xEF\xBB\xBF")) pos_ += 3;
  }

  void skip_space() {
    while (!at_end() && is_space(peek())) ++pos_;
  }

  void skip_until(std::string_view terminator, const char* what) {
    const auto end = text_.find(terminator, pos_);
    if (end == std::string_view::npos) fail(std::string("unterminated ") + what);
    pos_ = end + terminator.size();
  }

  // Prolog/epilog: whitespace, comments, PIs, DOCTYPE.
  void skip_misc() {
    for (;;) {
      skip_space();
      if (starts_with("<?")) {
        skip_until("?>", "processing instruction");
      } else if (starts_with("<!--")) {
        skip_until("-->", "comment");
      } else if (starts_with("<!DOCTYPE")) {
        if (text_.find('[', pos_) < text_.find('>', pos_)) fail("DOCTYPE internal subset not supported");
        skip_until(">", "DOCTYPE");
      } else {
        return;
      }
    }
  }

  std::string parse_name() {
    const auto start = pos_;
    if (at_end() || !is_name_char(peek()) || peek() == '-' || peek() == '.' ||
        (peek() >= '0' && peek() <= '9')) {
      fail("expected name");
    }
    while (!at_end() && is_name_char(peek())) ++pos_;
    return std::string(text_.substr(start, pos_ - start));
  }

  void decode_reference(std::string& out) {
    const auto start = pos_;
    const auto semi = text_.find(';', pos_);
    if (semi == std::string_view::npos || semi - pos_ > 12) fail("unterminated entity reference");
    const auto name = text_.substr(pos_ + 1, semi - pos_ - 1);
    pos_ = semi + 1;
    if (name == "amp") {
      out += '&';
    } else if (name == "lt") {
      out += '<';
    } else if (name == "gt") {
      out += '>';
    } else if (name == "quot") {
      out += '"';
    } else if (name == "apos") {
      out += '\'';
    } else if (name.size() > 1 && name[0] == '#') {
      const bool hex = name[1] == 'x';
      const auto digits = name.substr(hex ? 2 : 1);
      if (digits.empty()) {
        pos_ = start;
        fail("empty character reference");
      }
      std::uint32_t cp = 0;
      for (char c : digits) {
        std::uint32_t d = 0;
        if (c >= '0' && c <= '9') {
          d = static_cast<std::uint32_t>(c - '0');
        } else if (hex && c >= 'a' && c <= 'f') {
          d = static_cast<std::uint32_t>(c - 'a' + 10);
        } else if (hex && c >= 'A' && c <= 'F') {
          d = static_cast<std::uint32_t>(c - 'A' + 10);
        } else {
          pos_ = start;
          fail("bad character reference");
        }
        cp = cp * (hex ? 16 : 10) + d;
        if (cp > 0x10FFFF) break;
      }
      if (cp == 0 || cp > 0x10FFFF || (cp >= 0xD800 && cp <= 0xDFFF)) {
        pos_ = start;
        fail("character reference out of range");
      }
      corpcomp::detail::append_utf8(out, static_cast<UChar32>(cp));
    } else {
      pos_ = start;
      fail("unknown entity '" + std::string(name) + "'");
    }
  }

  std::string parse_attribute_value() {
    if (at_end() || (peek() != '"' && peek() != '\'')) fail("expected quoted attribute value");
    const char quote = peek();
    ++pos_;
    std::string value;
    for (;;) {
      if (at_end()) fail("unterminated attribute value");
      const char c = peek();
      if (c == quote) {
        ++pos_;
        return value;
      }
      if (c == '<') fail("'<' in attribute value");
      if (c == '&') {
        decode_reference(value);
      } else {
        value += c;
        ++pos_;
      }
    }
  }

  std::unique_ptr<Element> parse_element() {
    auto element = std::make_unique<Element>();
    element->offset = pos_;
    ++pos_;  // '<'
    element->name = parse_name();

    for (;;) {
      const auto before = pos_;
      skip_space();
      if (at_end()) fail("unterminated start tag");
      if (starts_with("/>")) {
        pos_ += 2;
        return element;
      }
      if (peek() == '>') {
        ++pos_;
        break;
      }
      if (before == pos_) fail("expected whitespace before attribute");
      auto key = parse_name();
      skip_space();
      if (at_end() || peek() != '=') fail("expected '=' after attribute name");
      ++pos_;
      skip_space();
      auto value = parse_attribute_value();
      if (element->attribute(key) != nullptr) fail("duplicate attribute '" + key + "'");
      element->attributes.emplace_back(std::move(key), std::move(value));
    }

    std::string text;
    auto flush_text = [&] {
      if (!text.empty()) element->children.emplace_back(std::move(text));
      text.clear();
    };

    for (;;) {
      if (at_end()) {
        pos_ = element->offset;
        fail("element <" + element->name + "> is not closed");
      }
      const char c = peek();
      if (c == '<') {
        if (starts_with("</")) {
          flush_text();
          pos_ += 2;
          const auto name_at = pos_;
          const auto name = parse_name();
          if (name != element->name) {
            pos_ = name_at;
            fail("mismatched end tag </" + name + ">, expected </" + element->name + ">");
          }
          skip_space();
          if (at_end() || peek() != '>') fail("expected '>'");
          ++pos_;
          return element;
        }
        if (starts_with("<!--")) {
          skip_until("-->", "comment");
        } else if (starts_with("<![CDATA[")) {
          pos_ += 9;
          const auto end = text_.find("]]>", pos_);
          if (end == std::string_view::npos) fail("unterminated CDATA section");
          text.append(text_.substr(pos_, end - pos_));
          pos_ = end + 3;
        } else if (starts_with("<?")) {
          skip_until("?>", "processing instruction");
        } else {
          flush_text();
          element->children.emplace_back(parse_element());
        }
      } else if (c == '&') {
        decode_reference(text);
      } else {
        text += c;
        ++pos_;
      }
    }
  }

  std::string_view text_;
  std::size_t pos_ = 0;
};

}  // namespace detail

// Parses a complete document and returns its root element.
inline std::unique_ptr<Element> parse(std::string_view text) {
  validate_utf8(text);
  return detail::Parser(text).parse_document();
}

// Escapes character data for element content and attribute values.
inline std::string escape(std::string_view text) {
  std::string out;
  out.reserve(text.size());
  for (char c : text) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      case '\'': out += "&apos;"; break;
      default: out += c;
    }
  }
  return out;
}

}  // namespace corpcomp::xml

#endif  // CORPCOMP_XML_HPP
