#ifndef CORPCOMP_INGEST_HPP
#define CORPCOMP_INGEST_HPP

#include <algorithm>
#include <cstddef>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "corpcomp/error.hpp"
#include "corpcomp/tokenize.hpp"
#include "corpcomp/xml.hpp"

namespace corpcomp {

// A language-tagged token sequence for one section or upload.
struct Corpus {
  std::string id;
  std::string language;
  std::vector<std::string> tokens;

  std::size_t token_count() const { return tokens.size(); }
  bool empty() const { return tokens.empty(); }
};

// One language variant of a translation unit.
struct UnitVariant {
  std::string language;  // lowercased xml:lang value, e.g. "en-us"
  std::string text;      // segment text, inline markup removed
};

struct TranslationUnit {
  std::vector<UnitVariant> variants;
};

struct ParallelDocument {
  std::string id;
  std::vector<TranslationUnit> units;
  std::set<std::string> languages;
  std::size_t skipped_units = 0;  // <tu> elements without any <tuv>
};

struct TmxOptions {
  // In lenient mode unknown elements inside <seg> are dropped with their
  // content instead of failing the parse.
  bool lenient = false;
};

inline std::string to_lower_ascii(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(), [](unsigned char c) {
    return static_cast<char>(c >= 'A' && c <= 'Z' ? c - 'A' + 'a' : c);
  });
  return out;
}

// Primary subtag of a language tag, lowercased: "EN-US" -> "en".
inline std::string primary_subtag(std::string_view tag) {
  const auto cut = tag.find_first_of("-_");
  return to_lower_ascii(tag.substr(0, cut));
}

inline bool language_matches(std::string_view a, std::string_view b) {
  return primary_subtag(a) == primary_subtag(b);
}

namespace detail {

inline bool is_inline_markup(std::string_view name) {
  return name == "bpt" || name == "ept" || name == "ph" || name == "it" || name == "hi";
}

inline void collect_segment_text(const xml::Element& seg, const TmxOptions& options,
                                 std::string& out) {
  for (const auto& child : seg.children) {
    if (const auto* text = std::get_if<std::string>(&child)) {
      out += *text;
      continue;
    }
    const auto& element = *std::get<std::unique_ptr<xml::Element>>(child);
    if (is_inline_markup(element.name)) continue;
    if (!options.lenient) {
      throw ParseError("TMX: unknown element <" + element.name + "> inside <seg>", element.offset);
    }
  }
}

inline std::vector<const xml::Element*> child_elements(const xml::Element& parent,
                                                       std::string_view name) {
  std::vector<const xml::Element*> out;
  for (const auto& child : parent.children) {
    if (const auto* element = std::get_if<std::unique_ptr<xml::Element>>(&child)) {
      if ((*element)->name == name) out.push_back(element->get());
    }
  }
  return out;
}

}  // namespace detail

// Parses TMX content. `id` labels the resulting document (usually the file
// stem).
inline ParallelDocument parse_tmx(std::string_view bytes, std::string id,
                                  const TmxOptions& options = {}) {
  if (id.empty()) throw DataError("document id must not be empty");
  const auto root = xml::parse(bytes);
  if (root->name != "tmx") throw ParseError("TMX: root element is <" + root->name + ">", root->offset);

  ParallelDocument doc;
  doc.id = std::move(id);
  const auto bodies = detail::child_elements(*root, "body");
  if (bodies.size() != 1) throw ParseError("TMX: expected exactly one <body>", root->offset);

  for (const auto* tu : detail::child_elements(*bodies.front(), "tu")) {
    TranslationUnit unit;
    for (const auto* tuv : detail::child_elements(*tu, "tuv")) {
      const auto* lang = tuv->attribute("xml:lang");
      if (lang == nullptr) lang = tuv->attribute("lang");  // TMX 1.1
      if (lang == nullptr || lang->empty()) {
        throw ParseError("TMX: <tuv> without xml:lang", tuv->offset);
      }
      const auto segs = detail::child_elements(*tuv, "seg");
      if (segs.size() != 1) throw ParseError("TMX: <tuv> must hold exactly one <seg>", tuv->offset);

      UnitVariant variant;
      variant.language = to_lower_ascii(*lang);
      detail::collect_segment_text(*segs.front(), options, variant.text);
      doc.languages.insert(variant.language);
      unit.variants.push_back(std::move(variant));
    }
    if (unit.variants.empty()) {
      ++doc.skipped_units;
      continue;
    }
    doc.units.push_back(std::move(unit));
  }
  return doc;
}

// Builds the corpus of one language side: matching segments are joined in
// unit order and tokenized.
inline Corpus extract_side(const ParallelDocument& doc, std::string_view lang) {
  std::string text;
  bool found = false;
  for (const auto& unit : doc.units) {
    for (const auto& variant : unit.variants) {
      if (!language_matches(variant.language, lang)) continue;
      found = true;
      text += variant.text;
      text += '\n';
    }
  }
  if (!found) {
    std::string available;
    for (const auto& l : doc.languages) {
      if (!available.empty()) available += ", ";
      available += l;
    }
    throw LanguageError("document '" + doc.id + "' has no '" + std::string(lang) +
                        "' segments; available: {" + available + "}");
  }
  return Corpus{doc.id, primary_subtag(lang), tokenize(text)};
}

inline bool has_language(const ParallelDocument& doc, std::string_view lang) {
  return std::any_of(doc.languages.begin(), doc.languages.end(),
                     [&](const std::string& l) { return language_matches(l, lang); });
}

inline Corpus read_plaintext(std::string_view text, std::string id, std::string lang) {
  validate_utf8(text);
  return Corpus{std::move(id), primary_subtag(lang), tokenize(text)};
}

}  // namespace corpcomp

#endif  // CORPCOMP_INGEST_HPP
