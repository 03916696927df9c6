#ifndef CORPCOMP_TOKENIZE_HPP
#define CORPCOMP_TOKENIZE_HPP

#include <string>
#include <string_view>
#include <vector>

#include <unicode/uchar.h>
#include <unicode/utf8.h>

#include "corpcomp/error.hpp"

namespace corpcomp {

namespace detail {

struct DecodedChar {
  UChar32 cp;
  std::size_t begin;
  std::size_t end;
};

// Decodes one code point at `pos`. Returns cp < 0 on an ill-formed sequence.
inline DecodedChar decode_at(std::string_view text, std::size_t pos) {
  const auto* s = reinterpret_cast<const uint8_t*>(text.data());
  const auto length = static_cast<int32_t>(text.size());
  auto i = static_cast<int32_t>(pos);
  UChar32 c = 0;
  U8_NEXT(s, i, length, c);
  return {c, pos, static_cast<std::size_t>(i)};
}

inline bool is_letter(UChar32 c) { return u_isalpha(c) != 0; }

inline bool is_word_char(UChar32 c) {
  if (u_isalpha(c) || u_isdigit(c)) return true;
  // Combining marks stay attached to the base character they follow.
  const auto cat = u_charType(c);
  return cat == U_NON_SPACING_MARK || cat == U_COMBINING_SPACING_MARK;
}

inline bool is_joiner(UChar32 c) {
  return c == U'\'' || c == 0x2019 || c == U'-' || c == 0x2010;
}

inline void append_utf8(std::string& out, UChar32 c) {
  uint8_t buf[U8_MAX_LENGTH];
  int32_t len = 0;
  U8_APPEND_UNSAFE(buf, len, c);
  out.append(reinterpret_cast<const char*>(buf), static_cast<std::size_t>(len));
}

}  // namespace detail

// Returns the offset of the first ill-formed UTF-8 byte, or npos.
inline std::size_t find_invalid_utf8(std::string_view text) {
  std::size_t pos = 0;
  while (pos < text.size()) {
    const auto ch = detail::decode_at(text, pos);
    if (ch.cp < 0) return pos;
    pos = ch.end;
  }
  return std::string_view::npos;
}

inline void validate_utf8(std::string_view text) {
  if (const auto bad = find_invalid_utf8(text); bad != std::string_view::npos) {
    throw ParseError("invalid UTF-8", bad);
  }
}

// Splits text into lowercase word tokens.
//
// A token is a maximal run of letters and digits. An apostrophe or hyphen
// is kept inside a token only when it sits between two letters
// ("cat's", "usb-port"). Tokens are case-folded with Unicode simple case
// folding. Ill-formed UTF-8 sequences act as separators.
inline std::vector<std::string> tokenize(std::string_view text) {
  std::vector<std::string> tokens;
  std::string current;
  bool prev_letter = false;

  auto flush = [&] {
    if (!current.empty()) tokens.push_back(std::move(current));
    current.clear();
    prev_letter = false;
  };

  std::size_t pos = 0;
  while (pos < text.size()) {
    const auto ch = detail::decode_at(text, pos);
    if (ch.cp >= 0 && detail::is_word_char(ch.cp)) {
      detail::append_utf8(current, u_foldCase(ch.cp, U_FOLD_CASE_DEFAULT));
      prev_letter = detail::is_letter(ch.cp) ||
                    (prev_letter && !u_isdigit(ch.cp));  // marks inherit
    } else if (ch.cp >= 0 && detail::is_joiner(ch.cp) && prev_letter &&
               ch.end < text.size()) {
      const auto next = detail::decode_at(text, ch.end);
      if (next.cp >= 0 && detail::is_letter(next.cp)) {
        detail::append_utf8(current, ch.cp);
        prev_letter = false;
      } else {
        flush();
      }
    } else {
      flush();
    }
    pos = ch.end;
  }
  flush();
  return tokens;
}

}  // namespace corpcomp

#endif  // CORPCOMP_TOKENIZE_HPP
