// mixfuse/textutil.hpp
//
// Copyright 2026  The mixfuse authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// THIS CODE IS PROVIDED *AS IS* BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY
// KIND, EITHER EXPRESS OR IMPLIED, INCLUDING WITHOUT LIMITATION ANY IMPLIED
// WARRANTIES OR CONDITIONS OF TITLE, FITNESS FOR A PARTICULAR PURPOSE,
// MERCHANTABLITY OR NON-INFRINGEMENT.
// See the Apache 2 License for the specific language governing permissions and
// limitations under the License.

#ifndef MIXFUSE_TEXTUTIL_HPP_
#define MIXFUSE_TEXTUTIL_HPP_

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace mixfuse {

struct Utf8Error : std::runtime_error {
  explicit Utf8Error(std::size_t byte_offset)
      : std::runtime_error("invalid UTF-8 at byte " +
                           std::to_string(byte_offset)),
        offset(byte_offset) {}
  std::size_t offset;
};

// Strict UTF-8 decoder: rejects overlong forms, surrogates, and values
// past U+10FFFF.
inline std::u32string decode_utf8(std::string_view s) {
  std::u32string out;
  out.reserve(s.size());
  std::size_t i = 0;
  while (i < s.size()) {
    unsigned char c = static_cast<unsigned char>(s[i]);
    char32_t cp = 0;
    int len = 0;
    if (c < 0x80) {
      cp = c;
      len = 1;
    } else if ((c & 0xE0) == 0xC0) {
      cp = c & 0x1F;
      len = 2;
    } else if ((c & 0xF0) == 0xE0) {
      cp = c & 0x0F;
      len = 3;
    } else if ((c & 0xF8) == 0xF0) {
      cp = c & 0x07;
      len = 4;
    } else {
      throw Utf8Error(i);
    }
    if (i + len > s.size()) throw Utf8Error(i);
    for (int k = 1; k < len; ++k) {
      unsigned char cc = static_cast<unsigned char>(s[i + k]);
      if ((cc & 0xC0) != 0x80) throw Utf8Error(i + k);
      cp = (cp << 6) | (cc & 0x3F);
    }
    static const char32_t kMin[5] = {0, 0, 0x80, 0x800, 0x10000};
    if (len > 1 && cp < kMin[len]) throw Utf8Error(i);
    if (cp > 0x10FFFF || (cp >= 0xD800 && cp <= 0xDFFF)) throw Utf8Error(i);
    out.push_back(cp);
    i += len;
  }
  return out;
}

inline bool is_valid_utf8(std::string_view s) {
  try {
    decode_utf8(s);
    return true;
  } catch (const Utf8Error&) {
    return false;
  }
}

inline void append_utf8(std::string& out, char32_t cp) {
  if (cp < 0x80) {
    out.push_back(static_cast<char>(cp));
  } else if (cp < 0x800) {
    out.push_back(static_cast<char>(0xC0 | (cp >> 6)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  } else if (cp < 0x10000) {
    out.push_back(static_cast<char>(0xE0 | (cp >> 12)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  } else {
    out.push_back(static_cast<char>(0xF0 | (cp >> 18)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 12) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  }
}

inline std::string encode_utf8(std::u32string_view s) {
  std::string out;
  out.reserve(s.size());
  for (char32_t cp : s) append_utf8(out, cp);
  return out;
}

// Composes the combining sequences that actually occur in speech-corpus
// text with Spanish loans (acute, grave, tilde, diaeresis over ASCII
// letters). Full Unicode normalization is deliberately out of scope; the
// orthography alphabet itself is ASCII.
inline std::u32string compose_latin(std::u32string_view in) {
  struct Pair {
    char32_t base, mark, composed;
  };
  static const Pair kTable[] = {
      {U'a', 0x0301, U'á'}, {U'e', 0x0301, U'é'}, {U'i', 0x0301, U'í'},
      {U'o', 0x0301, U'ó'}, {U'u', 0x0301, U'ú'}, {U'A', 0x0301, U'Á'},
      {U'E', 0x0301, U'É'}, {U'I', 0x0301, U'Í'}, {U'O', 0x0301, U'Ó'},
      {U'U', 0x0301, U'Ú'}, {U'a', 0x0300, U'à'}, {U'e', 0x0300, U'è'},
      {U'i', 0x0300, U'ì'}, {U'o', 0x0300, U'ò'}, {U'u', 0x0300, U'ù'},
      {U'n', 0x0303, U'ñ'}, {U'N', 0x0303, U'Ñ'}, {U'a', 0x0303, U'ã'},
      {U'e', 0x0303, U'ẽ'}, {U'i', 0x0303, U'ĩ'}, {U'o', 0x0303, U'õ'},
      {U'u', 0x0303, U'ũ'}, {U'u', 0x0308, U'ü'}, {U'U', 0x0308, U'Ü'},
  };
  std::u32string out;
  out.reserve(in.size());
  for (char32_t cp : in) {
    if (!out.empty() && cp >= 0x0300 && cp <= 0x036F) {
      bool composed = false;
      for (const Pair& p : kTable) {
        if (p.base == out.back() && p.mark == cp) {
          out.back() = p.composed;
          composed = true;
          break;
        }
      }
      if (composed) continue;
    }
    out.push_back(cp);
  }
  return out;
}

inline bool is_space(char32_t c) {
  return c == U' ' || c == U'\t' || c == U'\r' || c == U'\n' || c == 0x00A0;
}

// Canonical text form: BOM stripped, combining marks composed, internal
// whitespace runs collapsed to single spaces, ends trimmed.
inline std::string normalize_text(std::string_view s) {
  if (s.size() >= 3 && static_cast<unsigned char>(s[0]) == 0xEF &&
      static_cast<unsigned char>(s[1]) == 0xBB &&
      static_cast<unsigned char>(s[2]) == 0xBF) {
    s.remove_prefix(3);
  }
  std::u32string u = compose_latin(decode_utf8(s));
  std::u32string out;
  out.reserve(u.size());
  bool pending_space = false;
  for (char32_t c : u) {
    if (c == 0xFEFF) continue;
    if (is_space(c)) {
      pending_space = !out.empty();
      continue;
    }
    if (pending_space) {
      out.push_back(U' ');
      pending_space = false;
    }
    out.push_back(c);
  }
  return encode_utf8(out);
}

inline std::vector<std::string> split_words(std::string_view s) {
  std::vector<std::string> out;
  std::size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && (s[i] == ' ' || s[i] == '\t')) ++i;
    std::size_t j = i;
    while (j < s.size() && s[j] != ' ' && s[j] != '\t') ++j;
    if (j > i) out.emplace_back(s.substr(i, j - i));
    i = j;
  }
  return out;
}

inline std::string join_words(const std::vector<std::string>& words) {
  std::string out;
  for (std::size_t i = 0; i < words.size(); ++i) {
    if (i) out.push_back(' ');
    out += words[i];
  }
  return out;
}

}  // namespace mixfuse

#endif  // MIXFUSE_TEXTUTIL_HPP_
