#include "mbe/text.hpp"

#include <memory>

#include <unicode/brkiter.h>
#include <unicode/locid.h>
#include <unicode/uchar.h>
#include <unicode/unistr.h>
#include <unicode/utf8.h>

#include "mbe/error.hpp"

namespace mbe::text {
namespace {

icu::UnicodeString to_unicode(std::string_view s) {
  return icu::UnicodeString::fromUTF8(
      icu::StringPiece(s.data(), static_cast<int32_t>(s.size())));
}

std::string to_utf8(const icu::UnicodeString& u) {
  std::string out;
  u.toUTF8String(out);
  return out;
}

icu::BreakIterator& word_iterator() {
  thread_local std::unique_ptr<icu::BreakIterator> it = [] {
    UErrorCode status = U_ZERO_ERROR;
    std::unique_ptr<icu::BreakIterator> p(
        icu::BreakIterator::createWordInstance(icu::Locale::getRoot(), status));
    if (U_FAILURE(status) || !p) {
      throw DataError(std::string("ICU word break iterator unavailable: ") +
                      u_errorName(status));
    }
    return p;
  }();
  return *it;
}

bool is_apostrophe(UChar32 c) {
  return c == 0x27 || c == 0x2019 || c == 0x02BC || c == 0xFF07;
}

bool is_space(UChar32 c) { return u_isUWhiteSpace(c) != 0; }

}  // namespace

bool is_valid_utf8(std::string_view s) {
  const auto* bytes = reinterpret_cast<const uint8_t*>(s.data());
  const auto length = static_cast<int32_t>(s.size());
  int32_t i = 0;
  while (i < length) {
    UChar32 c;
    U8_NEXT(bytes, i, length, c);
    if (c < 0) return false;
  }
  return true;
}

std::string trim(std::string_view s) {
  const auto* bytes = reinterpret_cast<const uint8_t*>(s.data());
  const auto length = static_cast<int32_t>(s.size());
  int32_t begin = 0;
  while (begin < length) {
    int32_t next = begin;
    UChar32 c;
    U8_NEXT(bytes, next, length, c);
    if (c < 0 || !is_space(c)) break;
    begin = next;
  }
  int32_t end = length;
  while (end > begin) {
    int32_t prev = end;
    UChar32 c;
    U8_PREV(bytes, 0, prev, c);
    if (c < 0 || !is_space(c)) break;
    end = prev;
  }
  return std::string(s.substr(begin, end - begin));
}

bool contains_whitespace(std::string_view s) {
  const auto* bytes = reinterpret_cast<const uint8_t*>(s.data());
  const auto length = static_cast<int32_t>(s.size());
  int32_t i = 0;
  while (i < length) {
    UChar32 c;
    U8_NEXT(bytes, i, length, c);
    if (c >= 0 && is_space(c)) return true;
  }
  return false;
}

std::string fold_case(std::string_view s) {
  auto u = to_unicode(s);
  u.foldCase();
  return to_utf8(u);
}

std::vector<std::string> words(std::string_view s) {
  const auto u = to_unicode(s);
  auto& it = word_iterator();
  it.setText(u);

  std::vector<std::string> out;
  auto emit = [&](int32_t from, int32_t to) {
    if (to <= from) return;
    icu::UnicodeString piece(u, from, to - from);
    piece.foldCase();
    out.push_back(to_utf8(piece));
  };

  int32_t start = it.first();
  for (int32_t end = it.next(); end != icu::BreakIterator::DONE;
       start = end, end = it.next()) {
    if (it.getRuleStatus() < UBRK_WORD_NONE_LIMIT) continue;
    int32_t piece_start = start;
    for (int32_t i = start; i < end; i = u.moveIndex32(i, 1)) {
      if (is_apostrophe(u.char32At(i))) {
        emit(piece_start, i);
        piece_start = u.moveIndex32(i, 1);
      }
    }
    emit(piece_start, end);
  }
  return out;
}

std::vector<std::string> split_whitespace(std::string_view s) {
  const auto* bytes = reinterpret_cast<const uint8_t*>(s.data());
  const auto length = static_cast<int32_t>(s.size());
  std::vector<std::string> out;
  int32_t i = 0;
  int32_t token_start = -1;
  while (i < length) {
    const int32_t at = i;
    UChar32 c;
    U8_NEXT(bytes, i, length, c);
    const bool space = c >= 0 && is_space(c);
    if (space && token_start >= 0) {
      out.emplace_back(s.substr(token_start, at - token_start));
      token_start = -1;
    } else if (!space && token_start < 0) {
      token_start = at;
    }
  }
  if (token_start >= 0) out.emplace_back(s.substr(token_start));
  return out;
}

}  // namespace mbe::text
