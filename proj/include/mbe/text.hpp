#pragma once

#include <string>
#include <string_view>
#include <vector>

// UTF-8 helpers backed by ICU.
namespace mbe::text {

bool is_valid_utf8(std::string_view s);

// Strips ASCII and Unicode whitespace from both ends.
std::string trim(std::string_view s);

bool contains_whitespace(std::string_view s);

// Full Unicode case folding ("SHE" -> "she", "Он" -> "он").
std::string fold_case(std::string_view s);

// Case-folded words of `s`, segmented at Unicode (UAX #29) word boundaries.
// Segments without letters, digits or ideographs are dropped. Apostrophes
// inside a segment are treated as boundaries, so "he's" yields "he", "s".
std::vector<std::string> words(std::string_view s);

// Splits on runs of whitespace.
std::vector<std::string> split_whitespace(std::string_view s);

}  // namespace mbe::text
