#pragma once

#include <string>

namespace boardcore {

// Matching key for person records: lowercase, common Latin diacritics
// stripped (decomposable letters only; ø/æ/đ are letters of their own and
// stay), punctuation removed, whitespace collapsed and trimmed. UTF-8 in and
// out; equality on the normalized pair (name, address) is the match rule.
std::string normalize_text(const std::string& utf8);

inline std::string person_key(const std::string& name, const std::string& address) {
    return normalize_text(name) + "\x1f" + normalize_text(address);
}

}  // namespace boardcore
