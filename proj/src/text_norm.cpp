#include "boardcore/text_norm.hpp"

#include <cctype>
#include <cstdint>
#include <vector>

namespace boardcore {

namespace {

// Decode one UTF-8 codepoint; malformed bytes pass through as U+FFFD.
std::uint32_t decode(const std::string& s, size_t& i) {
    unsigned char c = s[i];
    if (c < 0x80) {
        ++i;
        return c;
    }
    int extra = 0;
    std::uint32_t cp = 0;
    if ((c & 0xE0) == 0xC0) {
        cp = c & 0x1F;
        extra = 1;
    } else if ((c & 0xF0) == 0xE0) {
        cp = c & 0x0F;
        extra = 2;
    } else if ((c & 0xF8) == 0xF0) {
        cp = c & 0x07;
        extra = 3;
    } else {
        ++i;
        return 0xFFFD;
    }
    if (i + extra >= s.size()) {
        ++i;
        return 0xFFFD;
    }
    for (int k = 1; k <= extra; ++k) {
        unsigned char cc = s[i + k];
        if ((cc & 0xC0) != 0x80) {
            ++i;
            return 0xFFFD;
        }
        cp = (cp << 6) | (cc & 0x3F);
    }
    i += extra + 1;
    return cp;
}

void encode(std::uint32_t cp, std::string& out) {
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

std::uint32_t to_lower_cp(std::uint32_t cp) {
    if (cp >= 'A' && cp <= 'Z') return cp + 0x20;
    // Latin-1 Supplement uppercase block, except the multiplication sign.
    if (cp >= 0x00C0 && cp <= 0x00DE && cp != 0x00D7) return cp + 0x20;
    // Latin Extended-A pairs upper/lower at even/odd codepoints.
    if (cp >= 0x0100 && cp <= 0x0177 && cp % 2 == 0) return cp + 1;
    if (cp >= 0x0179 && cp <= 0x017E && cp % 2 == 1) return cp + 1;
    if (cp == 0x0178) return 0x00FF;  // Y with diaeresis
    return cp;
}

// Base letter for lowercase composed Latin letters; 0 when not decomposable.
std::uint32_t strip_diacritic(std::uint32_t cp) {
    switch (cp) {
        case 0x00E0: case 0x00E1: case 0x00E2: case 0x00E3: case 0x00E4: case 0x00E5:
        case 0x0101: case 0x0103: case 0x0105:
            return 'a';
        case 0x00E7: case 0x0107: case 0x0109: case 0x010B: case 0x010D:
            return 'c';
        case 0x010F:
            return 'd';
        case 0x00E8: case 0x00E9: case 0x00EA: case 0x00EB:
        case 0x0113: case 0x0115: case 0x0117: case 0x0119: case 0x011B:
            return 'e';
        case 0x011D: case 0x011F: case 0x0121: case 0x0123:
            return 'g';
        case 0x0125:
            return 'h';
        case 0x00EC: case 0x00ED: case 0x00EE: case 0x00EF:
        case 0x0129: case 0x012B: case 0x012D: case 0x012F:
            return 'i';
        case 0x0135:
            return 'j';
        case 0x0137:
            return 'k';
        case 0x013A: case 0x013C: case 0x013E: case 0x0140:
            return 'l';
        case 0x00F1: case 0x0144: case 0x0146: case 0x0148:
            return 'n';
        case 0x00F2: case 0x00F3: case 0x00F4: case 0x00F5: case 0x00F6:
        case 0x014D: case 0x014F: case 0x0151:
            return 'o';
        case 0x0155: case 0x0157: case 0x0159:
            return 'r';
        case 0x015B: case 0x015D: case 0x015F: case 0x0161:
            return 's';
        case 0x0163: case 0x0165:
            return 't';
        case 0x00F9: case 0x00FA: case 0x00FB: case 0x00FC:
        case 0x0169: case 0x016B: case 0x016D: case 0x016F: case 0x0171: case 0x0173:
            return 'u';
        case 0x0175:
            return 'w';
        case 0x00FD: case 0x00FF: case 0x0177:
            return 'y';
        case 0x017A: case 0x017C: case 0x017E:
            return 'z';
        default:
            return 0;
    }
}

bool is_combining_mark(std::uint32_t cp) { return cp >= 0x0300 && cp <= 0x036F; }

bool is_punct_cp(std::uint32_t cp) {
    if (cp < 0x80) {
        return std::ispunct(static_cast<int>(cp)) != 0;
    }
    switch (cp) {
        case 0x2010: case 0x2011: case 0x2012: case 0x2013: case 0x2014:  // dashes
        case 0x2018: case 0x2019: case 0x201C: case 0x201D:               // quotes
        case 0x00B7: case 0x2026:
            return true;
        default:
            return false;
    }
}

bool is_space_cp(std::uint32_t cp) {
    return cp == ' ' || cp == '\t' || cp == '\n' || cp == '\r' || cp == 0x00A0 || cp == 0x2009;
}

}  // namespace

std::string normalize_text(const std::string& utf8) {
    std::string out;
    out.reserve(utf8.size());
    bool pending_space = false;
    bool emitted = false;
    size_t i = 0;
    while (i < utf8.size()) {
        std::uint32_t cp = decode(utf8, i);
        cp = to_lower_cp(cp);
        if (std::uint32_t base = strip_diacritic(cp)) cp = base;
        if (is_combining_mark(cp) || is_punct_cp(cp) || cp == 0xFFFD) continue;
        if (is_space_cp(cp)) {
            pending_space = emitted;
            continue;
        }
        if (pending_space) {
            out.push_back(' ');
            pending_space = false;
        }
        encode(cp, out);
        emitted = true;
    }
    return out;
}

}  // namespace boardcore
