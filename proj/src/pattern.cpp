#include "texcas/pattern.hpp"

#include "texcas/errors.hpp"

#include <cctype>

namespace texcas {
namespace {

bool all_digits(std::string_view s) {
    if (s.empty()) return false;
    for (char c : s)
        if (!std::isdigit(static_cast<unsigned char>(c))) return false;
    return true;
}

void append_literal(std::vector<Segment>& out, std::string_view text) {
    if (text.empty()) return;
    if (!out.empty() && !out.back().is_slot) {
        out.back().text += text;
        return;
    }
    Segment seg;
    seg.text = std::string(text);
    out.push_back(std::move(seg));
}

void append_slot(std::vector<Segment>& out, int slot) {
    Segment seg;
    seg.is_slot = true;
    seg.slot = slot;
    out.push_back(seg);
}

// Parses `source` into `out`. `base` is the offset of `source` inside the
// original pattern text, used for error positions.
void parse_into(std::vector<Segment>& out, std::string_view source, std::size_t base) {
    std::size_t i = 0;
    while (i < source.size()) {
        char c = source[i];
        if (c != '$') {
            std::size_t start = i;
            while (i < source.size() && source[i] != '$') ++i;
            append_literal(out, source.substr(start, i - start));
            continue;
        }
        ++i; // consume '$'
        if (i < source.size() && std::isdigit(static_cast<unsigned char>(source[i]))) {
            std::size_t start = i;
            while (i < source.size() && std::isdigit(static_cast<unsigned char>(source[i]))) ++i;
            append_slot(out, std::stoi(std::string(source.substr(start, i - start))));
            continue;
        }
        if (i < source.size() && source[i] == '(') {
            std::size_t close = source.find(')', i + 1);
            if (close == std::string_view::npos)
                throw ParseError("unclosed $( in translation pattern", base + i - 1);
            std::string_view content = source.substr(i + 1, close - i - 1);
            if (all_digits(content)) {
                append_slot(out, std::stoi(std::string(content)));
            } else {
                // Escape form: a literal dollar sign, then the content itself.
                append_literal(out, "$");
                parse_into(out, content, base + i + 1);
            }
            i = close + 1;
            continue;
        }
        throw ParseError("stray $ in translation pattern", base + i - 1);
    }
}

} // namespace

TranslationPattern TranslationPattern::parse(std::string_view source) {
    TranslationPattern p;
    parse_into(p.segments_, source, 0);
    return p;
}

std::string TranslationPattern::fill(std::span<const std::string> args) const {
    std::string out;
    for (const Segment& seg : segments_) {
        if (!seg.is_slot) {
            out += seg.text;
            continue;
        }
        if (seg.slot < 0 || static_cast<std::size_t>(seg.slot) >= args.size())
            throw TranslationError("pattern slot $" + std::to_string(seg.slot) +
                                   " has no argument (" + std::to_string(args.size()) +
                                   " supplied)");
        out += args[static_cast<std::size_t>(seg.slot)];
    }
    return out;
}

std::string TranslationPattern::serialize() const {
    std::string out;
    for (std::size_t i = 0; i < segments_.size(); ++i) {
        const Segment& seg = segments_[i];
        if (seg.is_slot) {
            bool next_starts_digit =
                i + 1 < segments_.size() && !segments_[i + 1].is_slot &&
                !segments_[i + 1].text.empty() &&
                std::isdigit(static_cast<unsigned char>(segments_[i + 1].text.front()));
            if (next_starts_digit)
                out += "$(" + std::to_string(seg.slot) + ")";
            else
                out += "$" + std::to_string(seg.slot);
            continue;
        }
        const std::string& text = seg.text;
        for (std::size_t k = 0; k < text.size(); ++k) {
            if (text[k] != '$') {
                out += text[k];
                continue;
            }
            // A literal '$'. If it ends the literal and a slot follows, the
            // escape wraps that slot: "$($j)". Otherwise wrap the remainder
            // of this literal run (which must not itself contain ')').
            if (k + 1 == text.size() && i + 1 < segments_.size() && segments_[i + 1].is_slot) {
                out += "$($" + std::to_string(segments_[i + 1].slot) + ")";
                ++i; // slot consumed by the escape
                break;
            }
            std::size_t stop = k + 1;
            while (stop < text.size() && text[stop] != '$' && text[stop] != ')') ++stop;
            out += "$(" + text.substr(k + 1, stop - k - 1) + ")";
            k = stop - 1;
        }
    }
    return out;
}

int TranslationPattern::max_slot() const {
    int m = -1;
    for (const Segment& seg : segments_)
        if (seg.is_slot && seg.slot > m) m = seg.slot;
    return m;
}

} // namespace texcas
