#pragma once

#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace texcas {

// One piece of a translation pattern: either a literal text run or an
// argument slot ($0, $1, ...).
struct Segment {
    bool is_slot = false;
    int slot = -1;       // valid when is_slot
    std::string text;    // valid when !is_slot

    bool operator==(const Segment&) const = default;
};

// A translation pattern such as "JacobiP($2,$0,$1,$3)".
//
// Syntax: `$` followed by digits is a slot (maximal digit munch).
// `$(DIGITS)` is the same slot written with delimiters, for use when the
// following literal starts with a digit. `$(X)` where X is not all digits
// denotes a literal `$` followed by X parsed under the same rules, so
// "[$2$($0)]" fills slot 2, emits a literal "$", then fills slot 0.
class TranslationPattern {
public:
    TranslationPattern() = default;

    static TranslationPattern parse(std::string_view source);

    // Substitutes arguments into slots. Slot i out of range of `args` throws.
    std::string fill(std::span<const std::string> args) const;

    // Canonical source text: parse(serialize()) reproduces the segments.
    std::string serialize() const;

    // Largest slot index referenced, or -1 when the pattern has no slots.
    int max_slot() const;

    const std::vector<Segment>& segments() const { return segments_; }

    bool operator==(const TranslationPattern&) const = default;

private:
    std::vector<Segment> segments_;
};

} // namespace texcas
