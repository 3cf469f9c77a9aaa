#include "specfilt/bands.hpp"

#include <algorithm>
#include <cctype>
#include <numeric>
#include <string>

namespace specfilt {

Period Period::ratio(std::uint64_t num, std::uint64_t den) {
    const std::uint64_t g = std::gcd(num, den);
    return Period(num / g, den / g);
}

double Period::tokens() const {
    return static_cast<double>(num_) / static_cast<double>(den_);
}

Period period_of(std::size_t m, std::size_t n) {
    if (n == 0) throw DataError("sequence length must be positive");
    if (m >= n) {
        throw IndexError("frequency index " + std::to_string(m) +
                         " out of range for n=" + std::to_string(n));
    }
    if (m == 0) return Period::unbounded();
    return Period::ratio(n, 2 * static_cast<std::uint64_t>(m));
}

BandScheme::BandScheme(std::size_t frequency_count, std::vector<Band> bands)
    : n_(frequency_count), bands_(std::move(bands)) {
    if (n_ == 0) throw DataError("scheme must cover at least one frequency");
    if (bands_.empty()) throw DataError("scheme must contain at least one band");
    std::size_t expected_lo = 0;
    for (const Band& band : bands_) {
        if (band.name.empty()) throw DataError("band names must be non-empty");
        if (band.lo != expected_lo || band.hi < band.lo) {
            throw DataError("bands must be contiguous, ordered and disjoint");
        }
        for (const Band& other : bands_) {
            if (&other != &band && other.name == band.name) {
                throw DataError("duplicate band name '" + band.name + "'");
            }
        }
        expected_lo = band.hi + 1;
    }
    if (expected_lo != n_) {
        throw DataError("bands must cover the full index range [0, n-1]");
    }
}

const Band* BandScheme::find(const std::string& name) const {
    for (const Band& band : bands_) {
        if (band.name == name) return &band;
    }
    return nullptr;
}

std::pair<Period, Period> BandScheme::period_range(const Band& band) const {
    return {period_of(band.hi, n_), period_of(band.lo, n_)};
}

BandScheme default_scheme(std::size_t n) {
    if (n < 17) {
        throw UnsupportedLengthError(
            "the five-band scheme needs n >= 17 (got n=" + std::to_string(n) +
            "); supply a custom band spec with explicit index ranges instead");
    }
    return BandScheme(n, {{"b1", 0, 1},
                          {"b2", 2, 3},
                          {"b3", 4, 7},
                          {"b4", 8, 15},
                          {"b5", 16, n - 1}});
}

BandCombination BandCombination::c1() { return {"c1", {"b1", "b2", "b4"}, {}}; }
BandCombination BandCombination::c2() { return {"c2", {"b1", "b2"}, {}}; }
BandCombination BandCombination::c3() { return {"c3", {"b1"}, {}}; }

BandFilter resolve_filter(const BandCombination& combo, const BandScheme& scheme) {
    std::vector<std::size_t> masked;
    for (const std::string& name : combo.band_names) {
        const Band* band = scheme.find(name);
        if (band == nullptr) {
            throw LookupError("unknown band name '" + name + "'");
        }
        for (std::size_t m = band->lo; m <= band->hi; ++m) masked.push_back(m);
    }
    for (const auto& [lo, hi] : combo.index_ranges) {
        for (std::size_t m = lo; m <= hi; ++m) masked.push_back(m);
    }
    return BandFilter(scheme.frequency_count(), std::move(masked));
}

BandFilter build_filter(const BandCombination& combo, std::size_t n) {
    if (!combo.band_names.empty()) {
        return resolve_filter(combo, default_scheme(n));
    }
    std::vector<std::size_t> masked;
    for (const auto& [lo, hi] : combo.index_ranges) {
        for (std::size_t m = lo; m <= hi; ++m) masked.push_back(m);
    }
    return BandFilter(n, std::move(masked));
}

namespace {

std::string trim(const std::string& s) {
    std::size_t lo = 0;
    std::size_t hi = s.size();
    while (lo < hi && std::isspace(static_cast<unsigned char>(s[lo]))) ++lo;
    while (hi > lo && std::isspace(static_cast<unsigned char>(s[hi - 1]))) --hi;
    return s.substr(lo, hi - lo);
}

bool all_digits(const std::string& s) {
    if (s.empty()) return false;
    return std::all_of(s.begin(), s.end(),
                       [](unsigned char c) { return std::isdigit(c); });
}

bool is_identifier(const std::string& s) {
    if (s.empty() || !std::isalpha(static_cast<unsigned char>(s[0]))) return false;
    return std::all_of(s.begin(), s.end(), [](unsigned char c) {
        return std::isalnum(c) || c == '_';
    });
}

std::size_t parse_index(const std::string& token, const std::string& digits) {
    try {
        return static_cast<std::size_t>(std::stoull(digits));
    } catch (const std::exception&) {
        throw ParseError("index too large in band spec token '" + token + "'");
    }
}

}  // namespace

BandCombination parse_band_spec(const std::string& text) {
    const std::string spec = trim(text);
    if (spec.empty()) return {"custom", {}, {}};
    if (spec == "c1") return BandCombination::c1();
    if (spec == "c2") return BandCombination::c2();
    if (spec == "c3") return BandCombination::c3();

    BandCombination combo{"custom", {}, {}};
    std::size_t pos = 0;
    while (pos <= spec.size()) {
        const std::size_t comma = std::min(spec.find(',', pos), spec.size());
        const std::string token = trim(spec.substr(pos, comma - pos));
        pos = comma + 1;
        if (token.empty()) {
            throw ParseError("empty token in band spec '" + spec + "'");
        }
        if (token == "c1" || token == "c2" || token == "c3") {
            throw ParseError("combination '" + token + "' must stand alone");
        }
        const std::size_t dash = token.find('-');
        if (dash != std::string::npos) {
            const std::string lo_text = trim(token.substr(0, dash));
            const std::string hi_text = trim(token.substr(dash + 1));
            if (!all_digits(lo_text) || !all_digits(hi_text)) {
                throw ParseError("malformed range token '" + token + "'");
            }
            const std::size_t lo = parse_index(token, lo_text);
            const std::size_t hi = parse_index(token, hi_text);
            if (lo > hi) {
                throw ParseError("inverted range token '" + token + "'");
            }
            combo.index_ranges.emplace_back(lo, hi);
        } else if (all_digits(token)) {
            const std::size_t idx = parse_index(token, token);
            combo.index_ranges.emplace_back(idx, idx);
        } else if (is_identifier(token)) {
            combo.band_names.push_back(token);
        } else {
            throw ParseError("malformed band spec token '" + token + "'");
        }
        if (comma == spec.size()) break;
    }

    // Explicit ranges must not overlap each other.
    for (std::size_t a = 0; a < combo.index_ranges.size(); ++a) {
        for (std::size_t b = a + 1; b < combo.index_ranges.size(); ++b) {
            const auto& [alo, ahi] = combo.index_ranges[a];
            const auto& [blo, bhi] = combo.index_ranges[b];
            if (alo <= bhi && blo <= ahi) {
                throw ParseError("overlapping ranges '" + std::to_string(alo) + "-" +
                                 std::to_string(ahi) + "' and '" + std::to_string(blo) +
                                 "-" + std::to_string(bhi) + "'");
            }
        }
    }
    return combo;
}

}  // namespace specfilt
