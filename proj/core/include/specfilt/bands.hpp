#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "specfilt/errors.hpp"
#include "specfilt/spectral.hpp"

namespace specfilt {

/// Tokens per full cosine cycle at a frequency index, kept as the exact
/// rational n/(2m); unbounded at m = 0.
class Period {
public:
    static Period unbounded() { return Period(0, 0); }
    static Period ratio(std::uint64_t num, std::uint64_t den);

    bool is_unbounded() const { return den_ == 0; }
    std::uint64_t numerator() const { return num_; }
    std::uint64_t denominator() const { return den_; }
    double tokens() const;

    bool operator==(const Period&) const = default;

private:
    Period(std::uint64_t num, std::uint64_t den) : num_(num), den_(den) {}
    std::uint64_t num_;
    std::uint64_t den_;
};

/// Period of frequency index m in a length-n sequence: n/(2m) tokens, or
/// unbounded for m = 0.
Period period_of(std::size_t m, std::size_t n);

/// Named contiguous interval of frequency indices, bounds inclusive.
struct Band {
    std::string name;
    std::size_t lo;
    std::size_t hi;
};

/// Ordered partition of the frequency indices [0, n-1] into named bands.
class BandScheme {
public:
    BandScheme(std::size_t frequency_count, std::vector<Band> bands);

    std::size_t frequency_count() const { return n_; }
    const std::vector<Band>& bands() const { return bands_; }
    const Band* find(const std::string& name) const;

    /// Shortest and longest period covered by a band: {period(hi), period(lo)}.
    std::pair<Period, Period> period_range(const Band& band) const;

private:
    std::size_t n_;
    std::vector<Band> bands_;
};

/// The dyadic five-band scheme b1=[0,1], b2=[2,3], b3=[4,7], b4=[8,15],
/// b5=[16,n-1]. Requires n >= 17.
BandScheme default_scheme(std::size_t n);

/// A set of bands (by name) and/or raw index ranges to mask together.
struct BandCombination {
    std::string name;  // "c1", "c2", "c3" or "custom"
    std::vector<std::string> band_names;
    std::vector<std::pair<std::size_t, std::size_t>> index_ranges;  // inclusive

    static BandCombination c1();
    static BandCombination c2();
    static BandCombination c3();

    bool empty() const { return band_names.empty() && index_ranges.empty(); }
};

/// Union of the named bands' indices and the raw ranges as a BandFilter.
BandFilter resolve_filter(const BandCombination& combo, const BandScheme& scheme);

/// Convenience: resolves against default_scheme(n) when the combination names
/// bands, otherwise needs no scheme at all.
BandFilter build_filter(const BandCombination& combo, std::size_t n);

/// Parses "c1" | "c2" | "c3", a comma list of band names ("b1,b4"), or index
/// ranges ("0-1,8-15", single indices allowed). Names and ranges may be mixed;
/// the c-combinations stand alone. Empty text is the empty combination.
BandCombination parse_band_spec(const std::string& text);

}  // namespace specfilt
