#pragma once

#include <cstddef>
#include <limits>
#include <string>
#include <vector>

namespace extremegaps::zeta {

// ordinates of zeros on the critical line, strictly increasing
struct ZetaZeroSeries {
    std::vector<double> ordinates;
    std::string source_file;
    std::size_t offset = 0;

    std::size_t count() const { return ordinates.size(); }
};

// Plain-text loader: one decimal ordinate per line, '#' starts a comment.
// `offset` skips leading zeros, `count` limits how many are kept.
ZetaZeroSeries load_zeros(const std::string& path, std::size_t offset = 0,
                          std::size_t count = std::numeric_limits<std::size_t>::max());

// write ordinates one per line at full double precision
void save_zeros(const ZetaZeroSeries& z, const std::string& path);

// density-normalized gaps (gamma_{i+1} - gamma_i)/(2 pi) * log(gamma_i / 2 pi);
// unit mean over long stretches
std::vector<double> normalized_gaps(const ZetaZeroSeries& z);

struct MaxGapReport {
    std::size_t n = 0;          // number of gaps considered
    double observed = 0.0;      // max normalized gap among the first n
    double predicted = 0.0;     // sqrt(32 log n) / (2 pi)
    double relative_difference = 0.0;
};

MaxGapReport max_gap_report(const ZetaZeroSeries& z, std::size_t n);

struct SmallGapHistogram {
    double bin_width = 0.0;
    std::vector<double> bin_centers;
    std::vector<double> counts;     // histogram of the `count` smallest values
    std::vector<double> reference;  // bin_width * u^2 / (24 pi) at the centers
    std::vector<double> values;     // the selected values, sorted ascending
};

// histogram of the `count` smallest values of 2 pi n^{1/3} * normalized gap
// over the first n gaps, with the quadratic reference intensity
SmallGapHistogram small_gap_histogram(const ZetaZeroSeries& z, std::size_t n,
                                      std::size_t count, double bin_width);

}  // namespace extremegaps::zeta
