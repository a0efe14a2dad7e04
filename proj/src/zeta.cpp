#include "extremegaps/zeta.hpp"

#include "extremegaps/common.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace extremegaps::zeta {

ZetaZeroSeries load_zeros(const std::string& path, std::size_t offset, std::size_t count) {
    std::ifstream in(path);
    if (!in) throw ValidationError("load_zeros: cannot open " + path);

    ZetaZeroSeries z;
    z.source_file = path;
    z.offset = offset;

    std::string line;
    std::size_t line_no = 0;
    std::size_t seen = 0;
    while (std::getline(in, line)) {
        ++line_no;
        std::size_t start = line.find_first_not_of(" \t\r");
        if (start == std::string::npos) continue;
        if (line[start] == '#') continue;
        const char* begin = line.c_str() + start;
        char* end = nullptr;
        double v = std::strtod(begin, &end);
        if (end == begin)
            throw ValidationError("load_zeros: parse failure at line " +
                                  std::to_string(line_no) + " of " + path);
        while (*end == ' ' || *end == '\t' || *end == '\r') ++end;
        if (*end != '\0')
            throw ValidationError("load_zeros: trailing garbage at line " +
                                  std::to_string(line_no) + " of " + path);
        if (seen++ < offset) continue;
        if (z.ordinates.size() < count) z.ordinates.push_back(v);
        if (z.ordinates.size() == count) break;
    }
    if (z.ordinates.empty())
        throw ValidationError("load_zeros: no ordinates in " + path +
                              " (offset past end or empty file)");
    for (std::size_t i = 0; i + 1 < z.ordinates.size(); ++i)
        if (!(z.ordinates[i] < z.ordinates[i + 1]))
            throw ValidationError("load_zeros: ordinates not strictly increasing near entry " +
                                  std::to_string(offset + i + 1));
    if (z.ordinates.front() <= 1.0)
        throw ValidationError("load_zeros: first ordinate implausibly small");
    return z;
}

void save_zeros(const ZetaZeroSeries& z, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw ValidationError("save_zeros: cannot open " + path);
    char buf[64];
    for (double v : z.ordinates) {
        std::snprintf(buf, sizeof(buf), "%.17g\n", v);
        out << buf;
    }
}

std::vector<double> normalized_gaps(const ZetaZeroSeries& z) {
    if (z.count() < 2) throw ValidationError("normalized_gaps: need at least two ordinates");
    std::vector<double> g(z.count() - 1);
    for (std::size_t i = 0; i + 1 < z.count(); ++i)
        g[i] = (z.ordinates[i + 1] - z.ordinates[i]) / TWO_PI *
               std::log(z.ordinates[i] / TWO_PI);
    return g;
}

MaxGapReport max_gap_report(const ZetaZeroSeries& z, std::size_t n) {
    if (n + 1 > z.count())
        throw ValidationError("max_gap_report: n exceeds available gaps");
    if (n < 2) throw ValidationError("max_gap_report: n too small");
    auto gaps = normalized_gaps(z);
    MaxGapReport r;
    r.n = n;
    r.observed = *std::max_element(gaps.begin(), gaps.begin() + n);
    r.predicted = std::sqrt(32.0 * std::log(static_cast<double>(n))) / TWO_PI;
    r.relative_difference = std::fabs(r.observed - r.predicted) / r.predicted;
    return r;
}

SmallGapHistogram small_gap_histogram(const ZetaZeroSeries& z, std::size_t n,
                                      std::size_t count, double bin_width) {
    if (bin_width <= 0.0) throw ValidationError("small_gap_histogram: bad bin width");
    if (n + 1 > z.count())
        throw ValidationError("small_gap_histogram: n exceeds available gaps");
    if (count * 10 > n)
        throw ValidationError("small_gap_histogram: count must be well below n");
    auto gaps = normalized_gaps(z);
    gaps.resize(n);
    const double scale = TWO_PI * std::cbrt(static_cast<double>(n));
    for (auto& g : gaps) g *= scale;
    std::partial_sort(gaps.begin(), gaps.begin() + count, gaps.end());
    gaps.resize(count);

    SmallGapHistogram h;
    h.bin_width = bin_width;
    h.values = gaps;
    const double vmax = gaps.back();
    const int bins = static_cast<int>(vmax / bin_width) + 1;
    h.counts.assign(bins, 0.0);
    for (double v : gaps) {
        int k = std::min(bins - 1, static_cast<int>(v / bin_width));
        h.counts[k] += 1.0;
    }
    h.bin_centers.resize(bins);
    h.reference.resize(bins);
    for (int k = 0; k < bins; ++k) {
        double u = (k + 0.5) * bin_width;
        h.bin_centers[k] = u;
        h.reference[k] = bin_width * u * u / (24.0 * PI);
    }
    return h;
}

}  // namespace extremegaps::zeta
