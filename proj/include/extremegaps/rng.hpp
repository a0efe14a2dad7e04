#pragma once

#include <cstdint>
#include <cmath>
#include <complex>
#include <array>

namespace extremegaps::rng {

// Philox4x64-10 counter-based generator. Distinct (seed, stream_id) keys give
// independent streams; output depends only on (key, counter), so parallel
// trials reproduce bit-identically regardless of scheduling.
struct Philox4x64 {
    static constexpr std::uint64_t M0 = 0xD2E7470EE14C6C93ULL;
    static constexpr std::uint64_t M1 = 0xCA5A826395121157ULL;
    static constexpr std::uint64_t W0 = 0x9E3779B97F4A7C15ULL;
    static constexpr std::uint64_t W1 = 0xBB67AE8584CAA73BULL;

    static inline void mulhilo(std::uint64_t a, std::uint64_t b,
                               std::uint64_t& hi, std::uint64_t& lo) {
        unsigned __int128 p = static_cast<unsigned __int128>(a) * b;
        hi = static_cast<std::uint64_t>(p >> 64);
        lo = static_cast<std::uint64_t>(p);
    }

    static std::array<std::uint64_t, 4> block(std::array<std::uint64_t, 4> ctr,
                                              std::uint64_t key0, std::uint64_t key1) {
        for (int round = 0; round < 10; ++round) {
            std::uint64_t hi0, lo0, hi1, lo1;
            mulhilo(M0, ctr[0], hi0, lo0);
            mulhilo(M1, ctr[2], hi1, lo1);
            ctr = {hi1 ^ ctr[1] ^ key0, lo1, hi0 ^ ctr[3] ^ key1, lo0};
            key0 += W0;
            key1 += W1;
        }
        return ctr;
    }
};

struct RngStream {
    std::uint64_t seed = 0;
    std::uint64_t stream_id = 0;

    RngStream() = default;
    RngStream(std::uint64_t seed_, std::uint64_t stream_id_)
        : seed(seed_), stream_id(stream_id_) {}

    std::uint64_t next_u64() {
        if (buf_pos_ == 4) refill();
        return buf_[buf_pos_++];
    }

    // uniform on [0,1), 53 bits
    double uniform() {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    // uniform on (0,1], safe under log()
    double uniform_pos() {
        return (static_cast<double>(next_u64() >> 11) + 1.0) * 0x1.0p-53;
    }

    double normal() {
        if (have_cached_) {
            have_cached_ = false;
            return cached_;
        }
        double u1 = uniform_pos();
        double u2 = uniform();
        double r = std::sqrt(-2.0 * std::log(u1));
        double a = 6.283185307179586476925286766559 * u2;
        cached_ = r * std::sin(a);
        have_cached_ = true;
        return r * std::cos(a);
    }

    // standard complex normal, E|z|^2 = 1
    std::complex<double> complex_normal() {
        constexpr double s = 0.70710678118654752440;
        double re = normal(), im = normal();
        return {s * re, s * im};
    }

    // Gamma(shape, 1) by Marsaglia-Tsang; requires shape >= 1
    double gamma(double shape) {
        double d = shape - 1.0 / 3.0;
        double c = 1.0 / std::sqrt(9.0 * d);
        for (;;) {
            double x, v;
            do {
                x = normal();
                v = 1.0 + c * x;
            } while (v <= 0.0);
            v = v * v * v;
            double u = uniform_pos();
            if (std::log(u) < 0.5 * x * x + d - d * v + d * std::log(v)) return d * v;
        }
    }

    // chi distribution with k degrees of freedom (k >= 2)
    double chi(double k) {
        return std::sqrt(2.0 * gamma(0.5 * k));
    }

private:
    void refill() {
        buf_ = Philox4x64::block(ctr_, seed, stream_id);
        buf_pos_ = 0;
        if (++ctr_[0] == 0 && ++ctr_[1] == 0 && ++ctr_[2] == 0) ++ctr_[3];
    }

    std::array<std::uint64_t, 4> ctr_{0, 0, 0, 0};
    std::array<std::uint64_t, 4> buf_{};
    int buf_pos_ = 4;
    double cached_ = 0.0;
    bool have_cached_ = false;
};

}  // namespace extremegaps::rng
