#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <stdexcept>

namespace fxinv::rng {

/// Philox4x32-10 counter-based generator. A 128-bit counter and 64-bit key
/// are bijectively mapped to 128 random bits, so any (seed, path, block)
/// triple can be evaluated independently of every other one. That is what
/// buys reproducible Monte Carlo under any thread scheduling: path i always
/// sees the same substream no matter which thread runs it.
struct Philox4x32 {
    using ctr_t = std::array<std::uint32_t, 4>;
    using key_t = std::array<std::uint32_t, 2>;

    static constexpr std::uint64_t M0 = 0xD2511F53ull;
    static constexpr std::uint64_t M1 = 0xCD9E8D57ull;
    static constexpr std::uint32_t W0 = 0x9E3779B9u;
    static constexpr std::uint32_t W1 = 0xBB67AE85u;

    static ctr_t block(ctr_t c, key_t k) {
        for (int round = 0; round < 10; ++round) {
            const std::uint64_t p0 = M0 * c[0];
            const std::uint64_t p1 = M1 * c[2];
            const ctr_t next = {
                static_cast<std::uint32_t>(p1 >> 32) ^ c[1] ^ k[0],
                static_cast<std::uint32_t>(p1),
                static_cast<std::uint32_t>(p0 >> 32) ^ c[3] ^ k[1],
                static_cast<std::uint32_t>(p0)};
            c = next;
            k[0] += W0;
            k[1] += W1;
        }
        return c;
    }
};

/// Inverse of the standard normal CDF, Beasley-Springer-Moro form.
/// Absolute error below ~3e-9 over (1e-10, 1-1e-10); plenty for Monte
/// Carlo and about 4x cheaper than a Box-Muller pair (no trig).
inline double inv_normal_cdf(double u) {
    static constexpr double a[4] = {2.50662823884, -18.61500062529,
                                    41.39119773534, -25.44106049637};
    static constexpr double b[4] = {-8.47351093090, 23.08336743743,
                                    -21.06224101826, 3.13082909833};
    static constexpr double c[9] = {
        0.3374754822726147, 0.9761690190917186, 0.1607979714918209,
        0.0276438810333863, 0.0038405729373609, 0.0003951896511919,
        0.0000321767881768, 0.0000002888167364, 0.0000003960315187};

    if (!(u > 0.0 && u < 1.0))
        throw std::invalid_argument("inv_normal_cdf: u must lie in (0,1)");

    const double y = u - 0.5;
    if (std::fabs(y) <= 0.42) {
        const double s = y * y;
        return y * (((a[3] * s + a[2]) * s + a[1]) * s + a[0]) /
               ((((b[3] * s + b[2]) * s + b[1]) * s + b[0]) * s + 1.0);
    }
    double r = (y > 0.0) ? 1.0 - u : u;
    const double s = std::log(-std::log(r));
    double x = c[8];
    for (int i = 7; i >= 0; --i) x = x * s + c[i];
    return (y > 0.0) ? x : -x;
}

/// Random substream dedicated to one Monte Carlo path. Streams with the same
/// seed but different path indices never overlap (the path index sits in the
/// upper counter words, the running block index in the lower ones).
class PathStream {
  public:
    PathStream(std::uint64_t seed, std::uint64_t path)
        : key_{static_cast<std::uint32_t>(seed),
               static_cast<std::uint32_t>(seed >> 32)},
          path_(path) {}

    std::uint32_t next_u32() {
        if (pos_ == 4) refill();
        return buf_[pos_++];
    }

    /// Uniform on the open interval (0,1) with 53-bit resolution.
    double uniform() {
        const std::uint64_t lo = next_u32();
        const std::uint64_t hi = next_u32();
        const std::uint64_t bits = (hi << 32) | lo;
        return (static_cast<double>(bits >> 11) + 0.5) * 0x1.0p-53;
    }

    /// Standard normal draw (inverse-CDF method, one uniform per draw).
    double gaussian() { return inv_normal_cdf(uniform()); }

    /// Poisson draw via Knuth's product method. Means above 30 are split
    /// into chunks so the running product never underflows.
    std::uint64_t poisson(double mean) {
        if (!(mean >= 0.0) || !std::isfinite(mean))
            throw std::invalid_argument("poisson: mean must be finite and non-negative");
        std::uint64_t total = 0;
        while (mean > 0.0) {
            const double m = (mean > 30.0) ? 30.0 : mean;
            mean -= m;
            const double limit = std::exp(-m);
            double prod = uniform();
            while (prod > limit) {
                ++total;
                prod *= uniform();
            }
        }
        return total;
    }

  private:
    void refill() {
        const Philox4x32::ctr_t ctr = {
            static_cast<std::uint32_t>(block_),
            static_cast<std::uint32_t>(block_ >> 32),
            static_cast<std::uint32_t>(path_),
            static_cast<std::uint32_t>(path_ >> 32)};
        buf_ = Philox4x32::block(ctr, key_);
        ++block_;
        pos_ = 0;
    }

    Philox4x32::key_t key_;
    std::uint64_t path_;
    std::uint64_t block_ = 0;
    std::array<std::uint32_t, 4> buf_{};
    int pos_ = 4;
};

}  // namespace fxinv::rng
