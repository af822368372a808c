#include "dunkl/rng.hpp"

#include <boost/math/special_functions/erf.hpp>

#include <cmath>
#include <stdexcept>

namespace dunkl {

namespace {

constexpr std::uint32_t kPhiloxM0 = 0xD2511F53u;
constexpr std::uint32_t kPhiloxM1 = 0xCD9E8D57u;
constexpr std::uint32_t kPhiloxW0 = 0x9E3779B9u;
constexpr std::uint32_t kPhiloxW1 = 0xBB67AE85u;

inline void mulhilo(std::uint32_t a, std::uint32_t b, std::uint32_t& hi, std::uint32_t& lo)
{
    const std::uint64_t p = static_cast<std::uint64_t>(a) * b;
    hi = static_cast<std::uint32_t>(p >> 32);
    lo = static_cast<std::uint32_t>(p);
}

inline Philox4x32::Counter philox_round(const Philox4x32::Counter& c, const Philox4x32::Key& k)
{
    std::uint32_t hi0, lo0, hi1, lo1;
    mulhilo(kPhiloxM0, c[0], hi0, lo0);
    mulhilo(kPhiloxM1, c[2], hi1, lo1);
    return {hi1 ^ c[1] ^ k[0], lo1, hi0 ^ c[3] ^ k[1], lo0};
}

}  // namespace

Philox4x32::Counter Philox4x32::generate(Counter ctr, Key key)
{
    ctr = philox_round(ctr, key);
    for (int r = 1; r < 10; ++r) {
        key[0] += kPhiloxW0;
        key[1] += kPhiloxW1;
        ctr = philox_round(ctr, key);
    }
    return ctr;
}

double uniform_from_bits(std::uint32_t hi, std::uint32_t lo)
{
    // 52 bits so that (bits + 1/2) 2^-52 is exact and stays below 1.
    const std::uint64_t bits = (static_cast<std::uint64_t>(hi) << 20) | (lo >> 12);
    return (static_cast<double>(bits) + 0.5) * 0x1.0p-52;
}

double normal_quantile(double p)
{
    if (!(p > 0.0 && p < 1.0))
        throw std::domain_error("normal_quantile: p must lie in (0, 1)");
    return -std::sqrt(2.0) * boost::math::erfc_inv(2.0 * p);
}

BrownianStream::BrownianStream(std::uint64_t master_seed, std::uint64_t path_index)
    : key_{static_cast<std::uint32_t>(master_seed), static_cast<std::uint32_t>(master_seed >> 32)},
      path_(path_index)
{
}

void BrownianStream::refill()
{
    const Philox4x32::Counter ctr{static_cast<std::uint32_t>(block_),
                                  static_cast<std::uint32_t>(block_ >> 32),
                                  static_cast<std::uint32_t>(path_),
                                  static_cast<std::uint32_t>(path_ >> 32)};
    const auto out = Philox4x32::generate(ctr, key_);
    ++block_;
    // Stored in reverse so that buffer_[--buffered_] pops words (0,1) first.
    buffer_[1] = normal_quantile(uniform_from_bits(out[0], out[1]));
    buffer_[0] = normal_quantile(uniform_from_bits(out[2], out[3]));
    buffered_ = 2;
}

double BrownianStream::next_normal()
{
    if (buffered_ == 0)
        refill();
    ++draws_;
    return buffer_[--buffered_];
}

void BrownianStream::fill_normal(std::span<double> out)
{
    for (auto& v : out)
        v = next_normal();
}

}  // namespace dunkl
