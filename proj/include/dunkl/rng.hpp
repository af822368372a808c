#pragma once

#include <array>
#include <cstdint>
#include <span>

namespace dunkl {

/// Philox4x32-10 counter-based block function (Salmon et al., SC'11).
struct Philox4x32 {
    using Counter = std::array<std::uint32_t, 4>;
    using Key = std::array<std::uint32_t, 2>;

    static Counter generate(Counter ctr, Key key);
};

/// (hi:lo >> 12 + 1/2) 2^-52: uniform in (0, 1) from the top 52 bits of the
/// 64-bit word hi:lo; never 0 or 1.
double uniform_from_bits(std::uint32_t hi, std::uint32_t lo);

/// Standard normal quantile.
double normal_quantile(double p);

/// Gaussian source for one path, a pure function of (master_seed, path_index).
///
/// Block b of the stream is Philox4x32-10 applied to the counter
/// {b_lo, b_hi, path_lo, path_hi} under the key {seed_lo, seed_hi}. Each block
/// yields two uniforms, words (0,1) then (2,3), and each uniform is turned
/// into a standard normal by the inverse CDF. Draws are consumed in order.
class BrownianStream {
public:
    BrownianStream(std::uint64_t master_seed, std::uint64_t path_index);

    double next_normal();
    void fill_normal(std::span<double> out);

    std::uint64_t draws() const { return draws_; }
    std::uint64_t path_index() const { return path_; }

private:
    void refill();

    Philox4x32::Key key_;
    std::uint64_t path_;
    std::uint64_t block_ = 0;
    std::array<double, 2> buffer_{};
    int buffered_ = 0;
    std::uint64_t draws_ = 0;
};

}  // namespace dunkl
