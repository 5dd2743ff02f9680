#include "nuinarch/rng.hpp"

#include <cmath>

namespace nuinarch {

namespace {

constexpr std::uint64_t kM0 = 0xD2E7470EE14C6C93ULL;
constexpr std::uint64_t kM1 = 0xCA5A826395121157ULL;
constexpr std::uint64_t kW0 = 0x9E3779B97F4A7C15ULL;
constexpr std::uint64_t kW1 = 0xBB67AE8584CAA73BULL;

inline std::uint64_t mulhi(std::uint64_t a, std::uint64_t b) noexcept {
    return static_cast<std::uint64_t>(
        (static_cast<unsigned __int128>(a) * b) >> 64);
}

}  // namespace

void RngStream::refill() noexcept {
    std::uint64_t x0 = ctr_lo_;
    std::uint64_t x1 = ctr_hi_;
    std::uint64_t x2 = 0;
    std::uint64_t x3 = 0;
    std::uint64_t k0 = seed_;
    std::uint64_t k1 = stream_id_;
    for (int round = 0; round < 10; ++round) {
        const std::uint64_t hi0 = mulhi(kM0, x0);
        const std::uint64_t lo0 = kM0 * x0;
        const std::uint64_t hi1 = mulhi(kM1, x2);
        const std::uint64_t lo1 = kM1 * x2;
        x0 = hi1 ^ x1 ^ k0;
        x1 = lo1;
        x2 = hi0 ^ x3 ^ k1;
        x3 = lo0;
        k0 += kW0;
        k1 += kW1;
    }
    block_ = {x0, x1, x2, x3};
    pos_ = 0;
    if (++ctr_lo_ == 0) ++ctr_hi_;
}

double RngStream::normal_pair() noexcept {
    double u, v, s;
    do {
        u = 2.0 * next_uniform() - 1.0;
        v = 2.0 * next_uniform() - 1.0;
        s = u * u + v * v;
    } while (s >= 1.0 || s == 0.0);
    const double f = std::sqrt(-2.0 * std::log(s) / s);
    spare_ = v * f;
    has_spare_ = true;
    return u * f;
}

std::uint64_t derive_seed(std::uint64_t seed, std::string_view tag) noexcept {
    std::uint64_t h = 0xCBF29CE484222325ULL;
    for (const char c : tag) {
        h ^= static_cast<unsigned char>(c);
        h *= 0x100000001B3ULL;
    }
    std::uint64_t z = seed ^ h;
    z += 0x9E3779B97F4A7C15ULL;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

}  // namespace nuinarch
