#pragma once

#include <array>
#include <cstdint>
#include <string_view>

namespace nuinarch {

// Counter-based generator in the Philox 4x64-10 family. A stream is fully
// identified by (seed, stream_id); streams with distinct identities are
// statistically independent and may be consumed concurrently. Draw sequences
// are bit-for-bit reproducible across platforms and thread counts.
class RngStream {
public:
    RngStream() noexcept : RngStream(0, 0) {}
    RngStream(std::uint64_t seed, std::uint64_t stream_id) noexcept
        : seed_(seed), stream_id_(stream_id) {}

    std::uint64_t seed() const noexcept { return seed_; }
    std::uint64_t stream_id() const noexcept { return stream_id_; }

    std::uint64_t next_u64() noexcept {
        if (pos_ == 4) refill();
        return block_[pos_++];
    }

    // Uniform on the open interval (0, 1); never returns 0 or 1.
    double next_uniform() noexcept {
        return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
    }

    // Standard normal via the polar method; one draw is cached.
    double next_normal() noexcept {
        if (has_spare_) {
            has_spare_ = false;
            return spare_;
        }
        return normal_pair();
    }

private:
    void refill() noexcept;
    double normal_pair() noexcept;

    std::uint64_t seed_;
    std::uint64_t stream_id_;
    std::uint64_t ctr_lo_ = 0;
    std::uint64_t ctr_hi_ = 0;
    std::array<std::uint64_t, 4> block_{};
    unsigned pos_ = 4;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

// Derives a child seed from a master seed and a purpose tag, so that distinct
// parts of an experiment consume unrelated streams while remaining a pure
// function of the master seed.
std::uint64_t derive_seed(std::uint64_t seed, std::string_view tag) noexcept;

}  // namespace nuinarch
