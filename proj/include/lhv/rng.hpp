#pragma once

#include <array>
#include <cstdint>
#include <random>
#include <string_view>

namespace lhv {

/// Identifies one random stream. (master_seed, stream_index) fully determine
/// every value the stream produces.
struct RngSeed {
    std::uint64_t master_seed = 0;
    std::uint64_t stream_index = 0;

    friend constexpr bool operator==(const RngSeed &, const RngSeed &) = default;
};

/// Independent purposes that draw from the same (master, index) pair.
enum class StreamDomain : std::uint32_t { Ensemble = 0, Coincidence = 1 };

inline constexpr std::string_view rng_identifier =
    "std::mt19937_64 seeded via std::seed_seq{master_lo, master_hi, index_lo, index_hi, domain, sub_lo, sub_hi}; "
    "uniform = (x >> 11) * 2^-53; v1";

/// Random stream backed by std::mt19937_64. Both the engine and std::seed_seq
/// are fully specified by the C++ standard, and the real-valued conversion is
/// done here rather than through the implementation-defined distributions, so
/// sequences are identical across standard libraries.
class Stream {
public:
    explicit Stream(RngSeed seed, StreamDomain domain = StreamDomain::Ensemble, std::uint64_t sub = 0)
    {
        auto lo = [](std::uint64_t v) { return static_cast<std::uint32_t>(v & 0xffffffffu); };
        auto hi = [](std::uint64_t v) { return static_cast<std::uint32_t>(v >> 32); };
        const std::array<std::uint32_t, 7> words{lo(seed.master_seed), hi(seed.master_seed),
                                                 lo(seed.stream_index), hi(seed.stream_index),
                                                 static_cast<std::uint32_t>(domain), lo(sub), hi(sub)};
        std::seed_seq seq(words.begin(), words.end());
        engine_.seed(seq);
    }

    /// Uniform on [0, 1) with 53 random bits.
    double uniform01() noexcept { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    /// Uniform on [a, b).
    double uniform(double a, double b) noexcept { return a + (b - a) * uniform01(); }

    std::uint64_t next_u64() noexcept { return engine_(); }

private:
    std::mt19937_64 engine_;
};

} // namespace lhv
