#pragma once

#include <cstdint>
#include <random>

namespace urbanmp {

/// Portable random stream.
///
/// Raw bits come from std::mt19937_64, whose output sequence is fixed by the
/// C++ standard. Uniform and normal variates are derived here rather than via
/// <random> distributions, whose algorithms are implementation-defined:
///   uniform  = (raw >> 11) * 2^-53, in [0, 1)
///   normal   = Box-Muller on (1 - u1, u2), both outputs used in order
/// so a given seed yields the same doubles on every conforming platform.
class RandomStream {
public:
    explicit RandomStream(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next_u64() { return engine_(); }
    double uniform();
    double standard_normal();

private:
    std::mt19937_64 engine_;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

/// SplitMix64 finalizer; used to derive independent child seeds.
std::uint64_t splitmix64(std::uint64_t x);

/// Child seed for one sweep environment. Depends only on the master seed and
/// the bit pattern of nu, so sweep order never changes a result.
std::uint64_t derive_seed(std::uint64_t master_seed, double nu);

} // namespace urbanmp
