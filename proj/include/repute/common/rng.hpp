#pragma once

#include <cstdint>
#include <random>
#include <string>

#include "repute/common/bigint.hpp"
#include "repute/common/hash.hpp"

namespace repute {

// Deterministic random stream. Every consumer in the library takes one of
// these explicitly; nothing reads std::random_device, so a run is a pure
// function of its seeds. fork() derives an independent substream from the
// construction seed, so substreams do not depend on how far this stream
// has been consumed.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : seed_(seed), engine_(seed) {}

    Rng fork(const std::string& tag) const { return Rng(derive_seed(seed_, tag)); }

    std::uint64_t seed() const { return seed_; }

    std::uint64_t next_u64() { return engine_(); }

    // uniform in [0, bound), bound >= 1
    std::uint64_t below(std::uint64_t bound) {
        std::uniform_int_distribution<std::uint64_t> dist(0, bound - 1);
        return dist(engine_);
    }

    // uniform big integer in [0, bound) by rejection over whole bytes
    Int int_below(const Int& bound) {
        if (bound <= 0) {
            throw std::invalid_argument("int_below: bound must be positive");
        }
        const std::size_t bits = msb(bound) + 1;
        const std::size_t bytes = (bits + 7) / 8;
        const unsigned top_mask = (bits % 8 == 0) ? 0xffu : ((1u << (bits % 8)) - 1u);
        while (true) {
            Int v = 0;
            for (std::size_t i = 0; i < bytes; ++i) {
                unsigned byte = static_cast<unsigned>(below(256));
                if (i == 0) {
                    byte &= top_mask;
                }
                v = (v << 8) | byte;
            }
            if (v < bound) {
                return v;
            }
        }
    }

    // uniform in [lo, hi)
    Int int_range(const Int& lo, const Int& hi) { return lo + int_below(hi - lo); }

    // uniform invertible element modulo m
    Int unit_mod(const Int& m) {
        while (true) {
            Int v = int_below(m);
            if (v > 0 && gcd(v, m) == 1) {
                return v;
            }
        }
    }

    bool bernoulli(const Rational& rate) {
        Int den = denominator(rate);
        Int num = numerator(rate);
        return Int(int_below(den)) < num;
    }

    std::mt19937_64& engine() { return engine_; }

private:
    std::uint64_t seed_;
    std::mt19937_64 engine_;
};

}  // namespace repute
