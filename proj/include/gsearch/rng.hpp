// Copyright (C) 2026 the gsearch authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "gsearch/errors.hpp"

namespace gsearch {

/// Deterministic random source. Wraps mt19937_64 but draws bounded integers
/// by rejection instead of std::uniform_int_distribution, whose output is
/// implementation-defined; the same seed must replay the same choices on
/// every platform and standard library.
class SeededRng {
   public:
    explicit SeededRng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next() { return engine_(); }

    /// Uniform draw from [0, n). n must be positive.
    std::size_t uniform_index(std::size_t n) {
        if (n == 0) throw ConfigError("uniform_index needs a positive bound");
        const std::uint64_t bound = static_cast<std::uint64_t>(n);
        const std::uint64_t limit = std::uint64_t(-1) - std::uint64_t(-1) % bound;
        std::uint64_t x;
        do {
            x = engine_();
        } while (x >= limit);
        return static_cast<std::size_t>(x % bound);
    }

    double uniform_real() {
        // 53 mantissa bits, the usual mt19937_64 -> double construction.
        return (engine_() >> 11) * (1.0 / 9007199254740992.0);
    }

    /// Fisher-Yates shuffle of the first `prefix` positions (prefix <= size).
    /// Each position i trades with a uniform pick from [i, size).
    template <typename T>
    void partial_shuffle(std::vector<T>& items, std::size_t prefix) {
        for (std::size_t i = 0; i < prefix && i + 1 < items.size(); ++i) {
            std::size_t j = i + uniform_index(items.size() - i);
            std::swap(items[i], items[j]);
        }
    }

   private:
    std::mt19937_64 engine_;
};

}  // namespace gsearch
