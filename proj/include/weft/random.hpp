#pragma once

#include <cstdint>
#include <random>

#include "weft/alphabet.hpp"
#include "weft/stream.hpp"

namespace weft {

/// Seeded generator with hand-rolled bounded sampling, so identical seeds give
/// identical draws on every platform (std::uniform_int_distribution does not
/// promise that; the mt19937_64 sequence itself does).
class Rng {
public:
    explicit Rng(std::uint64_t seed) : eng_(seed) {}

    std::uint64_t next() { return eng_(); }

    std::uint64_t below(std::uint64_t n) {
        // rejection sampling over the largest multiple of n
        std::uint64_t limit = ~std::uint64_t(0) - ~std::uint64_t(0) % n;
        std::uint64_t v;
        do {
            v = eng_();
        } while (v >= limit);
        return v % n;
    }

    Symbol symbol(const Alphabet& a) { return Symbol(below(std::uint64_t(a.size()))); }

    bool coin() { return (eng_() & 1) != 0; }

    Word word(const Alphabet& a, std::size_t len) {
        Word w(a);
        for (std::size_t i = 0; i < len; ++i)
            w.push_back(symbol(a));
        return w;
    }

    // preperiod length in [0, max_pre], period length in [1, max_period]
    EpStream ep_stream(const Alphabet& a, std::size_t max_pre, std::size_t max_period) {
        std::size_t p = std::size_t(below(max_pre + 1));
        std::size_t m = 1 + std::size_t(below(max_period));
        return normalize(EpStream(a, word(a, p), word(a, m)));
    }

private:
    std::mt19937_64 eng_;
};

} // namespace weft
