#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "weft/errors.hpp"

namespace weft {

/// Symbols are the integers 0..size-1 of their alphabet.
using Symbol = int;

class Alphabet {
public:
    explicit Alphabet(int size) : size_(size) {
        if (size < 1)
            throw error("alphabet size must be >= 1");
    }

    static Alphabet binary() { return Alphabet(2); }

    int size() const { return size_; }
    bool contains(Symbol a) const { return 0 <= a && a < size_; }

    void require(Symbol a) const {
        if (!contains(a))
            throw error("symbol " + std::to_string(a) + " out of range for alphabet of size " +
                        std::to_string(size_));
    }

    friend bool operator==(const Alphabet&, const Alphabet&) = default;

private:
    int size_;
};

inline void require_same(const Alphabet& a, const Alphabet& b) {
    if (!(a == b))
        throw alphabet_mismatch("alphabets differ (sizes " + std::to_string(a.size()) + " and " +
                                std::to_string(b.size()) + ")");
}

/// A finite word over an alphabet. Symbol i is the i-th letter.
class Word {
public:
    explicit Word(Alphabet alphabet) : alphabet_(alphabet) {}

    Word(Alphabet alphabet, std::vector<Symbol> symbols)
        : alphabet_(alphabet), symbols_(std::move(symbols)) {
        for (Symbol s : symbols_)
            alphabet_.require(s);
    }

    const Alphabet& alphabet() const { return alphabet_; }
    std::size_t size() const { return symbols_.size(); }
    bool empty() const { return symbols_.empty(); }
    Symbol operator[](std::size_t i) const { return symbols_[i]; }
    const std::vector<Symbol>& symbols() const { return symbols_; }

    void push_back(Symbol s) {
        alphabet_.require(s);
        symbols_.push_back(s);
    }

    Word prefix(std::size_t n) const {
        n = n < size() ? n : size();
        return Word(alphabet_, std::vector<Symbol>(symbols_.begin(), symbols_.begin() + n));
    }

    Word drop_front(std::size_t n) const {
        n = n < size() ? n : size();
        return Word(alphabet_, std::vector<Symbol>(symbols_.begin() + n, symbols_.end()));
    }

    Word append(Symbol s) const {
        Word w = *this;
        w.push_back(s);
        return w;
    }

    friend bool operator==(const Word&, const Word&) = default;

    // Rank in the |A|^n enumeration; letter i carries weight |A|^i.
    std::uint64_t rank() const {
        std::uint64_t r = 0, w = 1;
        for (Symbol s : symbols_) {
            r += w * std::uint64_t(s);
            w *= std::uint64_t(alphabet_.size());
        }
        return r;
    }

    static Word from_rank(Alphabet alphabet, std::size_t length, std::uint64_t rank) {
        std::vector<Symbol> syms(length);
        for (std::size_t i = 0; i < length; ++i) {
            syms[i] = Symbol(rank % std::uint64_t(alphabet.size()));
            rank /= std::uint64_t(alphabet.size());
        }
        return Word(alphabet, std::move(syms));
    }

    std::string str() const {
        std::string out;
        bool commas = alphabet_.size() > 10;
        for (std::size_t i = 0; i < symbols_.size(); ++i) {
            if (commas && i > 0)
                out += ',';
            out += std::to_string(symbols_[i]);
        }
        return out;
    }

private:
    Alphabet alphabet_;
    std::vector<Symbol> symbols_;
};

inline std::size_t common_prefix_length(const Word& u, const Word& v) {
    std::size_t n = u.size() < v.size() ? u.size() : v.size();
    for (std::size_t i = 0; i < n; ++i)
        if (u[i] != v[i])
            return i;
    return n;
}

// Number of words of the given length, or nullopt-style overflow guard via budget checks.
inline std::uint64_t word_count(const Alphabet& a, std::size_t length) {
    std::uint64_t n = 1;
    for (std::size_t i = 0; i < length; ++i) {
        if (n > (std::uint64_t(1) << 48))
            throw budget_error("word enumeration overflow at length " + std::to_string(length));
        n *= std::uint64_t(a.size());
    }
    return n;
}

} // namespace weft
