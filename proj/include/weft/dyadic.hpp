#pragma once

#include <cstddef>
#include <map>
#include <memory>
#include <numeric>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "weft/alphabet.hpp"
#include "weft/causal.hpp"
#include "weft/errors.hpp"
#include "weft/stream.hpp"

namespace weft {

using BigInt = boost::multiprecision::cpp_int;

/// Fraction with odd denominator — exactly the rationals that live in Z₂.
struct Rational {
    BigInt num;
    BigInt den; // positive and odd

    Rational(BigInt n, BigInt d) : num(std::move(n)), den(std::move(d)) {
        if (den == 0)
            throw error("zero denominator");
        if (den % 2 == 0)
            throw error("denominator must be odd to embed in Z_2");
        if (den < 0) {
            num = -num;
            den = -den;
        }
        BigInt g = boost::multiprecision::gcd(num < 0 ? BigInt(-num) : num, den);
        if (g > 1) {
            num /= g;
            den /= g;
        }
    }

    friend bool operator==(const Rational&, const Rational&) = default;
};

/// A 2-adic integer: its bitstream, least-significant bit first, kept in
/// canonical eventually-periodic form. head = parity, tail = (x − parity)/2.
class Dyadic {
public:
    explicit Dyadic(const EpStream& bits) : bits_(normalize(bits)) {
        if (bits_.alphabet().size() != 2)
            throw alphabet_mismatch("2-adic bitstreams are binary");
    }

    const EpStream& bits() const { return bits_; }
    int bit(std::size_t n) const { return bits_.at(n); }
    int parity() const { return bits_.at(0); }

    friend bool operator==(const Dyadic&, const Dyadic&) = default; // canonical, so structural

private:
    EpStream bits_;
};

/// p/q with q odd: repeated parity-and-halve on the numerator (the parity of
/// p/q equals the parity of p since q is a unit mod 2). The numerator state is
/// bounded, so it must revisit itself: that revisit is the period.
inline Dyadic from_rational(BigInt p, BigInt q) {
    if (q == 0)
        throw error("division by zero");
    if (q % 2 == 0)
        throw error("denominator must be odd (q = " + q.str() + ")");
    if (q < 0) {
        p = -p;
        q = -q;
    }
    Alphabet bin = Alphabet::binary();
    std::vector<Symbol> emitted;
    std::map<BigInt, std::size_t> first_seen;
    BigInt n = std::move(p);
    while (true) {
        auto hit = first_seen.find(n);
        if (hit != first_seen.end()) {
            std::size_t start = hit->second;
            Word pre(bin, std::vector<Symbol>(emitted.begin(),
                                              emitted.begin() + std::ptrdiff_t(start)));
            Word per(bin, std::vector<Symbol>(emitted.begin() + std::ptrdiff_t(start),
                                              emitted.end()));
            return Dyadic(EpStream(bin, std::move(pre), std::move(per)));
        }
        first_seen.emplace(n, emitted.size());
        int bit = n % 2 == 0 ? 0 : 1;
        emitted.push_back(bit);
        n = (n - bit * q) / 2;
    }
}

inline Dyadic from_int(const BigInt& z) { return from_rational(z, 1); }

/// Preperiod P plus 2^p · (period value V) repeated: x = P + 2^p·V/(1 − 2^m).
inline Rational to_rational(const Dyadic& x) {
    const EpStream& s = x.bits();
    std::size_t p = s.preperiod().size(), m = s.period().size();
    BigInt pre_value = 0, period_value = 0;
    for (std::size_t i = 0; i < p; ++i)
        if (s.preperiod()[i])
            boost::multiprecision::bit_set(pre_value, unsigned(i));
    for (std::size_t i = 0; i < m; ++i)
        if (s.period()[i])
            boost::multiprecision::bit_set(period_value, unsigned(i));
    BigInt den = BigInt(1) - (BigInt(1) << m);
    BigInt num = pre_value * den + (BigInt(1) << p) * period_value;
    return Rational(std::move(num), std::move(den));
}

inline std::optional<BigInt> to_int(const Dyadic& x) {
    Rational r = to_rational(x);
    if (r.den != 1)
        return std::nullopt;
    return r.num;
}

/// x mod 2^n, in [0, 2^n).
inline BigInt residue(const Dyadic& x, std::size_t n) {
    BigInt r = 0;
    for (std::size_t i = 0; i < n; ++i)
        if (x.bit(i))
            boost::multiprecision::bit_set(r, unsigned(i));
    return r;
}

/// Bit-serial addition. Once both summands are inside their periods the whole
/// computation state is (carry, phase); that state space is finite, so the
/// first revisit delimits the output's period.
inline Dyadic add(const Dyadic& x, const Dyadic& y) {
    const EpStream& a = x.bits();
    const EpStream& b = y.bits();
    std::size_t pre = std::max(a.preperiod().size(), b.preperiod().size());
    std::size_t cycle = std::lcm(a.period().size(), b.period().size());
    std::vector<std::size_t> seen(2 * cycle, std::size_t(-1));
    std::vector<Symbol> emitted;
    int carry = 0;
    for (std::size_t n = 0;; ++n) {
        if (n >= pre) {
            std::size_t state = std::size_t(carry) * cycle + (n - pre) % cycle;
            if (seen[state] != std::size_t(-1)) {
                std::size_t start = seen[state];
                Alphabet bin = Alphabet::binary();
                Word prew(bin, std::vector<Symbol>(emitted.begin(),
                                                   emitted.begin() + std::ptrdiff_t(start)));
                Word perw(bin, std::vector<Symbol>(emitted.begin() + std::ptrdiff_t(start),
                                                   emitted.end()));
                return Dyadic(EpStream(bin, std::move(prew), std::move(perw)));
            }
            seen[state] = emitted.size();
        }
        int s = a.at(n) + b.at(n) + carry;
        emitted.push_back(s & 1);
        carry = s >> 1;
    }
}

inline Dyadic complement(const Dyadic& x) {
    auto flip = [](const Word& w) {
        std::vector<Symbol> s;
        s.reserve(w.size());
        for (Symbol b : w.symbols())
            s.push_back(1 - b);
        return Word(w.alphabet(), std::move(s));
    };
    return Dyadic(EpStream(x.bits().alphabet(), flip(x.bits().preperiod()),
                           flip(x.bits().period())));
}

/// −x = ~x + 1, the infinite two's complement.
inline Dyadic neg(const Dyadic& x) { return add(complement(x), from_int(1)); }

/// Exact product via the rational forms; bit-serial multiplication has an
/// unbounded carry, while the rational round trip stays finite-state.
inline Dyadic mul(const Dyadic& x, const Dyadic& y) {
    Rational a = to_rational(x), b = to_rational(y);
    return from_rational(a.num * b.num, a.den * b.den);
}

inline Dyadic sub(const Dyadic& x, const Dyadic& y) { return add(x, neg(y)); }

inline Dyadic affine(const Dyadic& a, const Dyadic& b, const Dyadic& x) {
    return add(mul(a, x), b);
}

/// a·result ≡ 1 (mod 2ⁿ) by Newton lifting: a correct inverse mod 2^j squares
/// its precision through x ← x(2 − ax).
inline BigInt inv_mod_pow2(const BigInt& a, std::size_t n) {
    if (n < 1)
        throw error("modulus 2^n needs n >= 1");
    if (a % 2 == 0)
        throw error("even elements are not units in Z_2");
    BigInt x = 1;
    for (std::size_t prec = 1; prec < n; prec *= 2) {
        BigInt mod = BigInt(1) << unsigned(std::min(2 * prec, n));
        x = (x * (2 - a * x)) % mod;
        if (x < 0)
            x += mod;
    }
    BigInt mod = BigInt(1) << unsigned(n);
    x %= mod;
    if (x < 0)
        x += mod;
    return x;
}

inline BigInt inv_mod_pow2(const Dyadic& a, std::size_t n) {
    if (a.parity() == 0)
        throw error("even elements are not units in Z_2");
    return inv_mod_pow2(residue(a, n), n);
}

namespace detail {

// bit n of (a·x + b) given everything mod 2^(n+1); residues accumulate one
// input bit per output bit, so the read bound for a 0-causal map is exact
struct AffineProducer {
    Stream in;
    EpStream a_bits;
    EpStream b_bits;
    BigInt ares = 0, bres = 0, xres = 0;
    std::size_t filled = 0;

    Symbol operator()(std::size_t n) {
        while (filled <= n) {
            if (a_bits.at(filled))
                boost::multiprecision::bit_set(ares, unsigned(filled));
            if (b_bits.at(filled))
                boost::multiprecision::bit_set(bres, unsigned(filled));
            if (in.at(filled))
                boost::multiprecision::bit_set(xres, unsigned(filled));
            ++filled;
        }
        BigInt t = ares * xres + bres;
        return boost::multiprecision::bit_test(t, unsigned(n)) ? 1 : 0;
    }
};

} // namespace detail

/// x ↦ ax + b as a stream function: 0-causal always, bicausal when a is a
/// unit (odd).
inline CausalFn affine_fn(const Dyadic& a, const Dyadic& b) {
    Alphabet bin = Alphabet::binary();
    EpStream a_bits = a.bits(), b_bits = b.bits();
    CausalFn f(bin, bin, [a_bits, b_bits](const Stream& in) {
        auto prod = std::make_shared<detail::AffineProducer>(
            detail::AffineProducer{in, a_bits, b_bits});
        return [prod](std::size_t n) { return (*prod)(n); };
    });
    std::string what = "affine x -> ax+b";
    f = f.with_claim(0, Certificate::by_construction(what));
    if (a.parity() == 1)
        f = f.with_bicausal(Certificate::by_construction(what + " with a odd (a unit)"));
    return f;
}

/// Doubling is c₀: shifts the bitstream right one place. Computed through the
/// residue arithmetic rather than by re-indexing, so agreement with
/// prepend_fn(0) is a real check.
inline CausalFn double_fn() {
    Alphabet bin = Alphabet::binary();
    CausalFn f(bin, bin, [](const Stream& in) {
        auto xres = std::make_shared<BigInt>(0);
        return [in, xres](std::size_t n) {
            if (n >= 1 && in.at(n - 1))
                boost::multiprecision::bit_set(*xres, unsigned(n - 1));
            BigInt t = *xres << 1;
            return boost::multiprecision::bit_test(t, unsigned(n)) ? 1 : 0;
        };
    });
    return f.with_claim(1, Certificate::by_construction("x -> 2x, the prepend-0 map c_0"));
}

inline CausalFn double_plus_one_fn() {
    Alphabet bin = Alphabet::binary();
    CausalFn f(bin, bin, [](const Stream& in) {
        auto xres = std::make_shared<BigInt>(0);
        return [in, xres](std::size_t n) {
            if (n >= 1 && in.at(n - 1))
                boost::multiprecision::bit_set(*xres, unsigned(n - 1));
            BigInt t = (*xres << 1) + 1;
            return boost::multiprecision::bit_test(t, unsigned(n)) ? 1 : 0;
        };
    });
    return f.with_claim(1, Certificate::by_construction("x -> 2x+1, the prepend-1 map c_1"));
}

/// x ↦ (x − parity(x))/2: the 2-adic reading of the tail map.
inline CausalFn tail2_fn() {
    Alphabet bin = Alphabet::binary();
    CausalFn f(bin, bin, [](const Stream& in) {
        auto xres = std::make_shared<BigInt>(0);
        auto filled = std::make_shared<std::size_t>(0);
        return [in, xres, filled](std::size_t n) {
            while (*filled <= n + 1) {
                if (in.at(*filled))
                    boost::multiprecision::bit_set(*xres, unsigned(*filled));
                ++*filled;
            }
            BigInt t = (*xres - in.at(0)) >> 1;
            return boost::multiprecision::bit_test(t, unsigned(n)) ? 1 : 0;
        };
    });
    return f.with_claim(-1, Certificate::by_construction("x -> (x - parity)/2, the tail map"));
}

/// Dyadic literals: decimal integers, `p/q` with odd q, or stream literals.
inline Dyadic parse_dyadic(const std::string& text) {
    if (text.find('(') != std::string::npos)
        return Dyadic(parse_stream(text, Alphabet::binary()));
    auto parse_decimal = [](const std::string& part) {
        if (part.empty())
            throw parse_error("empty number");
        std::size_t start = part[0] == '-' ? 1 : 0;
        if (start == part.size())
            throw parse_error("bare sign is not a number");
        for (std::size_t i = start; i < part.size(); ++i)
            if (part[i] < '0' || part[i] > '9')
                throw parse_error("bad number \"" + part + "\"");
        return BigInt(part);
    };
    std::size_t slash = text.find('/');
    if (slash == std::string::npos)
        return from_int(parse_decimal(text));
    BigInt p = parse_decimal(text.substr(0, slash));
    BigInt q = parse_decimal(text.substr(slash + 1));
    return from_rational(std::move(p), std::move(q));
}

inline std::string format_dyadic(const Dyadic& x) {
    Rational r = to_rational(x);
    if (r.den == 1)
        return r.num.str();
    return r.num.str() + "/" + r.den.str();
}

} // namespace weft
