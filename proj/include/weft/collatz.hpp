#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "weft/causal.hpp"
#include "weft/coalgebra.hpp"
#include "weft/dyadic.hpp"
#include "weft/errors.hpp"
#include "weft/stream.hpp"
#include "weft/woven.hpp"

namespace weft {

/// T on Z₂: halve when even, (3x+1)/2 when odd — the weave of f₀ = id and
/// f₁ = 3x+2 applied to the tail, computed here exactly on bitstreams.
inline Dyadic collatz_t(const Dyadic& x) {
    Dyadic t = Dyadic(tail(x.bits()));
    if (x.parity() == 0)
        return t;
    return affine(from_int(3), from_int(2), t);
}

/// The same map as a certified stream function: weave(identity, affine(3,2)).
inline CausalFn collatz_t_fn() {
    Alphabet bin = Alphabet::binary();
    return weave(FunctionFamily(
        bin, {identity_fn(bin), affine_fn(from_int(3), from_int(2))}));
}

/// Collatz on the positive integers, halved odd steps: C(n) = n/2 or (3n+1)/2.
inline BigInt c_step(const BigInt& n) {
    if (n % 2 == 0)
        return n / 2;
    return (3 * n + 1) / 2;
}

struct Trajectory {
    BigInt start;
    std::vector<BigInt> steps; // the orbit, starting at `start`
    bool reached_one = false;
    std::optional<std::size_t> stopping_index; // position of the first 1
};

inline Trajectory trajectory(const BigInt& start, std::size_t max_steps = 10000) {
    if (start < 1)
        throw error("trajectories are tracked for n >= 1");
    Trajectory t;
    t.start = start;
    BigInt n = start;
    t.steps.push_back(n);
    for (std::size_t i = 0; n != 1 && i < max_steps; ++i) {
        n = c_step(n);
        t.steps.push_back(n);
    }
    for (std::size_t i = 0; i < t.steps.size(); ++i)
        if (t.steps[i] == 1) {
            t.reached_one = true;
            t.stopping_index = i;
            break;
        }
    return t;
}

/// Sweep-friendly check that avoids big-integer traffic until 3n+1 would
/// overflow 64 bits.
inline bool reaches_one(std::uint64_t n, std::size_t max_steps = 10000) {
    constexpr std::uint64_t guard = (~std::uint64_t(0) - 1) / 3;
    for (std::size_t i = 0; i < max_steps; ++i) {
        if (n == 1)
            return true;
        if (n % 2 == 0) {
            n /= 2;
        } else {
            if (n > guard) {
                // continue exactly in big integers
                Trajectory t = trajectory(BigInt(n), max_steps - i);
                return t.reached_one;
            }
            n = (3 * n + 1) / 2;
        }
    }
    return n == 1;
}

/// The parity-vector map Q = the morphism coinduced by ⟨head, T⟩; bicausal
/// because T is woven from bicausal members and the head witness is the
/// identity table.
inline CausalFn q_fn() {
    Alphabet bin = Alphabet::binary();
    return coinduce_stream_fn(
        StreamFnCoalgebra::with_witness(bin, bin, {0, 1}, collatz_t_fn()));
}

/// Lazy parity vector of x: bit n is the parity of Tⁿ(x).
using ParityVector = Stream;

inline ParityVector parity_vector_q(const Stream& x) { return q_fn()(x); }
inline ParityVector parity_vector_q(const Dyadic& x) { return q_fn()(x.bits()); }

/// Q⁻¹ mod 2ⁿ from the parity vector: the i-th one (at position dᵢ)
/// contributes −2^(dᵢ)/3^(i+1). Ones at positions ≥ n have 2-adic valuation
/// ≥ n, so truncating the sum cannot disturb the first n bits.
inline BigInt inverse_q_residue(const Stream& sigma, std::size_t n) {
    if (n < 1)
        throw error("residue precision needs n >= 1");
    BigInt mod = BigInt(1) << unsigned(n);
    BigInt inv3 = inv_mod_pow2(BigInt(3), n);
    BigInt acc = 0;
    BigInt coeff = inv3; // 3^-(i+1) for the i-th one seen
    for (std::size_t ell = 0; ell < n; ++ell) {
        if (sigma.at(ell) == 1) {
            acc = (acc + (BigInt(1) << unsigned(ell)) * coeff) % mod;
            coeff = (coeff * inv3) % mod;
        }
    }
    BigInt x = (-acc) % mod;
    if (x < 0)
        x += mod;
    return x;
}

/// Exact Q⁻¹ on an eventually periodic parity vector: the preperiod
/// contributes finitely many terms and each period pass scales the previous
/// one by 2^m/3^s, so the periodic part sums to a geometric series with the
/// odd denominator 3^s − 2^m.
inline Dyadic inverse_q_exact(const EpStream& sigma_raw) {
    if (sigma_raw.alphabet().size() != 2)
        throw alphabet_mismatch("parity vectors are binary");
    EpStream sigma = normalize(sigma_raw);
    const Word& u = sigma.preperiod();
    const Word& v = sigma.period();
    std::vector<std::size_t> pre_ones, per_ones;
    for (std::size_t i = 0; i < u.size(); ++i)
        if (u[i] == 1)
            pre_ones.push_back(i);
    for (std::size_t i = 0; i < v.size(); ++i)
        if (v[i] == 1)
            per_ones.push_back(i);
    std::size_t r = pre_ones.size(), s = per_ones.size();
    BigInt three_r = 1;
    for (std::size_t i = 0; i < r; ++i)
        three_r *= 3;
    BigInt three_s = 1;
    for (std::size_t i = 0; i < s; ++i)
        three_s *= 3;
    // x = −[ Σ_t 2^(a_t)·3^(r−t) · (3^s − 2^m) + Σ_t 2^(p+b_t)·3^(s−t) ] / (3^r·(3^s − 2^m))
    BigInt tail_den = three_s - (BigInt(1) << unsigned(v.size()));
    BigInt num = 0;
    BigInt scale = three_r; // 3^(r−t) for t = 1..r
    for (std::size_t t = 0; t < r; ++t) {
        scale /= 3;
        num += (BigInt(1) << unsigned(pre_ones[t])) * scale * tail_den;
    }
    scale = three_s; // 3^(s−t) for t = 1..s
    for (std::size_t t = 0; t < s; ++t) {
        scale /= 3;
        num += (BigInt(1) << unsigned(u.size() + per_ones[t])) * scale;
    }
    return from_rational(-num, three_r * tail_den);
}

/// T_{m,n}: the weave of the m-fold and n-fold iterates of Q as a self-map of
/// binary streams. Iterates of a bicausal map stay bicausal, so the coinduced
/// morphism of ⟨head, T_{m,n}⟩ is again bicausal.
inline CausalFn variant_tmn(std::size_t m, std::size_t n) {
    CausalFn q = q_fn();
    return weave(FunctionFamily(q.domain(), {compose_iterate(q, m), compose_iterate(q, n)}));
}

} // namespace weft
