#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "weft/alphabet.hpp"
#include "weft/causal.hpp"
#include "weft/errors.hpp"
#include "weft/stream.hpp"

namespace weft {

/// A coalgebra ⟨observe, step⟩: X → B × X for the stream functor.
template <class X>
struct StreamCoalgebra {
    Alphabet output;
    std::function<Symbol(const X&)> observe;
    std::function<X(const X&)> step;
};

/// The coinduced morphism into the final coalgebra of streams:
/// Φ(x)(n) = observe(stepⁿ(x)). The opaque stream's in-order, once-per-index
/// generator contract lets the orbit advance one step per emitted symbol.
template <class X>
Stream coinduce(const StreamCoalgebra<X>& c, X x) {
    auto state = std::make_shared<X>(std::move(x));
    return OpaqueStream(c.output, [c, state](std::size_t) {
        Symbol s = c.observe(*state);
        *state = c.step(*state);
        return s;
    });
}

/// ⟨H, T⟩ on the carrier A^ω. The head-factoring premise H = b∘head is
/// supplied as an explicit witness table; without it the coinduced function
/// still evaluates but carries no certificate.
struct StreamFnCoalgebra {
    Alphabet domain; // A, the carrier's alphabet
    Alphabet output; // B
    std::function<Symbol(const Stream&)> observe; // H
    CausalFn step;                                // T
    std::optional<std::vector<Symbol>> witness;   // b: A → B with H = b∘head

    static StreamFnCoalgebra with_witness(Alphabet domain, Alphabet output,
                                          std::vector<Symbol> table, CausalFn step) {
        if (table.size() != std::size_t(domain.size()))
            throw error("witness table needs one entry per domain symbol");
        for (Symbol s : table)
            output.require(s);
        StreamFnCoalgebra c{domain, output,
                            [table, output](const Stream& s) { return table[head(s)]; },
                            std::move(step), std::move(table)};
        return c;
    }

    bool witness_injective() const {
        if (!witness)
            return false;
        std::vector<bool> seen(std::size_t(output.size()), false);
        for (Symbol s : *witness) {
            if (seen[std::size_t(s)])
                return false;
            seen[std::size_t(s)] = true;
        }
        return true;
    }
};

/// φ(σ)(n) = H(Tⁿ(σ)), with the T-orbit kept per application. Coinduction
/// closes over causality: a woven-from-0-causal step plus the head witness
/// certify φ 0-causal; a woven-from-bicausal step plus an injective witness
/// certify φ bicausal.
inline CausalFn coinduce_stream_fn(const StreamFnCoalgebra& c) {
    require_same(c.domain, c.step.domain());
    require_same(c.domain, c.step.codomain());
    CausalFn step = c.step;
    auto observe = c.observe;
    CausalFn phi(c.domain, c.output, [step, observe](const Stream& in) {
        auto orbit = std::make_shared<std::vector<Stream>>();
        orbit->push_back(in);
        return [step, observe, orbit](std::size_t n) {
            while (orbit->size() <= n)
                orbit->push_back(step(orbit->back()));
            return observe((*orbit)[n]);
        };
    });
    const std::optional<WovenInfo>& woven = c.step.woven_info();
    if (c.witness && woven && woven->members_causal) {
        phi = phi.with_claim(0, Certificate::by_construction(
                                    "coinduced from a head witness and a step woven from "
                                    "0-causal members"));
        if (woven->members_bicausal && c.witness_injective())
            phi = phi.with_bicausal(Certificate::by_construction(
                "coinduced from an injective head witness and a step woven from bicausal "
                "members"));
    }
    return phi;
}

struct MorphismCheckReport {
    bool commutes = true;
    int depth = 0;
    bool observation_ok = true;
    bool step_ok = true;
    std::string witness;     // which start state
    std::size_t orbit_index = 0; // how many steps in the violation sits

    std::string record() const {
        if (commutes)
            return "verdict=commutes depth=" + std::to_string(depth);
        return std::string("verdict=violation square=") +
               (observation_ok ? "step" : "observation") + " state=" + witness +
               " orbit_index=" + std::to_string(orbit_index);
    }
};

/// Checks the morphism squares g_tgt∘m = g_src and m∘s_src = s_tgt∘m along
/// each supplied state's orbit. Equality on Y is caller-supplied (for stream
/// targets it is prefix agreement at a chosen depth).
template <class X, class Y>
MorphismCheckReport check_morphism(const StreamCoalgebra<X>& source,
                                   const StreamCoalgebra<Y>& target,
                                   const std::function<Y(const X&)>& m,
                                   const std::vector<X>& states, int depth,
                                   const std::function<bool(const Y&, const Y&)>& eq,
                                   const std::function<std::string(const X&)>& describe) {
    MorphismCheckReport rep;
    rep.depth = depth;
    for (const X& start : states) {
        X x = start;
        for (int i = 0; i < depth; ++i) {
            if (target.observe(m(x)) != source.observe(x)) {
                rep.commutes = false;
                rep.observation_ok = false;
                rep.witness = describe(start);
                rep.orbit_index = std::size_t(i);
                return rep;
            }
            if (!eq(m(source.step(x)), target.step(m(x)))) {
                rep.commutes = false;
                rep.step_ok = false;
                rep.witness = describe(start);
                rep.orbit_index = std::size_t(i);
                return rep;
            }
            x = source.step(x);
        }
    }
    return rep;
}

struct UniquenessReport {
    bool agrees = true;
    int depth = 0;
    std::string witness;
    std::size_t deviation_index = 0;

    std::string record() const {
        if (agrees)
            return "verdict=unique depth=" + std::to_string(depth);
        return "verdict=deviation state=" + witness +
               " index=" + std::to_string(deviation_index);
    }
};

/// Finality gives exactly one morphism into streams; any candidate that
/// deviates from Φ at some index is thereby not a coalgebra morphism.
template <class X>
UniquenessReport uniqueness_check(const StreamCoalgebra<X>& c,
                                  const std::function<Stream(const X&)>& candidate,
                                  const std::vector<X>& states, int depth,
                                  const std::function<std::string(const X&)>& describe) {
    UniquenessReport rep;
    rep.depth = depth;
    for (const X& x : states) {
        Stream expect = coinduce(c, x);
        Stream got = candidate(x);
        for (int i = 0; i < depth; ++i)
            if (expect.at(std::size_t(i)) != got.at(std::size_t(i))) {
                rep.agrees = false;
                rep.witness = describe(x);
                rep.deviation_index = std::size_t(i);
                return rep;
            }
    }
    return rep;
}

} // namespace weft
