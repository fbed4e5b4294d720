#pragma once

#include <string>
#include <vector>

#include "weft/alphabet.hpp"
#include "weft/causal.hpp"
#include "weft/errors.hpp"
#include "weft/stream.hpp"

namespace weft {

/// An A-indexed family {f_a} of functions A^ω → B^ω, stored densely: member a
/// handles streams whose head is a.
struct FunctionFamily {
    Alphabet index;
    std::vector<CausalFn> members;

    FunctionFamily(Alphabet index_alphabet, std::vector<CausalFn> fns)
        : index(index_alphabet), members(std::move(fns)) {
        if (members.size() != std::size_t(index.size()))
            throw error("family needs one member per symbol (" + std::to_string(index.size()) +
                        "), got " + std::to_string(members.size()));
        for (const CausalFn& f : members) {
            require_same(f.domain(), index);
            require_same(f.codomain(), members[0].codomain());
        }
    }

    const Alphabet& codomain() const { return members[0].codomain(); }

    // strongest index every member certifies, if all carry claims
    std::optional<int> uniform_index() const {
        std::optional<int> k;
        for (const CausalFn& f : members) {
            if (!f.claim())
                return std::nullopt;
            k = k ? std::min(*k, f.claim()->k) : f.claim()->k;
        }
        return k;
    }

    bool all_bicausal() const {
        for (const CausalFn& f : members)
            if (!f.bicausal_certificate())
                return false;
        return true;
    }
};

/// T_F(σ) = f_{h(σ)}(t(σ)): the head picks the member, which runs on the tail.
/// Members certified (k+1)-causal with k ≤ 0 make the weave k-causal; the
/// certificate records what the members supported, and coinduce_stream_fn
/// consumes that record.
inline CausalFn weave(const FunctionFamily& family) {
    CausalFn t(family.index, family.codomain(), [family](const Stream& in) {
        Stream out = family.members[std::size_t(head(in))](tail(in));
        return [out](std::size_t n) { return out.at(n); };
    });
    WovenInfo info{false, family.all_bicausal()};
    std::optional<int> uniform = family.uniform_index();
    if (uniform) {
        info.members_causal = *uniform >= 0;
        int k = std::min(*uniform - 1, 0);
        t = t.with_claim(k, Certificate::by_construction(
                                "weave of members certified at index >= " +
                                std::to_string(*uniform)));
    }
    return t.with_woven_info(info);
}

/// f_a = T∘c_a: each member first prepends its symbol, then runs T, gaining
/// one causality index over T.
inline FunctionFamily unweave(const CausalFn& t) {
    std::vector<CausalFn> members;
    for (Symbol a = 0; a < t.domain().size(); ++a)
        members.push_back(compose(prepend_fn(Word(t.domain(), {a})), t));
    return FunctionFamily(t.domain(), std::move(members));
}

} // namespace weft
