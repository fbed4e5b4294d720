#pragma once

#include <cstdint>
#include <numeric>
#include <string>
#include <vector>

#include "weft/alphabet.hpp"
#include "weft/causal.hpp"
#include "weft/level_map.hpp"
#include "weft/mealy.hpp"
#include "weft/random.hpp"
#include "weft/woven.hpp"

namespace weft {

/// Random coherent chain for index k: the level-0 map is arbitrary and each
/// deeper level extends every image by one fresh symbol per appended input
/// symbol — coherence holds by construction.
inline LevelMapChain random_coherent_chain(Rng& rng, Alphabet dom, Alphabet cod, int k,
                                           std::size_t depth) {
    auto [m, n] = LevelMapChain::offsets_for(k);
    std::uint64_t bsize = std::uint64_t(cod.size());
    std::vector<LevelMap> maps;
    {
        LevelMap base{dom, cod, n, m, {}};
        std::uint64_t count = word_count(dom, n);
        for (std::uint64_t r = 0; r < count; ++r)
            base.table.push_back(rng.below(word_count(cod, m)));
        maps.push_back(std::move(base));
    }
    for (std::size_t ell = 1; ell <= depth; ++ell) {
        const LevelMap& prev = maps.back();
        LevelMap next{dom, cod, n + ell, m + ell, {}};
        std::uint64_t count = word_count(dom, n + ell);
        std::uint64_t prev_count = prev.table.size();
        std::uint64_t out_weight = 1;
        for (std::size_t i = 0; i < prev.out_len; ++i)
            out_weight *= bsize;
        next.table.reserve(count);
        // rank of w·a is rank(w) + |A|^(n+ℓ−1)·a; the appended output symbol
        // carries weight |B|^(m+ℓ−1)
        for (std::uint64_t r = 0; r < count; ++r)
            next.table.push_back(prev.table[r % prev_count] + out_weight * rng.below(bsize));
        maps.push_back(std::move(next));
    }
    return LevelMapChain(m, n, std::move(maps));
}

/// Random chain of level bijections (m = n = 0): extend each f_j to f_(j+1)
/// by drawing, for every input word, a fresh permutation of the appended
/// symbol. This is exactly the inverse-limit shape of a bicausal function.
inline LevelMapChain random_bijection_chain(Rng& rng, Alphabet a, std::size_t depth) {
    std::uint64_t size = std::uint64_t(a.size());
    std::vector<LevelMap> maps;
    maps.push_back(LevelMap{a, a, 0, 0, {0}});
    for (std::size_t j = 1; j <= depth; ++j) {
        const LevelMap& prev = maps.back();
        LevelMap next{a, a, j, j, {}};
        std::uint64_t prev_count = prev.table.size();
        next.table.assign(prev_count * size, 0);
        std::uint64_t out_weight = prev_count; // |A|^(j−1)
        std::vector<Symbol> perm(std::size_t(size), 0);
        for (std::uint64_t w = 0; w < prev_count; ++w) {
            std::iota(perm.begin(), perm.end(), 0);
            for (std::size_t i = perm.size(); i > 1; --i)
                std::swap(perm[i - 1], perm[std::size_t(rng.below(i))]);
            for (std::uint64_t sym = 0; sym < size; ++sym)
                next.table[w + prev_count * sym] =
                    prev.table[w] + out_weight * std::uint64_t(perm[std::size_t(sym)]);
        }
        maps.push_back(std::move(next));
    }
    return LevelMapChain(0, 0, std::move(maps));
}

inline CausalFn random_causal_fn(Rng& rng, Alphabet a, int k, std::size_t depth) {
    return from_level_chain(random_coherent_chain(rng, a, a, k, depth));
}

inline CausalFn random_bicausal_fn(Rng& rng, Alphabet a, std::size_t depth) {
    return from_level_chain(random_bijection_chain(rng, a, depth))
        .with_bicausal(Certificate::by_construction(
            "random inverse limit of level bijections, depth " + std::to_string(depth)));
}

inline FunctionFamily random_family(Rng& rng, Alphabet a, int member_k, std::size_t depth) {
    std::vector<CausalFn> members;
    for (int i = 0; i < a.size(); ++i)
        members.push_back(random_causal_fn(rng, a, member_k, depth));
    return FunctionFamily(a, std::move(members));
}

inline FunctionFamily random_bicausal_family(Rng& rng, Alphabet a, std::size_t depth) {
    std::vector<CausalFn> members;
    for (int i = 0; i < a.size(); ++i)
        members.push_back(random_bicausal_fn(rng, a, depth));
    return FunctionFamily(a, std::move(members));
}

inline MealyMachine random_mealy(Rng& rng, std::size_t max_states, Alphabet in, Alphabet out) {
    std::size_t count = 1 + std::size_t(rng.below(max_states));
    std::vector<std::string> names;
    for (std::size_t i = 0; i < count; ++i)
        names.push_back("s" + std::to_string(i));
    std::vector<MealyMachine::Arrow> arrows;
    for (std::size_t st = 0; st < count; ++st)
        for (int a = 0; a < in.size(); ++a)
            arrows.push_back({rng.symbol(out), std::size_t(rng.below(count))});
    return MealyMachine(std::move(names), in, out, std::move(arrows),
                        std::size_t(rng.below(count)));
}

} // namespace weft
