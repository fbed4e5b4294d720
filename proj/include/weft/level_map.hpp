#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "weft/alphabet.hpp"
#include "weft/causal.hpp"
#include "weft/errors.hpp"
#include "weft/stream.hpp"

namespace weft {

inline constexpr std::uint64_t kDefaultBudget = std::uint64_t(1) << 16;

/// One finite approximation f_ℓ: A^in_len → B^out_len, tabulated by word rank.
/// Ranks are little-endian (letter i carries weight |A|^i), so the rank of a
/// prefix is the rank modulo |A|^prefix_len.
struct LevelMap {
    Alphabet dom;
    Alphabet cod;
    std::size_t in_len;
    std::size_t out_len;
    std::vector<std::uint64_t> table; // table[rank(w)] = rank(f(w))

    std::uint64_t apply_rank(std::uint64_t in_rank) const { return table[in_rank]; }

    Symbol out_symbol(std::uint64_t in_rank, std::size_t i) const {
        std::uint64_t r = table[in_rank];
        for (std::size_t j = 0; j < i; ++j)
            r /= std::uint64_t(cod.size());
        return Symbol(r % std::uint64_t(cod.size()));
    }
};

/// The chain {f_ℓ} for 0 ≤ ℓ ≤ depth with offsets min(m,n) = 0 and k = m−n:
/// f_ℓ maps A^(n+ℓ) to B^(m+ℓ). Coherence (the commuting ladder) is what makes
/// the chain determine a k-causal function as an inverse limit.
class LevelMapChain {
public:
    LevelMapChain(std::size_t m, std::size_t n, std::vector<LevelMap> maps)
        : m_(m), n_(n), maps_(std::move(maps)) {
        if (m_ != 0 && n_ != 0)
            throw error("level chain offsets need min(m,n) = 0");
        if (maps_.empty())
            throw error("level chain needs at least the level-0 map");
        for (std::size_t ell = 0; ell < maps_.size(); ++ell) {
            const LevelMap& f = maps_[ell];
            if (f.in_len != n_ + ell || f.out_len != m_ + ell)
                throw error("level " + std::to_string(ell) + " map has wrong word lengths");
            if (f.table.size() != word_count(f.dom, f.in_len))
                throw error("level " + std::to_string(ell) + " table has wrong size");
            require_same(f.dom, maps_[0].dom);
            require_same(f.cod, maps_[0].cod);
        }
    }

    std::size_t m() const { return m_; }
    std::size_t n() const { return n_; }
    int k() const { return int(m_) - int(n_); }
    std::size_t depth() const { return maps_.size() - 1; }
    const LevelMap& at_level(std::size_t ell) const { return maps_.at(ell); }
    const Alphabet& dom() const { return maps_[0].dom; }
    const Alphabet& cod() const { return maps_[0].cod; }

    static std::pair<std::size_t, std::size_t> offsets_for(int k) {
        return k >= 0 ? std::pair<std::size_t, std::size_t>{std::size_t(k), 0}
                      : std::pair<std::size_t, std::size_t>{0, std::size_t(-k)};
    }

private:
    std::size_t m_, n_;
    std::vector<LevelMap> maps_;
};

struct CoherenceReport {
    bool coherent = true;
    std::size_t level = 0;       // violating ℓ: π∘f_(ℓ+1) ≠ f_ℓ∘π there
    std::uint64_t word_rank = 0; // rank of the violating word in A^(n+ℓ+1)
    std::string str() const {
        if (coherent)
            return "coherent";
        return "incoherent at level " + std::to_string(level) + ", word rank " +
               std::to_string(word_rank);
    }
};

/// π_(m+ℓ) ∘ f_(ℓ+1) = f_ℓ ∘ π_(n+ℓ): with little-endian ranks both
/// projections are plain modular reductions.
inline CoherenceReport check_coherence(const LevelMapChain& chain) {
    std::uint64_t asize = std::uint64_t(chain.dom().size());
    std::uint64_t bsize = std::uint64_t(chain.cod().size());
    for (std::size_t ell = 0; ell + 1 <= chain.depth(); ++ell) {
        const LevelMap& lo = chain.at_level(ell);
        const LevelMap& hi = chain.at_level(ell + 1);
        std::uint64_t in_mod = 1;
        for (std::size_t i = 0; i < lo.in_len; ++i)
            in_mod *= asize;
        std::uint64_t out_mod = 1;
        for (std::size_t i = 0; i < lo.out_len; ++i)
            out_mod *= bsize;
        for (std::uint64_t r = 0; r < hi.table.size(); ++r)
            if (hi.table[r] % out_mod != lo.table[r % in_mod])
                return {false, ell, r};
    }
    return {true, 0, 0};
}

/// Tabulate f_ℓ by evaluating f on zero-padded words. For a valid certificate
/// the table is independent of the padding; the first and last entries are
/// recomputed under all-(max symbol) padding to expose invalid certificates.
inline LevelMap level_map(const CausalFn& f, std::size_t ell,
                          std::uint64_t budget = kDefaultBudget, bool spot_check = true) {
    auto [m, n] = LevelMapChain::offsets_for(f.claimed_k());
    std::size_t in_len = n + ell;
    std::size_t out_len = m + ell;
    std::uint64_t count = word_count(f.domain(), in_len);
    if (count > budget)
        throw budget_error("level " + std::to_string(ell) + " table needs " +
                           std::to_string(count) + " entries (budget " + std::to_string(budget) +
                           ")");
    LevelMap map{f.domain(), f.codomain(), in_len, out_len, {}};
    map.table.reserve(count);
    for (std::uint64_t r = 0; r < count; ++r) {
        Word w = Word::from_rank(f.domain(), in_len, r);
        map.table.push_back(f.out_prefix(EpStream::padded(w), out_len).rank());
    }
    if (spot_check && count > 0) {
        Symbol pad = f.domain().size() - 1;
        for (std::uint64_t r : {std::uint64_t(0), count - 1}) {
            Word w = Word::from_rank(f.domain(), in_len, r);
            EpStream padded(f.domain(), w, Word(f.domain(), {pad}));
            if (f.out_prefix(padded, out_len).rank() != map.table[r])
                throw certificate_error(
                    "level table depends on the padding stream at level " + std::to_string(ell) +
                    ", word \"" + w.str() + "\"; claimed index " +
                    std::to_string(f.claimed_k()) + " is not supported by the evaluator");
        }
    }
    return map;
}

inline LevelMapChain extract_chain(const CausalFn& f, std::size_t depth,
                                   std::uint64_t budget = kDefaultBudget) {
    auto [m, n] = LevelMapChain::offsets_for(f.claimed_k());
    std::vector<LevelMap> maps;
    maps.reserve(depth + 1);
    for (std::size_t ell = 0; ell <= depth; ++ell)
        maps.push_back(level_map(f, ell, budget));
    return LevelMapChain(m, n, std::move(maps));
}

/// Rebuild the function from its chain: output symbol i comes from the first
/// stored level whose output words are long enough (ℓ with m+ℓ > i). Queries
/// beyond the stored depth are refused, never fabricated.
///
/// Precondition: the chain passes check_coherence; the issued certificate is
/// conditional on that.
inline CausalFn from_level_chain(LevelMapChain chain) {
    auto shared = std::make_shared<const LevelMapChain>(std::move(chain));
    std::size_t m = shared->m(), n = shared->n();
    int k = shared->k();
    CausalFn f(shared->dom(), shared->cod(), [shared, m, n](const Stream& in) {
        std::uint64_t asize = std::uint64_t(shared->dom().size());
        // the needed input length only grows, so the rank accumulates
        // incrementally across the in-order symbol queries
        auto rank = std::make_shared<std::uint64_t>(0);
        auto weight = std::make_shared<std::uint64_t>(1);
        auto filled = std::make_shared<std::size_t>(0);
        return [shared, m, n, asize, in, rank, weight, filled](std::size_t i) {
            std::size_t ell = i < m ? 0 : i + 1 - m;
            if (ell > shared->depth())
                throw chain_depth_error("output index " + std::to_string(i) +
                                        " needs level " + std::to_string(ell) +
                                        " but the chain stores depth " +
                                        std::to_string(shared->depth()));
            while (*filled < n + ell) {
                *rank += *weight * std::uint64_t(in.at(*filled));
                *weight *= asize;
                ++*filled;
            }
            const LevelMap& lm = shared->at_level(ell);
            // little-endian ranks: a longer word's rank reduces mod the
            // level's table size to the rank of its prefix
            std::uint64_t r = *rank;
            if (*filled > n + ell)
                r %= std::uint64_t(lm.table.size());
            return lm.out_symbol(r, i);
        };
    });
    return f.with_claim(k, Certificate::by_construction(
                               "inverse limit of a coherent level chain, depth " +
                               std::to_string(shared->depth())));
}

} // namespace weft
