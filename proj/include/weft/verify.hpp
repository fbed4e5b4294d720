#pragma once

#include <atomic>
#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "weft/alphabet.hpp"
#include "weft/causal.hpp"
#include "weft/errors.hpp"
#include "weft/level_map.hpp"
#include "weft/random.hpp"
#include "weft/stream.hpp"

namespace weft {

struct CheckOptions {
    std::uint64_t budget = kDefaultBudget; // max enumerated words per exhaustive pass
    std::uint64_t seed = 0;
    std::size_t samples = 512; // pairs to sample when enumeration is out of budget
};

struct CausalityReport {
    enum class Verdict { verified, falsified, inconclusive };
    Verdict verdict = Verdict::inconclusive;
    int claimed_k = 0;
    int depth = 0;
    bool exhaustive = false;
    std::uint64_t cases = 0;
    // falsification witness: inputs agree to agree_len, the claim breaks at
    // output index disagree_at (see note for the bicausal reading)
    std::string witness_sigma;
    std::string witness_tau;
    int agree_len = -1;
    int disagree_at = -1;
    std::string note;

    bool verified() const { return verdict == Verdict::verified; }
    bool falsified() const { return verdict == Verdict::falsified; }

    std::string verdict_str() const {
        switch (verdict) {
        case Verdict::verified: return "verified";
        case Verdict::falsified: return "falsified";
        default: return "inconclusive";
        }
    }

    std::string record() const {
        std::string r = "verdict=" + verdict_str() + " k=" + std::to_string(claimed_k) +
                        " depth=" + std::to_string(depth) +
                        " exhaustive=" + (exhaustive ? "yes" : "no") +
                        " cases=" + std::to_string(cases);
        if (falsified())
            r += " sigma=" + witness_sigma + " tau=" + witness_tau +
                 " agree=" + std::to_string(agree_len) +
                 " disagree_at=" + std::to_string(disagree_at);
        if (!note.empty())
            r += " note=\"" + note + "\"";
        return r;
    }
};

namespace detail {

inline std::uint64_t checked_pow(std::uint64_t base, std::size_t exp, std::uint64_t cap) {
    std::uint64_t v = 1;
    for (std::size_t i = 0; i < exp; ++i) {
        if (v > cap)
            return cap + 1;
        v *= base;
    }
    return v;
}

} // namespace detail

/// Depth-bounded k-causality check: inputs agreeing on j symbols must map to
/// outputs agreeing on j+k. Exhaustive when |A|^depth fits the budget —
/// zero-padded words are enumerated in lexicographic order, and it suffices to
/// compare adjacent words: any two words sharing a j-prefix are linked by a
/// chain of adjacent pairs sharing at least that prefix, and prefix agreement
/// is transitive. Otherwise falls back to seeded sampling.
inline CausalityReport check_k_causal(const CausalFn& f, int k, int depth,
                                      const CheckOptions& opts = {}) {
    if (depth < 1)
        throw error("check depth must be >= 1");
    CausalityReport rep;
    rep.claimed_k = k;
    rep.depth = depth;
    const Alphabet a = f.domain();
    const std::size_t out_len = std::size_t(std::max(0, depth + k));
    std::uint64_t count = detail::checked_pow(std::uint64_t(a.size()), std::size_t(depth),
                                              opts.budget);

    auto out_of = [&](const Word& w) { return f.out_prefix(EpStream::padded(w), out_len); };
    auto report_violation = [&](const Word& u, const Word& v, int agree, int bad_index) {
        if (rep.falsified() && bad_index >= rep.disagree_at)
            return; // keep the minimal disagreement depth found
        rep.verdict = CausalityReport::Verdict::falsified;
        rep.witness_sigma = format_stream(EpStream::padded(u));
        rep.witness_tau = format_stream(EpStream::padded(v));
        rep.agree_len = agree;
        rep.disagree_at = bad_index;
    };

    if (count <= opts.budget) {
        rep.exhaustive = true;
        std::vector<Symbol> w(std::size_t(depth), 0);
        Word prev_word(a, w);
        Word prev_out = out_of(prev_word);
        rep.cases = 1;
        while (true) {
            // lexicographic odometer: bump the last non-maximal position
            std::size_t p = w.size();
            while (p > 0 && w[p - 1] == a.size() - 1)
                --p;
            if (p == 0)
                break;
            w[p - 1] += 1;
            for (std::size_t i = p; i < w.size(); ++i)
                w[i] = 0;
            Word cur_word(a, w);
            Word cur_out = out_of(cur_word);
            ++rep.cases;
            // the two words first differ exactly at position p-1
            std::size_t agree = p - 1;
            std::size_t need = std::size_t(std::max(0, int(agree) + k));
            for (std::size_t i = 0; i < need; ++i)
                if (prev_out[i] != cur_out[i]) {
                    report_violation(prev_word, cur_word, int(agree), int(i));
                    break;
                }
            prev_word = cur_word;
            prev_out = cur_out;
        }
        if (!rep.falsified())
            rep.verdict = CausalityReport::Verdict::verified;
        return rep;
    }

    // sampled: random pairs sharing a random-length prefix
    Rng rng(opts.seed);
    for (std::size_t s = 0; s < opts.samples; ++s) {
        std::size_t j = std::size_t(rng.below(std::uint64_t(depth)));
        Word shared = rng.word(a, j);
        Word u = shared, v = shared;
        for (std::size_t i = j; i < std::size_t(depth); ++i) {
            u.push_back(rng.symbol(a));
            v.push_back(rng.symbol(a));
        }
        std::size_t agree = common_prefix_length(u, v);
        std::size_t need = std::min(out_len, std::size_t(std::max(0, int(agree) + k)));
        Word uo = out_of(u), vo = out_of(v);
        ++rep.cases;
        for (std::size_t i = 0; i < need; ++i)
            if (uo[i] != vo[i]) {
                report_violation(u, v, int(agree), int(i));
                break;
            }
    }
    if (!rep.falsified() && rep.cases > 0)
        rep.verdict = CausalityReport::Verdict::verified;
    rep.note = rep.note.empty() ? "sampled beyond budget" : rep.note;
    return rep;
}

namespace detail {

/// The square tables f_j: A^j → A^j used by bijection checking and inversion;
/// computed with zero padding, independent of any claim the function carries.
inline std::vector<std::uint64_t> square_level_table(const CausalFn& f, std::size_t j) {
    std::uint64_t count = word_count(f.domain(), j);
    std::vector<std::uint64_t> table(count);
    for (std::uint64_t r = 0; r < count; ++r) {
        Word w = Word::from_rank(f.domain(), j, r);
        table[r] = f.out_prefix(EpStream::padded(w), j).rank();
    }
    return table;
}

} // namespace detail

/// On a finite alphabet a 0-causal self-map is bicausal iff every level map
/// is a bijection of A^j. Injectivity suffices on a finite set.
inline CausalityReport check_bijection_levels(const CausalFn& f, int j_max,
                                              const CheckOptions& opts = {}) {
    require_same(f.domain(), f.codomain());
    CausalityReport rep;
    rep.claimed_k = 0;
    rep.depth = j_max;
    rep.exhaustive = true;
    rep.note = "bijection levels";
    for (std::size_t j = 1; j <= std::size_t(j_max); ++j) {
        std::uint64_t count = detail::checked_pow(std::uint64_t(f.domain().size()), j,
                                                  opts.budget);
        if (count > opts.budget)
            throw budget_error("level " + std::to_string(j) + " needs " + std::to_string(count) +
                               " entries (budget " + std::to_string(opts.budget) + ")");
        constexpr std::uint64_t none = ~std::uint64_t(0);
        std::vector<std::uint64_t> first_preimage(count, none);
        for (std::uint64_t r = 0; r < count; ++r) {
            Word w = Word::from_rank(f.domain(), j, r);
            std::uint64_t out = f.out_prefix(EpStream::padded(w), j).rank();
            ++rep.cases;
            if (first_preimage[out] != none) {
                Word other = Word::from_rank(f.domain(), j, first_preimage[out]);
                rep.verdict = CausalityReport::Verdict::falsified;
                rep.witness_sigma = format_stream(EpStream::padded(other));
                rep.witness_tau = format_stream(EpStream::padded(w));
                rep.agree_len = int(common_prefix_length(other, w));
                rep.disagree_at = int(j);
                rep.note = "level " + std::to_string(j) + " not injective";
                rep.depth = int(j);
                return rep;
            }
            first_preimage[out] = r;
        }
    }
    rep.verdict = CausalityReport::Verdict::verified;
    return rep;
}

/// Both directions of σ≡_jτ ⟺ f(σ)≡_jf(τ): the forward direction is the
/// 0-causal check, the converse is injectivity of each level map. Beyond the
/// enumeration budget only sampled pairs run and the verdict is capped at
/// inconclusive.
inline CausalityReport check_bicausal(const CausalFn& f, int depth,
                                      const CheckOptions& opts = {}) {
    CausalityReport forward = check_k_causal(f, 0, depth, opts);
    if (forward.falsified()) {
        forward.note = "0-causal direction failed";
        return forward;
    }
    CausalityReport rep;
    rep.claimed_k = 0;
    rep.depth = depth;
    rep.exhaustive = forward.exhaustive;
    rep.cases = forward.cases;
    for (std::size_t j = 1; j <= std::size_t(depth); ++j) {
        std::uint64_t in_count = detail::checked_pow(std::uint64_t(f.domain().size()), j,
                                                     opts.budget);
        std::uint64_t out_count = detail::checked_pow(std::uint64_t(f.codomain().size()), j,
                                                      opts.budget);
        if (in_count > opts.budget || out_count > opts.budget) {
            // sampled fallback: inputs first differing at c must map to
            // outputs first differing at c; scanning c+1 output symbols decides
            Rng rng(opts.seed);
            for (std::size_t s = 0; s < opts.samples; ++s) {
                Word u = rng.word(f.domain(), std::size_t(depth));
                Word v = rng.word(f.domain(), std::size_t(depth));
                std::size_t c = common_prefix_length(u, v);
                if (c == std::size_t(depth))
                    continue;
                Stream fu = f(EpStream::padded(u));
                Stream fv = f(EpStream::padded(v));
                ++rep.cases;
                if (!prefix_equiv(fu, fv, c) || fu.at(c) == fv.at(c)) {
                    rep.verdict = CausalityReport::Verdict::falsified;
                    rep.witness_sigma = format_stream(EpStream::padded(u));
                    rep.witness_tau = format_stream(EpStream::padded(v));
                    rep.agree_len = int(c);
                    rep.disagree_at = int(c);
                    rep.note = "distance not preserved (sampled)";
                    return rep;
                }
            }
            rep.verdict = CausalityReport::Verdict::inconclusive;
            rep.depth = int(j) - 1;
            rep.note = "levels beyond " + std::to_string(j - 1) +
                       " exceed the enumeration budget; sampled pairs only";
            return rep;
        }
        constexpr std::uint64_t none = ~std::uint64_t(0);
        std::vector<std::uint64_t> first_preimage(out_count, none);
        for (std::uint64_t r = 0; r < in_count; ++r) {
            Word w = Word::from_rank(f.domain(), j, r);
            std::uint64_t out = f.out_prefix(EpStream::padded(w), j).rank();
            ++rep.cases;
            if (first_preimage[out] != none) {
                Word other = Word::from_rank(f.domain(), j, first_preimage[out]);
                rep.verdict = CausalityReport::Verdict::falsified;
                rep.witness_sigma = format_stream(EpStream::padded(other));
                rep.witness_tau = format_stream(EpStream::padded(w));
                rep.agree_len = int(common_prefix_length(other, w));
                rep.disagree_at = int(j);
                rep.note = "inputs differing at index " + std::to_string(rep.agree_len) +
                           " map to outputs agreeing through index " + std::to_string(j - 1) +
                           "; distance shrank";
                return rep;
            }
            first_preimage[out] = r;
        }
    }
    rep.verdict = CausalityReport::Verdict::verified;
    return rep;
}

/// Invert through the level tables: each f_j is checked to be a bijection and
/// the inverted chain is assembled into a CausalFn. The result is a two-sided
/// inverse of f up to the stored depth.
inline CausalFn invert_bicausal(const CausalFn& f, int depth, const CheckOptions& opts = {}) {
    require_same(f.domain(), f.codomain());
    std::vector<LevelMap> inverted;
    for (std::size_t j = 0; j <= std::size_t(depth); ++j) {
        std::uint64_t count = detail::checked_pow(std::uint64_t(f.domain().size()), j,
                                                  opts.budget);
        if (count > opts.budget)
            throw budget_error("inverting level " + std::to_string(j) + " needs " +
                               std::to_string(count) + " entries (budget " +
                               std::to_string(opts.budget) + ")");
        std::vector<std::uint64_t> table = detail::square_level_table(f, j);
        constexpr std::uint64_t none = ~std::uint64_t(0);
        std::vector<std::uint64_t> inverse(table.size(), none);
        for (std::uint64_t r = 0; r < table.size(); ++r) {
            if (inverse[table[r]] != none)
                throw certificate_error(
                    "level " + std::to_string(j) + " map is not a bijection: words " +
                    Word::from_rank(f.domain(), j, inverse[table[r]]).str() + " and " +
                    Word::from_rank(f.domain(), j, r).str() + " share an image");
            inverse[table[r]] = r;
        }
        inverted.push_back(LevelMap{f.domain(), f.domain(), j, j, std::move(inverse)});
    }
    return from_level_chain(LevelMapChain(0, 0, std::move(inverted)))
        .with_bicausal(Certificate::by_construction(
            "inverse limit of inverted level bijections, depth " + std::to_string(depth)));
}

/// Counts how deep a consumer read into a stream; the operational shadow of
/// the causality index (n output symbols of an index-k function may consume at
/// most max(0, n−k) input symbols).
class ReadCounter {
public:
    ReadCounter() : cell_(std::make_shared<std::atomic<std::size_t>>(0)) {}

    std::size_t consumed() const { return cell_->load(); }

    void saw_index(std::size_t n) const {
        std::size_t want = n + 1;
        std::size_t cur = cell_->load();
        while (cur < want && !cell_->compare_exchange_weak(cur, want)) {
        }
    }

private:
    std::shared_ptr<std::atomic<std::size_t>> cell_;
};

inline Stream counting_tap(const Stream& s, const ReadCounter& counter) {
    return OpaqueStream(s.alphabet(), [s, counter](std::size_t n) {
        counter.saw_index(n);
        return s.at(n);
    });
}

/// Forces n output symbols of f over `base` through a tap and reports how many
/// input symbols were consumed.
inline std::size_t consumed_for_prefix(const CausalFn& f, const Stream& base, std::size_t n) {
    ReadCounter counter;
    Stream tapped = counting_tap(base, counter);
    Stream out = f(tapped);
    for (std::size_t i = 0; i < n; ++i)
        out.at(i);
    return counter.consumed();
}

inline bool read_bound_holds(const CausalFn& f, int k, const Stream& base, std::size_t max_n) {
    for (std::size_t n = 0; n <= max_n; ++n) {
        std::size_t bound = std::size_t(std::max(0, int(n) - k));
        if (consumed_for_prefix(f, base, n) > bound)
            return false;
    }
    return true;
}

} // namespace weft
