#pragma once

#include <cstddef>
#include <functional>
#include <memory>
#include <mutex>
#include <numeric>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "weft/alphabet.hpp"
#include "weft/errors.hpp"

namespace weft {

/// Eventually periodic stream: preperiod followed by period repeated forever.
/// Stored as written; `normalize` produces the canonical form (primitive
/// period, minimal preperiod). Library operations return canonical values.
class EpStream {
public:
    EpStream(Alphabet alphabet, Word preperiod, Word period)
        : alphabet_(alphabet), preperiod_(std::move(preperiod)), period_(std::move(period)) {
        require_same(alphabet_, preperiod_.alphabet());
        require_same(alphabet_, period_.alphabet());
        if (period_.empty())
            throw parse_error("period must be nonempty");
    }

    static EpStream constant(Alphabet alphabet, Symbol s) {
        return EpStream(alphabet, Word(alphabet), Word(alphabet, {s}));
    }

    static EpStream zeros(Alphabet alphabet) { return constant(alphabet, 0); }

    // Word followed by the all-zeros tail; the padded streams the checkers use.
    static EpStream padded(Word w, Symbol pad = 0) {
        Alphabet a = w.alphabet();
        return EpStream(a, std::move(w), Word(a, {pad}));
    }

    const Alphabet& alphabet() const { return alphabet_; }
    const Word& preperiod() const { return preperiod_; }
    const Word& period() const { return period_; }

    Symbol at(std::size_t n) const {
        if (n < preperiod_.size())
            return preperiod_[n];
        return period_[(n - preperiod_.size()) % period_.size()];
    }

    friend bool operator==(const EpStream&, const EpStream&) = default;

private:
    Alphabet alphabet_;
    Word preperiod_;
    Word period_;
};

namespace detail {

inline Word primitive_root(const Word& period) {
    std::size_t m = period.size();
    for (std::size_t d = 1; d <= m; ++d) {
        if (m % d != 0)
            continue;
        bool repeats = true;
        for (std::size_t i = d; i < m && repeats; ++i)
            repeats = period[i] == period[i - d];
        if (repeats)
            return period.prefix(d);
    }
    return period; // unreachable: d = m always repeats
}

inline Word rotate_right(const Word& w) {
    std::vector<Symbol> s(w.symbols());
    Symbol last = s.back();
    s.pop_back();
    s.insert(s.begin(), last);
    return Word(w.alphabet(), std::move(s));
}

} // namespace detail

/// Canonical form: primitive period, then absorb the preperiod tail while its
/// last symbol matches the period's last symbol (u·a with a = last(v) denotes
/// the same sequence as u with v rotated right).
inline EpStream normalize(const EpStream& s) {
    Word period = detail::primitive_root(s.period());
    std::vector<Symbol> pre(s.preperiod().symbols());
    while (!pre.empty() && pre.back() == period[period.size() - 1]) {
        pre.pop_back();
        period = detail::rotate_right(period);
    }
    return EpStream(s.alphabet(), Word(s.alphabet(), std::move(pre)), period);
}

/// Lazy stream backed by a symbol generator, memoizing a contiguous prefix.
/// The generator is invoked under a lock, exactly once per index and in
/// increasing index order, so generators may keep internal sequential state;
/// observable behavior must be that of a pure index function.
class OpaqueStream {
public:
    using Generator = std::function<Symbol(std::size_t)>;

    OpaqueStream(Alphabet alphabet, Generator gen)
        : node_(std::make_shared<Node>(alphabet, std::move(gen))) {}

    const Alphabet& alphabet() const { return node_->alphabet; }

    Symbol at(std::size_t n) const {
        std::size_t i = n + offset_;
        std::lock_guard<std::mutex> lock(node_->mu);
        while (node_->cache.size() <= i) {
            Symbol s = node_->gen(node_->cache.size());
            node_->alphabet.require(s);
            node_->cache.push_back(s);
        }
        return node_->cache[i];
    }

    // Number of symbols forced so far (= the consumed prefix length).
    std::size_t forced() const {
        std::lock_guard<std::mutex> lock(node_->mu);
        return node_->cache.size();
    }

    OpaqueStream suffix(std::size_t n) const {
        OpaqueStream s = *this;
        s.offset_ += n;
        return s;
    }

private:
    struct Node {
        Node(Alphabet a, Generator g) : alphabet(a), gen(std::move(g)) {}
        Alphabet alphabet;
        Generator gen;
        std::mutex mu;
        std::vector<Symbol> cache;
    };
    std::shared_ptr<Node> node_;
    std::size_t offset_ = 0;
};

/// A stream handle: eventually periodic (exact) or opaque (depth-bounded).
class Stream {
public:
    Stream(EpStream ep) : rep_(std::move(ep)) {}
    Stream(OpaqueStream op) : rep_(std::move(op)) {}

    bool is_ep() const { return std::holds_alternative<EpStream>(rep_); }

    const EpStream& ep() const {
        if (!is_ep())
            throw error("stream is not eventually periodic");
        return std::get<EpStream>(rep_);
    }

    const OpaqueStream& opaque() const {
        if (is_ep())
            throw error("stream is not opaque");
        return std::get<OpaqueStream>(rep_);
    }

    const Alphabet& alphabet() const {
        return is_ep() ? std::get<EpStream>(rep_).alphabet()
                       : std::get<OpaqueStream>(rep_).alphabet();
    }

    Symbol at(std::size_t n) const {
        return is_ep() ? std::get<EpStream>(rep_).at(n) : std::get<OpaqueStream>(rep_).at(n);
    }

private:
    std::variant<EpStream, OpaqueStream> rep_;
};

inline Symbol head(const Stream& s) { return s.at(0); }
inline Symbol at(const Stream& s, std::size_t n) { return s.at(n); }

inline EpStream tail(const EpStream& s) {
    if (!s.preperiod().empty())
        return normalize(EpStream(s.alphabet(), s.preperiod().drop_front(1), s.period()));
    // rotate the period left
    std::vector<Symbol> p(s.period().symbols());
    Symbol first = p.front();
    p.erase(p.begin());
    p.push_back(first);
    return normalize(EpStream(s.alphabet(), Word(s.alphabet()), Word(s.alphabet(), std::move(p))));
}

inline Stream tail(const Stream& s) {
    if (s.is_ep())
        return tail(s.ep());
    return s.opaque().suffix(1);
}

inline Stream tail_n(Stream s, std::size_t n) {
    if (!s.is_ep())
        return s.opaque().suffix(n);
    for (std::size_t i = 0; i < n; ++i)
        s = tail(s);
    return s;
}

inline EpStream prepend(const Word& w, const EpStream& s) {
    require_same(w.alphabet(), s.alphabet());
    std::vector<Symbol> pre(w.symbols());
    pre.insert(pre.end(), s.preperiod().symbols().begin(), s.preperiod().symbols().end());
    return normalize(EpStream(s.alphabet(), Word(s.alphabet(), std::move(pre)), s.period()));
}

inline Stream prepend(const Word& w, const Stream& s) {
    if (s.is_ep())
        return prepend(w, s.ep());
    require_same(w.alphabet(), s.alphabet());
    OpaqueStream inner = s.opaque();
    return OpaqueStream(s.alphabet(), [w, inner](std::size_t n) {
        return n < w.size() ? w[n] : inner.at(n - w.size());
    });
}

inline Word prefix(const Stream& s, std::size_t n) {
    Word w(s.alphabet());
    for (std::size_t i = 0; i < n; ++i)
        w.push_back(s.at(i));
    return w;
}

inline bool prefix_equiv(const Stream& s, const Stream& t, std::size_t n) {
    require_same(s.alphabet(), t.alphabet());
    for (std::size_t i = 0; i < n; ++i)
        if (s.at(i) != t.at(i))
            return false;
    return true;
}

/// d(σ,τ) as an exact exponent, never a float: Zero, Exact(i) meaning 2⁻ⁱ, or
/// AtMost(D) meaning the streams agree on their first D symbols.
struct DepthBoundedDistance {
    enum class Kind { zero, exact, at_most };
    Kind kind;
    int exponent; // Exact: value is 2^-exponent; AtMost: bound is 2^-exponent

    static DepthBoundedDistance zero() { return {Kind::zero, 0}; }
    static DepthBoundedDistance exact(int i) { return {Kind::exact, i}; }
    static DepthBoundedDistance at_most(int d) { return {Kind::at_most, d}; }

    bool is_zero() const { return kind == Kind::zero; }
    bool is_exact() const { return kind == Kind::exact; }
    bool is_at_most() const { return kind == Kind::at_most; }

    friend bool operator==(const DepthBoundedDistance&, const DepthBoundedDistance&) = default;

    std::string str() const {
        switch (kind) {
        case Kind::zero: return "0";
        case Kind::exact: return "2^-" + std::to_string(exponent);
        default: return "<=2^-" + std::to_string(exponent);
        }
    }
};

inline DepthBoundedDistance distance(const Stream& s, const Stream& t, std::size_t depth) {
    require_same(s.alphabet(), t.alphabet());
    for (std::size_t i = 0; i < depth; ++i)
        if (s.at(i) != t.at(i))
            return DepthBoundedDistance::exact(int(i));
    return DepthBoundedDistance::at_most(int(depth));
}

/// Exact distance between ep-streams: they are equal iff they agree on
/// max(preperiods) + lcm(periods) symbols.
inline DepthBoundedDistance distance_exact(const EpStream& s, const EpStream& t) {
    require_same(s.alphabet(), t.alphabet());
    std::size_t pre = std::max(s.preperiod().size(), t.preperiod().size());
    std::size_t bound = pre + std::lcm(s.period().size(), t.period().size());
    for (std::size_t i = 0; i < bound; ++i)
        if (s.at(i) != t.at(i))
            return DepthBoundedDistance::exact(int(i));
    return DepthBoundedDistance::zero();
}

inline bool same_stream(const EpStream& s, const EpStream& t) {
    return distance_exact(s, t).is_zero();
}

namespace detail {

inline Word parse_word(const std::string& text, const Alphabet& alphabet,
                       const std::string& literal) {
    Word w(alphabet);
    if (alphabet.size() <= 10) {
        for (char c : text) {
            if (c < '0' || c > '9')
                throw parse_error("bad symbol '" + std::string(1, c) + "' in \"" + literal + "\"");
            int s = c - '0';
            if (!alphabet.contains(s))
                throw parse_error("symbol " + std::to_string(s) + " out of range in \"" +
                                  literal + "\"");
            w.push_back(s);
        }
        return w;
    }
    // multi-digit symbols, comma-separated
    std::size_t pos = 0;
    while (pos < text.size()) {
        std::size_t comma = text.find(',', pos);
        std::string part = text.substr(pos, comma == std::string::npos ? comma : comma - pos);
        if (part.empty())
            throw parse_error("empty symbol in \"" + literal + "\"");
        int s = 0;
        for (char c : part) {
            if (c < '0' || c > '9')
                throw parse_error("bad symbol \"" + part + "\" in \"" + literal + "\"");
            s = s * 10 + (c - '0');
        }
        if (!alphabet.contains(s))
            throw parse_error("symbol " + std::to_string(s) + " out of range in \"" + literal +
                              "\"");
        w.push_back(s);
        pos = comma == std::string::npos ? text.size() : comma + 1;
    }
    return w;
}

} // namespace detail

/// Literal grammar: `preperiod(period)`, e.g. `110(01)`; period nonempty.
inline EpStream parse_stream(const std::string& text, Alphabet alphabet = Alphabet::binary()) {
    std::size_t open = text.find('(');
    if (open == std::string::npos || text.back() != ')' || text.find(')') + 1 != text.size())
        throw parse_error("stream literal must look like preperiod(period): \"" + text + "\"");
    std::string pre = text.substr(0, open);
    std::string per = text.substr(open + 1, text.size() - open - 2);
    if (per.empty())
        throw parse_error("empty period in \"" + text + "\"");
    return EpStream(alphabet, detail::parse_word(pre, alphabet, text),
                    detail::parse_word(per, alphabet, text));
}

inline std::string format_stream(const EpStream& s) {
    return s.preperiod().str() + "(" + s.period().str() + ")";
}

} // namespace weft
