#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <utility>

#include "weft/alphabet.hpp"
#include "weft/errors.hpp"
#include "weft/stream.hpp"

namespace weft {

/// How a causality claim came to be: built by a closure-preserving
/// construction, or survived a depth-bounded check. Never a proof for opaque
/// evaluators — checks are bounded, constructions are conditional on their
/// inputs' certificates.
struct Certificate {
    enum class Kind { by_construction, checked_to_depth };
    Kind kind;
    std::string derivation; // by_construction: how it was built
    int depth = 0;          // checked_to_depth: depth reached

    static Certificate by_construction(std::string how) {
        return {Kind::by_construction, std::move(how), 0};
    }
    static Certificate checked(int depth) { return {Kind::checked_to_depth, "", depth}; }

    std::string str() const {
        if (kind == Kind::by_construction)
            return "by-construction: " + derivation;
        return "checked-to-depth: " + std::to_string(depth);
    }
};

/// Claimed Lipschitz index: distances contract by at least 2⁻ᵏ. A claim at k
/// is good at every ℓ ≤ k.
struct CausalityClaim {
    int k;
    Certificate cert;
};

/// Set by weave(): what the member certificates supported. Consumed by
/// coinduce_stream_fn, whose certificates require a woven step function.
struct WovenInfo {
    bool members_causal;   // every member claimed at index ≥ 0
    bool members_bicausal; // every member carried a bicausal certificate
};

/// A stream function with optional causality certificates.
///
/// The factory makes one producer per application; the producer is queried
/// once per output index, in increasing order (the memoizing OpaqueStream
/// provides random access on top), so producers may carry sequential state
/// such as arithmetic carries or automaton states.
class CausalFn {
public:
    using Producer = std::function<Symbol(std::size_t)>;
    using Factory = std::function<Producer(const Stream&)>;

    CausalFn(Alphabet domain, Alphabet codomain, Factory make)
        : impl_(std::make_shared<Impl>(Impl{domain, codomain, std::move(make), {}, {}, {}})) {}

    const Alphabet& domain() const { return impl_->domain; }
    const Alphabet& codomain() const { return impl_->codomain; }

    Stream operator()(const Stream& in) const {
        require_same(in.alphabet(), impl_->domain);
        return OpaqueStream(impl_->codomain, impl_->make(in));
    }

    Word out_prefix(const Stream& in, std::size_t n) const { return prefix((*this)(in), n); }

    const std::optional<CausalityClaim>& claim() const { return impl_->claim; }
    const std::optional<Certificate>& bicausal_certificate() const { return impl_->bicausal; }
    const std::optional<WovenInfo>& woven_info() const { return impl_->woven; }

    // Claimed index, if the claim is at least as strong as ℓ (Γ_k ⊆ Γ_ℓ for ℓ ≤ k).
    bool claims_at_least(int ell) const { return impl_->claim && impl_->claim->k >= ell; }

    int claimed_k() const {
        if (!impl_->claim)
            throw certificate_error("function carries no causality claim");
        return impl_->claim->k;
    }

    CausalFn with_claim(int k, Certificate cert) const {
        CausalFn f = *this;
        f.impl_ = std::make_shared<Impl>(*impl_);
        f.impl_->claim = CausalityClaim{k, std::move(cert)};
        return f;
    }

    CausalFn with_bicausal(Certificate cert) const {
        CausalFn f = *this;
        f.impl_ = std::make_shared<Impl>(*impl_);
        f.impl_->bicausal = std::move(cert);
        return f;
    }

    CausalFn with_woven_info(WovenInfo info) const {
        CausalFn f = *this;
        f.impl_ = std::make_shared<Impl>(*impl_);
        f.impl_->woven = info;
        return f;
    }

private:
    struct Impl {
        Alphabet domain;
        Alphabet codomain;
        Factory make;
        std::optional<CausalityClaim> claim;
        std::optional<Certificate> bicausal;
        std::optional<WovenInfo> woven;
    };
    std::shared_ptr<Impl> impl_;
};

inline CausalFn identity_fn(Alphabet a) {
    CausalFn f(a, a, [](const Stream& in) {
        return [in](std::size_t n) { return in.at(n); };
    });
    return f.with_claim(0, Certificate::by_construction("identity"))
        .with_bicausal(Certificate::by_construction("identity"));
}

inline CausalFn tail_fn(Alphabet a) {
    CausalFn f(a, a, [](const Stream& in) {
        return [in](std::size_t n) { return in.at(n + 1); };
    });
    return f.with_claim(-1, Certificate::by_construction("tail"));
}

inline CausalFn prepend_fn(Word w) {
    Alphabet a = w.alphabet();
    CausalFn f(a, a, [w](const Stream& in) {
        return [w, in](std::size_t n) { return n < w.size() ? w[n] : in.at(n - w.size()); };
    });
    return f.with_claim(int(w.size()),
                        Certificate::by_construction("prepend \"" + w.str() + "\""));
}

/// compose(f, g) applies f first, then g — the pipeline g∘f. Indices add;
/// bicausality is preserved when both factors carry it.
inline CausalFn compose(const CausalFn& f, const CausalFn& g) {
    require_same(f.codomain(), g.domain());
    CausalFn h(f.domain(), g.codomain(), [f, g](const Stream& in) {
        Stream mid = f(in);
        Stream out = g(mid);
        return [out](std::size_t n) { return out.at(n); };
    });
    if (f.claim() && g.claim()) {
        int k = f.claim()->k + g.claim()->k;
        h = h.with_claim(k, Certificate::by_construction("compose: indices " +
                                                         std::to_string(f.claim()->k) + " + " +
                                                         std::to_string(g.claim()->k)));
    }
    if (f.bicausal_certificate() && g.bicausal_certificate())
        h = h.with_bicausal(Certificate::by_construction("compose of bicausal factors"));
    return h;
}

inline CausalFn compose_iterate(const CausalFn& f, std::size_t times) {
    CausalFn acc = identity_fn(f.domain());
    for (std::size_t i = 0; i < times; ++i)
        acc = compose(acc, f);
    return acc;
}

/// D_k: the common k-prefix of the image of a k-causal function (k ≥ 1),
/// computed on the all-zeros padding and spot-checked against all-ones. A
/// disagreement means the claimed certificate is invalid.
inline Word common_prefix_Dk(const CausalFn& f) {
    if (!f.claim() || f.claim()->k < 1)
        throw certificate_error("D_k needs a certified index k >= 1");
    std::size_t k = std::size_t(f.claim()->k);
    Word zeros_image = f.out_prefix(EpStream::zeros(f.domain()), k);
    Word ones_image = f.out_prefix(EpStream::constant(f.domain(), f.domain().size() - 1), k);
    if (!(zeros_image == ones_image))
        throw certificate_error("paddings disagree on the claimed common " + std::to_string(k) +
                                "-prefix; certificate at k=" + std::to_string(f.claim()->k) +
                                " is invalid");
    return zeros_image;
}

/// f = c_w ∘ f̂ with w = D_k(f) and f̂ = tailᵏ after f; f̂ is 0-causal.
inline std::pair<Word, CausalFn> decompose(const CausalFn& f) {
    Word w = common_prefix_Dk(f);
    CausalFn fhat = compose(f, compose_iterate(tail_fn(f.codomain()), w.size()));
    return {w, fhat};
}

} // namespace weft
