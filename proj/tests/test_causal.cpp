#include <catch2/catch_amalgamated.hpp>

#include "weft/causal.hpp"
#include "weft/generate.hpp"
#include "weft/random.hpp"
#include "weft/verify.hpp"

using namespace weft;

namespace {
const Alphabet bin = Alphabet::binary();
}

TEST_CASE("identity, tail, and prepend act on streams", "[causal]") {
    EpStream s = parse_stream("01(101)");

    CHECK(identity_fn(bin).out_prefix(s, 8) == prefix(s, 8));
    CHECK(tail_fn(bin).out_prefix(s, 8) == prefix(tail(s), 8));

    Word w = detail::parse_word("110", bin, "110");
    CHECK(prepend_fn(w).out_prefix(s, 8) == prefix(prepend(w, s), 8));

    CHECK(identity_fn(bin).claimed_k() == 0);
    CHECK(tail_fn(bin).claimed_k() == -1);
    CHECK(prepend_fn(w).claimed_k() == 3);
}

TEST_CASE("results are memoized opaque streams", "[causal]") {
    auto calls = std::make_shared<int>(0);
    CausalFn f(bin, bin, [calls](const Stream& in) {
        return [calls, in](std::size_t n) {
            ++*calls;
            return in.at(n);
        };
    });
    Stream out = f(parse_stream("(01)"));
    prefix(out, 6);
    prefix(out, 6);
    CHECK(*calls == 6);
}

TEST_CASE("compose applies left first, and claims add", "[causal]") {
    EpStream s = parse_stream("0110(1)");
    Word a = detail::parse_word("1", bin, "1");

    // t ∘ c_a: prepend then tail recovers the stream
    CausalFn roundtrip = compose(prepend_fn(a), tail_fn(bin));
    CHECK(roundtrip.out_prefix(s, 10) == prefix(s, 10));
    CHECK(roundtrip.claimed_k() == 0);

    // c_a ∘ t: tail then prepend replaces the head
    CausalFn replace = compose(tail_fn(bin), prepend_fn(a));
    CHECK(replace.out_prefix(s, 4).str() == "1110");

    CHECK(compose(tail_fn(bin), tail_fn(bin)).claimed_k() == -2);
    CHECK(compose_iterate(tail_fn(bin), 3).out_prefix(s, 3) == prefix(tail_n(s, 3), 3));
    CHECK(compose_iterate(tail_fn(bin), 0).out_prefix(s, 5) == prefix(s, 5));
}

TEST_CASE("claims are certificates, not measurements", "[causal]") {
    CausalFn bare(bin, bin, [](const Stream& in) {
        return [in](std::size_t n) { return in.at(n); };
    });
    CHECK_FALSE(bare.claim().has_value());
    CHECK_THROWS_AS(bare.claimed_k(), certificate_error);
    CHECK(bare.with_claim(0, Certificate::checked(8)).claimed_k() == 0);
    CHECK(identity_fn(bin).claims_at_least(0));
    CHECK(identity_fn(bin).claims_at_least(-2)); // Γ_0 ⊆ Γ_ℓ for ℓ ≤ 0
    CHECK_FALSE(identity_fn(bin).claims_at_least(1));
}

TEST_CASE("a k >= 1 function pins its first k output symbols", "[causal]") {
    Word w = detail::parse_word("101", bin, "101");
    CHECK(common_prefix_Dk(prepend_fn(w)) == w);

    // composition of two prepends: f first, so its word lands deepest
    Word a = detail::parse_word("0", bin, "0");
    Word b = detail::parse_word("1", bin, "1");
    CHECK(common_prefix_Dk(compose(prepend_fn(a), prepend_fn(b))).str() == "10");

    CHECK_THROWS_AS(common_prefix_Dk(identity_fn(bin)), certificate_error);
    CHECK_THROWS_AS(common_prefix_Dk(tail_fn(bin)), certificate_error);
}

TEST_CASE("decompose factors f as prepend(D_k) after the k-fold tail of f", "[causal]") {
    Rng rng(11);
    for (int k = 1; k <= 3; ++k) {
        CausalFn f = random_causal_fn(rng, bin, k, 10);
        auto [w, fhat] = decompose(f);
        REQUIRE(int(w.size()) == k);
        CHECK(fhat.claimed_k() == 0);
        for (int trial = 0; trial < 20; ++trial) {
            EpStream s = rng.ep_stream(bin, 3, 3);
            Word via = prefix(prepend(w, fhat(s)), 9);
            CHECK(via == f.out_prefix(s, 9));
        }
    }
}

TEST_CASE("output prefixes read no more input than k allows", "[causal]") {
    EpStream base = parse_stream("1100(10)");
    CHECK(consumed_for_prefix(identity_fn(bin), base, 6) <= 6);
    CHECK(consumed_for_prefix(tail_fn(bin), base, 6) <= 7);
    Word w = detail::parse_word("01", bin, "01");
    CHECK(consumed_for_prefix(prepend_fn(w), base, 2) == 0); // first k symbols are free

    Rng rng(3);
    CHECK(read_bound_holds(identity_fn(bin), 0, base, 12));
    CHECK(read_bound_holds(tail_fn(bin), -1, base, 12));
    CHECK(read_bound_holds(prepend_fn(w), 2, base, 12));
    for (int k = -2; k <= 2; ++k)
        CHECK(read_bound_holds(random_causal_fn(rng, bin, k, 8), k, base, 8));
}
