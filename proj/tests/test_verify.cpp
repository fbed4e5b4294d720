#include <catch2/catch_amalgamated.hpp>

#include "weft/collatz.hpp"
#include "weft/generate.hpp"
#include "weft/verify.hpp"

using namespace weft;

namespace {

const Alphabet bin = Alphabet::binary();

// A falsified report must carry a witness that actually witnesses: the inputs
// agree as claimed and the outputs disagree where claimed.
void require_honest_witness(const CausalFn& f, const CausalityReport& rep) {
    REQUIRE(rep.falsified());
    EpStream sigma = parse_stream(rep.witness_sigma, f.domain());
    EpStream tau = parse_stream(rep.witness_tau, f.domain());
    REQUIRE(prefix_equiv(sigma, tau, std::size_t(rep.agree_len)));
    if (rep.agree_len < rep.depth)
        REQUIRE(sigma.at(std::size_t(rep.agree_len)) != tau.at(std::size_t(rep.agree_len)));
    CHECK(f(sigma).at(std::size_t(rep.disagree_at)) != f(tau).at(std::size_t(rep.disagree_at)));
    CHECK(rep.disagree_at < rep.agree_len + rep.claimed_k);
}

} // namespace

TEST_CASE("the checker verifies true claims exhaustively", "[verify]") {
    CausalityReport id0 = check_k_causal(identity_fn(bin), 0, 8);
    CHECK(id0.verified());
    CHECK(id0.exhaustive);
    CHECK(id0.cases == 256);

    CHECK(check_k_causal(tail_fn(bin), -1, 8).verified());
    Word w = detail::parse_word("11", bin, "11");
    CHECK(check_k_causal(prepend_fn(w), 2, 8).verified());
    CHECK(check_k_causal(q_fn(), 0, 10).verified());
}

TEST_CASE("the checker falsifies overclaims with an honest witness", "[verify]") {
    CausalityReport id1 = check_k_causal(identity_fn(bin), 1, 8);
    require_honest_witness(identity_fn(bin), id1);

    CausalityReport tail0 = check_k_causal(tail_fn(bin), 0, 8);
    require_honest_witness(tail_fn(bin), tail0);

    Word w = detail::parse_word("1", bin, "1");
    require_honest_witness(prepend_fn(w), check_k_causal(prepend_fn(w), 2, 8));
}

TEST_CASE("the checker measures behavior, not the carried claim", "[verify]") {
    // prepend claims k = 1 but is also 1-causal at heart; the check at 1 looks
    // past the claim of a weaker wrapper
    Word w = detail::parse_word("0", bin, "0");
    CausalFn weakly_claimed = prepend_fn(w).with_claim(0, Certificate::checked(1));
    CHECK(check_k_causal(weakly_claimed, 1, 8).verified());
}

TEST_CASE("beyond its budget the checker samples and says so", "[verify]") {
    CheckOptions opts;
    opts.budget = 16;
    opts.samples = 200;
    opts.seed = 9;
    CausalityReport rep = check_k_causal(identity_fn(bin), 0, 10, opts);
    CHECK(rep.verified());
    CHECK_FALSE(rep.exhaustive);
    CHECK(rep.cases == 200);
    CHECK(rep.note == "sampled beyond budget");

    // sampling still finds gross overclaims
    CausalityReport bad = check_k_causal(tail_fn(bin), 0, 10, opts);
    CHECK(bad.falsified());
}

TEST_CASE("depth must be positive", "[verify]") {
    CHECK_THROWS_AS(check_k_causal(identity_fn(bin), 0, 0), error);
}

TEST_CASE("bijection levels: permutations pass, mergers fail", "[verify]") {
    CHECK(check_bijection_levels(identity_fn(bin), 8).verified());
    CHECK(check_bijection_levels(q_fn(), 8).verified());

    // x -> 2x sends both parities to even: level 1 already merges
    CausalityReport rep = check_bijection_levels(double_fn(), 4);
    REQUIRE(rep.falsified());
    CHECK(rep.note.find("level 1") != std::string::npos);

    CHECK_THROWS_AS(check_bijection_levels(identity_fn(bin), 40), budget_error);
}

TEST_CASE("bicausality needs both directions", "[verify]") {
    CHECK(check_bicausal(identity_fn(bin), 8).verified());
    CHECK(check_bicausal(q_fn(), 8).verified());
    CHECK(check_bicausal(tail_fn(bin), 8).falsified());     // not 0-causal
    CHECK(check_bicausal(double_fn(), 8).falsified());      // 0-causal, not injective
    Rng rng(31);
    CHECK(check_bicausal(random_bicausal_fn(rng, bin, 8), 8).verified());
}

TEST_CASE("inverting a certified bijection gives a two-sided inverse", "[verify]") {
    Rng rng(13);
    CausalFn f = random_bicausal_fn(rng, bin, 8);
    CausalFn g = invert_bicausal(f, 8);
    CHECK(g.claims_at_least(0));
    for (int trial = 0; trial < 20; ++trial) {
        EpStream s = rng.ep_stream(bin, 3, 3);
        CHECK(compose(f, g).out_prefix(s, 8) == prefix(s, 8));
        CHECK(compose(g, f).out_prefix(s, 8) == prefix(s, 8));
    }
}

TEST_CASE("inverting a non-bijection is refused with the offending level", "[verify]") {
    CHECK_THROWS_AS(invert_bicausal(double_fn(), 6), certificate_error);
    CHECK_THROWS_AS(invert_bicausal(tail_fn(bin), 6), certificate_error);
}

TEST_CASE("read counters observe exactly what the function pulls", "[verify]") {
    ReadCounter counter;
    Stream tapped = counting_tap(parse_stream("(01)"), counter);
    CHECK(counter.consumed() == 0);
    tapped.at(4);
    tapped.at(2);
    CHECK(counter.consumed() == 5);

    EpStream base = parse_stream("1(10)");
    CHECK(consumed_for_prefix(tail_fn(bin), base, 5) == 6);
    CHECK(consumed_for_prefix(identity_fn(bin), base, 5) == 5);
}
