#include <catch2/catch_amalgamated.hpp>

#include "weft/dyadic.hpp"
#include "weft/random.hpp"
#include "weft/verify.hpp"

using namespace weft;

namespace {

const Alphabet bin = Alphabet::binary();

BigInt pow2(std::size_t n) { return BigInt(1) << unsigned(n); }

// two's-complement residue of a signed big integer
BigInt mod2n(BigInt v, std::size_t n) {
    BigInt m = pow2(n);
    v %= m;
    if (v < 0)
        v += m;
    return v;
}

std::int64_t draw_int(Rng& rng, std::int64_t lo, std::int64_t hi) {
    return lo + std::int64_t(rng.below(std::uint64_t(hi - lo + 1)));
}

} // namespace

TEST_CASE("integers get their two's-complement bitstreams", "[dyadic]") {
    CHECK(format_stream(from_int(0).bits()) == "(0)");
    CHECK(format_stream(from_int(1).bits()) == "1(0)");
    CHECK(format_stream(from_int(6).bits()) == "011(0)");
    CHECK(format_stream(from_int(-1).bits()) == "(1)");
    CHECK(format_stream(from_int(-2).bits()) == "0(1)");
    CHECK(format_stream(from_int(-4).bits()) == "00(1)");
}

TEST_CASE("integers survive the round trip", "[dyadic]") {
    for (int z = -60; z <= 60; ++z) {
        auto back = to_int(from_int(z));
        REQUIRE(back);
        CHECK(*back == z);
    }
    CHECK_FALSE(to_int(from_rational(1, 3)));
}

TEST_CASE("rational bitstreams satisfy q·x = p independently of to_rational", "[dyadic]") {
    // bit-level oracle: the residue of x times q must be p mod 2^64
    Rng rng(71);
    for (int trial = 0; trial < 300; ++trial) {
        BigInt p = draw_int(rng, -999, 999);
        BigInt q = 2 * draw_int(rng, 0, 499) + 1; // odd, in [1, 999]
        if (rng.coin())
            q = -q;
        Dyadic x = from_rational(p, q);
        CHECK(mod2n(residue(x, 64) * q, 64) == mod2n(p, 64));
    }
}

TEST_CASE("known rationals have their textbook expansions", "[dyadic]") {
    CHECK(format_stream(from_rational(1, 3).bits()) == "1(10)");
    CHECK(format_stream(from_rational(-1, 3).bits()) == "(10)");
    CHECK(format_stream(from_rational(1, -3).bits()) == "(10)");
    CHECK(format_stream(from_rational(2, 3).bits()) == "01(10)");
    CHECK(format_stream(from_rational(-1, 5).bits()) == "(1100)");

    Rational r = to_rational(from_rational(10, 15)); // reduces to 2/3
    CHECK(r.num == 2);
    CHECK(r.den == 3);

    CHECK_THROWS_AS(from_rational(1, 2), error);
    CHECK_THROWS_AS(from_rational(10, 6), error); // not reduced to odd form
    CHECK_THROWS_AS(from_rational(1, 0), error);
}

TEST_CASE("canonical bitstreams make equality structural", "[dyadic]") {
    CHECK(from_rational(1, 3) == Dyadic(parse_stream("1(10)")));
    CHECK(from_rational(1, 3) == Dyadic(parse_stream("11(01)")));
    CHECK(from_int(2) == Dyadic(parse_stream("01(00)")));
    CHECK_FALSE(from_int(2) == from_int(-2));
}

TEST_CASE("arithmetic matches big-integer arithmetic bit for bit", "[dyadic]") {
    Rng rng(73);
    for (int trial = 0; trial < 400; ++trial) {
        std::int64_t a = draw_int(rng, -1000000, 1000000);
        std::int64_t b = draw_int(rng, -1000000, 1000000);
        INFO(a << " op " << b);
        CHECK(residue(add(from_int(a), from_int(b)), 64) == mod2n(BigInt(a) + b, 64));
        CHECK(residue(sub(from_int(a), from_int(b)), 64) == mod2n(BigInt(a) - b, 64));
        CHECK(residue(mul(from_int(a), from_int(b)), 64) == mod2n(BigInt(a) * b, 64));
        CHECK(residue(neg(from_int(a)), 64) == mod2n(BigInt(-a), 64));
    }
}

TEST_CASE("exact rational identities hold", "[dyadic]") {
    Dyadic third = from_rational(1, 3);
    CHECK(add(third, from_rational(2, 3)) == from_int(1));
    CHECK(mul(third, from_int(3)) == from_int(1));
    CHECK(add(from_int(-1), from_int(1)) == from_int(0));
    CHECK(sub(third, third) == from_int(0));
    CHECK(neg(neg(third)) == third);
    CHECK(affine(from_int(3), from_int(2), from_rational(-1, 3)) == from_int(1));
    CHECK(complement(from_int(0)) == from_int(-1));
}

TEST_CASE("addition's carry automaton eventually cycles", "[dyadic]") {
    // periods 2 and 3 force phase lcm 6 plus carry
    Dyadic x = Dyadic(parse_stream("1(10)"));    // 1/3
    Dyadic y = Dyadic(parse_stream("(011)"));    // value -2/7? irrelevant: check vs rationals
    Rational rx = to_rational(x), ry = to_rational(y);
    Dyadic direct = add(x, y);
    Dyadic via_rat = from_rational(rx.num * ry.den + ry.num * rx.den, rx.den * ry.den);
    CHECK(direct == via_rat);
}

TEST_CASE("modular inverses invert", "[dyadic]") {
    // brute-force oracle at small precision
    for (std::size_t n = 1; n <= 12; ++n)
        for (std::uint64_t a = 1; a < (std::uint64_t(1) << n); a += 2) {
            BigInt x = inv_mod_pow2(BigInt(a), n);
            CHECK(mod2n(x * a, n) == 1);
        }
    CHECK(mod2n(inv_mod_pow2(BigInt(3), 64) * 3, 64) == 1);
    CHECK(inv_mod_pow2(from_rational(1, 3), 32) == 3); // (1/3)^-1 = 3
    CHECK_THROWS_AS(inv_mod_pow2(BigInt(6), 8), error);
    CHECK_THROWS_AS(inv_mod_pow2(from_int(2), 8), error);
    CHECK_THROWS_AS(inv_mod_pow2(BigInt(3), 0), error);
}

TEST_CASE("the affine stream function agrees with exact affine", "[dyadic]") {
    Rng rng(79);
    for (int trial = 0; trial < 60; ++trial) {
        Dyadic a = from_int(draw_int(rng, -9, 9));
        Dyadic b = from_int(draw_int(rng, -9, 9));
        Dyadic x = from_rational(draw_int(rng, -99, 99), 2 * draw_int(rng, 0, 49) + 1);
        CausalFn f = affine_fn(a, b);
        Word got = f.out_prefix(x.bits(), 48);
        CHECK(got == prefix(affine(a, b, x).bits(), 48));
    }
}

TEST_CASE("affine functions carry the right certificates", "[dyadic]") {
    CausalFn f3 = affine_fn(from_int(3), from_int(2));
    CHECK(f3.claimed_k() == 0);
    CHECK(f3.bicausal_certificate());
    CHECK(check_bicausal(f3, 10).verified());

    CausalFn f2 = affine_fn(from_int(2), from_int(0));
    CHECK_FALSE(f2.bicausal_certificate());
    CHECK(check_bicausal(f2, 8).falsified());
}

TEST_CASE("doubling is prepending a zero", "[dyadic]") {
    Rng rng(83);
    CHECK(double_fn().claimed_k() == 1);
    CHECK(double_plus_one_fn().claimed_k() == 1);
    CHECK(tail2_fn().claimed_k() == -1);
    Word zero = detail::parse_word("0", bin, "0");
    Word one = detail::parse_word("1", bin, "1");
    for (int trial = 0; trial < 30; ++trial) {
        EpStream x = rng.ep_stream(bin, 4, 4);
        CHECK(double_fn().out_prefix(x, 24) == prepend_fn(zero).out_prefix(x, 24));
        CHECK(double_plus_one_fn().out_prefix(x, 24) == prepend_fn(one).out_prefix(x, 24));
        CHECK(tail2_fn().out_prefix(x, 24) == tail_fn(bin).out_prefix(x, 24));
    }
    CHECK(check_k_causal(double_fn(), 1, 10).verified());
    CHECK(check_k_causal(tail2_fn(), -1, 10).verified());
}

TEST_CASE("dyadic literals parse in all three shapes", "[dyadic]") {
    CHECK(parse_dyadic("42") == from_int(42));
    CHECK(parse_dyadic("-7") == from_int(-7));
    CHECK(parse_dyadic("1/3") == from_rational(1, 3));
    CHECK(parse_dyadic("-1/3") == from_rational(-1, 3));
    CHECK(parse_dyadic("(10)") == from_rational(-1, 3));
    CHECK(parse_dyadic("11(0)") == from_int(3));
    CHECK_THROWS_AS(parse_dyadic(""), parse_error);
    CHECK_THROWS_AS(parse_dyadic("x"), parse_error);
    CHECK_THROWS_AS(parse_dyadic("-"), parse_error);
    CHECK_THROWS_AS(parse_dyadic("5/"), parse_error);

    CHECK(format_dyadic(from_int(-12)) == "-12");
    CHECK(format_dyadic(from_rational(5, 3)) == "5/3");
    CHECK(format_dyadic(from_rational(-1, 3)) == "-1/3");
}
