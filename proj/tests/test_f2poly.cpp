/*
   Copyright 2026 The qlq Authors

   Licensed under the Apache License, Version 2.0 (the "License");
   you may not use this file except in compliance with the License.
   You may obtain a copy of the License at

        http://www.apache.org/licenses/LICENSE-2.0

   Unless required by applicable law or agreed to in writing, software
   distributed under the License is distributed on an "AS IS" BASIS,
   WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
   See the License for the specific language governing permissions and
   limitations under the License.
*/

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <random>

#include "qlq/f2poly.hpp"

using namespace qlq;

namespace {

Poly2 X(int i, unsigned p = 1) { return Poly2::var(3, i, p); }
Poly2 one() { return Poly2::one(3); }

Poly2 random_poly(std::mt19937_64& rng, int vars, int terms, int maxexp) {
    std::vector<Monomial> ts;
    for (int j = 0; j < terms; ++j) {
        Monomial m;
        for (int v = 0; v < vars; ++v) {
            m.set_exp(v, static_cast<unsigned>(rng() % (maxexp + 1)));
        }
        ts.push_back(m);
    }
    return Poly2(vars, ts);
}

/* slow reference: is the modulus irreducible? x^(2^k) = x mod f and gcd conditions (Ben-Or style) */
uint64_t mulmod(uint64_t a, uint64_t b, int k, uint64_t low) {
    // plain shift-add with reduction, independent of the windowed multiply
    uint64_t r = 0;
    uint64_t top = uint64_t(1) << (k - 1);
    uint64_t mask = k == 64 ? ~uint64_t(0) : (uint64_t(1) << k) - 1;
    for (int i = k - 1; i >= 0; --i) {
        bool carry = r & top;
        r = (r << 1) & mask;
        if (carry) r ^= low;
        if ((b >> i) & 1) r ^= a;
    }
    return r;
}

/* polynomials over GF(2) of degree < 128 as __int128 bitsets, for gcd */
using P = unsigned __int128;
int pdeg(P a) {
    for (int i = 127; i >= 0; --i)
        if ((a >> i) & 1) return i;
    return -1;
}
P pmod(P a, P b) {
    int db = pdeg(b);
    for (int d = pdeg(a); d >= db; d = pdeg(a)) a ^= b << (d - db);
    return a;
}
P pgcd(P a, P b) {
    while (b) {
        P r = pmod(a, b);
        a = b;
        b = r;
    }
    return a;
}

bool irreducible(int k, uint64_t low) {
    P f = (P(1) << k) | low;
    // x^(2^i) mod f for i = 1..k/2 ; gcd(x^(2^i) - x, f) must be 1
    uint64_t x = k == 1 ? 1 : 2;
    uint64_t acc = x;
    for (int i = 1; i <= k / 2; ++i) {
        acc = mulmod(acc, acc, k, low);
        P g = pgcd(f, P(acc ^ x));
        if (pdeg(g) > 0) return false;
    }
    return true;
}

}  // namespace

TEST_CASE("characteristic two addition") {
    RatFunc2 a(X(0) + one());
    CHECK((a + a).is_zero());
    CHECK(RatFunc2(X(0)) * RatFunc2(X(0)) == RatFunc2(X(0, 2)));
}

TEST_CASE("inverse of (x+y)/x") {
    RatFunc2 a(X(0) + X(1), X(0));
    RatFunc2 b = a.inv();
    CHECK(b == RatFunc2(X(0), X(0) + X(1)));
    CHECK((a * b).is_one());
    CHECK_THROWS_AS(RatFunc2().inv(), Error);
}

TEST_CASE("square split examples") {
    auto m = square_split(X(0, 2) + X(0) * X(1) + one(), 2);
    REQUIRE(m.size() == 2);
    CHECK(m.at(0) == X(0) + one());
    CHECK(m.at(3) == one());
    CHECK(square_split(Poly2(2), 2).empty());
    Poly2 s = X(0) + X(1);
    auto c = square_split(s * s * s, 2);
    REQUIRE(c.size() == 2);
    CHECK(c.at(1) == X(0) + X(1));
    CHECK(c.at(2) == X(0) + X(1));
}

TEST_CASE("square split reassembles") {
    std::mt19937_64 rng(7);
    for (int it = 0; it < 200; ++it) {
        Poly2 p = random_poly(rng, 3, 1 + rng() % 8, 5);
        Poly2 back(3);
        for (const auto& [e, q] : square_split(p, 3)) {
            Monomial ye = Monomial::from_parity(e);
            back += q.square().mul_monomial(ye);
        }
        CHECK(back == p);
    }
}

TEST_CASE("freshman's dream and p+p") {
    std::mt19937_64 rng(11);
    for (int it = 0; it < 200; ++it) {
        Poly2 p = random_poly(rng, 3, 1 + rng() % 6, 3);
        Poly2 q = random_poly(rng, 3, 1 + rng() % 6, 3);
        CHECK((p + p).is_zero());
        CHECK((p + q) * (p + q) == p.square() + q.square());
        CHECK(p * p == p.square());
        if (!q.is_zero()) {
            auto d = (p * q).exact_div(q);
            REQUIRE(d);
            CHECK(*d == p);
        }
    }
}

TEST_CASE("evaluation") {
    GF2k f1(1);
    CHECK(evaluate(X(0) + one(), f1, {1}) == 0);

    GF2k f4(2);
    uint64_t t = f4.generator();
    uint64_t got = evaluate(RatFunc2(X(0, 2), X(1)), GF2kPoint{2, {t, t ^ 1}});
    CHECK(got == f4.mul(f4.sqr(t), f4.inv(t ^ 1)));
    // GF(4) by hand: t^2 = t+1, (t+1)^-1 = t, so t^2/(t+1) = (t+1)t = t^2+t = 1
    CHECK(got == 1);

    try {
        evaluate(RatFunc2(one(), X(0)), GF2kPoint{8, {0}});
        FAIL("expected DenominatorZero");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::DenominatorZero);
    }
}

TEST_CASE("evaluation is a homomorphism") {
    std::mt19937_64 rng(3);
    GF2k f(32);
    for (int it = 0; it < 100; ++it) {
        RatFunc2 a(random_poly(rng, 3, 4, 3), random_poly(rng, 3, 2, 2) + one());
        RatFunc2 b(random_poly(rng, 3, 4, 3), random_poly(rng, 3, 2, 2) + one());
        std::vector<uint64_t> pt{f.random_nonzero(rng), f.random_nonzero(rng), f.random_nonzero(rng)};
        auto ea = try_evaluate(a, f, pt), eb = try_evaluate(b, f, pt);
        auto es = try_evaluate(a + b, f, pt), ep = try_evaluate(a * b, f, pt);
        if (!ea || !eb || !es || !ep) continue;
        CHECK(*es == (*ea ^ *eb));
        CHECK(*ep == f.mul(*ea, *eb));
    }
}

TEST_CASE("sqrt in GF(8)") {
    GF2k f(3);
    uint64_t g = f.generator();
    CHECK(gf2k_sqrt(f, 0) == 0);
    CHECK(gf2k_sqrt(f, 1) == 1);
    CHECK(gf2k_sqrt(f, f.sqr(g)) == g);
}

TEST_CASE("sqrt squares back") {
    std::mt19937_64 rng(5);
    for (int k : {1, 8, 16, 32}) {
        GF2k f(k);
        for (int i = 0; i < 10000; ++i) {
            uint64_t v = f.random(rng);
            CHECK(f.sqr(f.sqrt(v)) == v);
        }
    }
}

TEST_CASE("moduli are irreducible") {
    for (int k = 1; k <= 64; ++k) {
        GF2k f(k);
        CHECK_MESSAGE(irreducible(k, f.modulus_low()), "k = ", k);
        // windowed multiply agrees with shift-add
        std::mt19937_64 rng(k);
        for (int i = 0; i < 50; ++i) {
            uint64_t a = f.random(rng), b = f.random(rng);
            CHECK(f.mul(a, b) == mulmod(a, b, k, f.modulus_low()));
        }
        uint64_t a = f.random_nonzero(rng);
        CHECK(f.mul(a, f.inv(a)) == 1);
    }
}

TEST_CASE("printing is graded-lex") {
    Poly2 p = one() + X(1) + X(0, 2) * X(1);
    CHECK(p.to_string() == "x1^2*x2 + x2 + 1");
    CHECK(RatFunc2(X(0), X(0) + X(1)).to_string(default_names(3)) == "x1/(x1 + x2)");
}
