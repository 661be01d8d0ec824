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

#include <algorithm>

#include "helpers.hpp"
#include "oracles.hpp"

using namespace qlq;
using th::el;
using th::els;

namespace {

RatFunc2 rf(const std::string& s, const FieldTower& tw) { return el(s, tw).rational_part(); }

RatMatrix random_matrix(std::mt19937_64& rng, const FieldTower& tw, int rows, int cols, int nvars) {
    // sparse, low degree; some rows are combinations of others so deficient ranks occur
    RatMatrix m(rows, std::vector<RatFunc2>(cols));
    for (auto& row : m)
        for (auto& x : row)
            if (rng() % 3 == 0) x = th::random_poly_elem(rng, tw, nvars, 1 + rng() % 2, 1).rational_part();
    int copies = rows > 2 ? static_cast<int>(rng() % 3) : 0;
    for (int c = 0; c < copies; ++c) {
        int r = rng() % rows, a = rng() % rows, b = rng() % rows;
        RatFunc2 f(Poly2::var(tw.m(), static_cast<int>(rng() % nvars)));
        for (int j = 0; j < cols; ++j) m[r][j] = m[a][j] * f + m[b][j];
    }
    return m;
}

}  // namespace

TEST_CASE("span dimension examples") {
    FieldTower k1({"x"});
    CHECK(span_dim_over_squares(els({"1", "x", "1+x"}, k1), th::exact()) == 2);
    CHECK(span_dim_over_squares(els({"1", "x", "1+x"}, k1), th::mc()) == 2);
    FieldTower k2({"x", "y"});
    CHECK(span_dim_over_squares(els({"x", "y"}, k2), th::exact()) == 2);
    CHECK(oracle::span_dim(els({"x", "y"}, k2)) == 2);
    CHECK(span_dim_over_squares(els({"1", "x", "y", "x*y"}, k2), th::exact()) == 4);
    CHECK(oracle::monomial_span_dim({0, 1, 2, 3}) == 4);
}

TEST_CASE("independent subsets") {
    FieldTower k({"x", "y"});
    using V = std::vector<std::size_t>;
    for (auto mode : {th::exact(), th::mc()}) {
        CHECK(independent_subset(els({"1", "1", "x"}, k), mode) == V{0, 2});
        CHECK(independent_subset(els({"x", "y", "x+y"}, k), mode) == V{0, 1});
        CHECK(independent_subset(els({"x", "x*y^2", "x+1"}, k), mode) == V{0, 2});
    }
}

TEST_CASE("membership examples") {
    FieldTower k({"x", "y"});
    FieldTower k1({"x"});
    for (auto mode : {th::exact(), th::mc()}) {
        CHECK(membership_in_square_span(el("x^2*y", k), els({"y"}, k), mode));
        CHECK_FALSE(membership_in_square_span(el("1", k1), els({"x"}, k1), mode));
        CHECK(membership_in_square_span(el("x+y", k), els({"x", "y"}, k), mode));
    }
    CHECK(oracle::span_dim(els({"x", "1"}, k1)) == 2);
}

TEST_CASE("intersection examples") {
    FieldTower k({"x", "y"});
    auto r = square_span_intersection({els({"1", "x"}, k), els({"1", "y"}, k)}, th::exact());
    REQUIRE(r.size() == 1);
    CHECK(is_square(r[0], th::exact()));
    CHECK(square_span_intersection({els({"1", "x"}, k), els({"1", "x"}, k)}, th::exact()).size() == 2);
    CHECK(square_span_intersection({els({"x"}, k), els({"y"}, k)}, th::exact()).empty());
    CHECK_THROWS_AS(square_span_intersection({els({"x"}, k)}, th::mc()), Error);
    // oracle: monomial parity classes {0,1} and {0,2} share only class 0
    std::vector<oracle::Parity> a{0, 1}, b{0, 2}, both;
    for (auto p : a)
        if (std::count(b.begin(), b.end(), p)) both.push_back(p);
    CHECK(both.size() == 1);
}

TEST_CASE("intersection inside a tower") {
    FieldTower k({"x", "y", "z"});
    FieldTower l = k.extend_sqrt(el("x", k));
    // over l, x is a square, so span{1, y} and span{x, y*x} coincide
    auto r = square_span_intersection({els({"1", "y"}, l), els({"x", "x*y"}, l)}, th::exact());
    CHECK(r.size() == 2);
    // 1, y, z, s1*y are independent: s1, y, z is a 2-basis of l
    CHECK(square_span_intersection({els({"1", "y"}, l), els({"z", "s1*y"}, l)}, th::exact()).empty());
    auto r2 = square_span_intersection({els({"1", "s1"}, l), els({"s1 + y", "y*z^2"}, l)}, th::exact());
    CHECK(r2.size() == 1);
    for (const auto& w : r2) {
        CHECK(membership_in_square_span(w, els({"1", "s1"}, l), th::exact()));
        CHECK(membership_in_square_span(w, els({"s1 + y", "y*z^2"}, l), th::exact()));
    }
}

TEST_CASE("solve in square span") {
    FieldTower k({"x", "y"});
    auto basis = els({"x", "y"}, k);
    auto c = solve_in_square_span(el("x^3 + y*x^2 + y^3", k), basis);
    REQUIRE(c);
    FieldElement sum(k);
    for (std::size_t i = 0; i < basis.size(); ++i) {
        CHECK(is_square((*c)[i], th::exact()));
        sum += (*c)[i] * basis[i];
    }
    CHECK(sum == el("x^3 + y*x^2 + y^3", k));
    CHECK_FALSE(solve_in_square_span(el("1", k), basis));

    FieldTower l = k.extend_sqrt(el("x*y + 1", k));
    auto b2 = els({"1", "x"}, l);
    FieldElement target = el("x*y + 1 + x*(1+y^2)", l);
    auto c2 = solve_in_square_span(target, b2);
    REQUIRE(c2);
    CHECK((*c2)[0] * b2[0] + (*c2)[1] * b2[1] == target);
}

TEST_CASE("rank backend examples") {
    FieldTower k({"x", "y"});
    RatMatrix id{{rf("1", k), rf("0", k)}, {rf("0", k), rf("1", k)}};
    RatMatrix prop{{rf("x", k), rf("x^2", k)}, {rf("1", k), rf("x", k)}};
    RatMatrix sq{{rf("x", k), rf("y", k)}, {rf("y", k), rf("x", k)}};
    for (auto mode : {th::exact(), th::mc()}) {
        CHECK(rank_backend(id, mode).rank == 2);
        CHECK(rank_backend(prop, mode).rank == 1);
        CHECK(rank_backend(sq, mode).rank == 2);
    }
    CHECK(oracle::dense_rank(prop) == 1);
    CHECK(oracle::dense_rank(sq) == 2);
}

TEST_CASE("exact rank agrees with the dense oracle") {
    std::mt19937_64 rng(17);
    FieldTower k({"x1", "x2", "x3"});
    for (int it = 0; it < 40; ++it) {
        int rows = 2 + rng() % 5, cols = 2 + rng() % 5;
        RatMatrix m = random_matrix(rng, k, rows, cols, 3);
        CHECK(rank_backend(m, th::exact()).rank == oracle::dense_rank(m));
    }
}

TEST_CASE("span dimension agrees with the dense oracle in towers") {
    std::mt19937_64 rng(23);
    FieldTower k({"x", "y", "z"});
    FieldTower l = k.extend_sqrt(el("x + y*z", k));
    for (int it = 0; it < 20; ++it) {
        std::vector<FieldElement> v;
        int n = 1 + rng() % 4;
        for (int i = 0; i < n; ++i) {
            FieldElement a = th::random_poly_elem(rng, l, 3, 1 + rng() % 2, 2);
            if (rng() % 2) a = a + th::random_poly_elem(rng, l, 3, 1, 1) * el("s1", l);
            v.push_back(a);
        }
        if (rng() % 2) v.push_back(v[0] * el("y^2 + s1^2", l) + v.back());
        bool all_zero = std::all_of(v.begin(), v.end(), [](const FieldElement& a) { return a.is_zero(); });
        if (all_zero) continue;
        CHECK(span_dim_over_squares(v, th::exact()) == oracle::span_dim(v));
    }
}

TEST_CASE("monte carlo never exceeds exact") {
    std::mt19937_64 rng(99);
    FieldTower k({"x1", "x2", "x3", "x4"});
    int agree = 0;
    for (int it = 0; it < 100; ++it) {
        RatMatrix m = random_matrix(rng, k, 10, 10, 4);
        auto e = rank_backend(m, th::exact());
        auto mc = rank_backend(m, RankMode::monte_carlo(1000 + it, 2, 32));
        CHECK(mc.rank <= e.rank);
        if (mc.rank == e.rank) ++agree;
    }
    CHECK(agree >= 99);
}

TEST_CASE("span dimension invariances") {
    std::mt19937_64 rng(31);
    FieldTower k({"x", "y", "z"});
    for (int it = 0; it < 30; ++it) {
        std::vector<FieldElement> v;
        int n = 2 + rng() % 3;
        for (int i = 0; i < n; ++i) v.push_back(th::random_elem(rng, k, 3));
        std::size_t d = span_dim_over_squares(v, th::exact());
        auto p = v;
        std::shuffle(p.begin(), p.end(), rng);
        CHECK(span_dim_over_squares(p, th::exact()) == d);
        auto s = v;
        s[0] = s[0] * th::random_elem(rng, k, 3).square();
        CHECK(span_dim_over_squares(s, th::exact()) == d);
        auto t = v;
        t[1] = t[1] + t[0] * th::random_elem(rng, k, 3).square();
        CHECK(span_dim_over_squares(t, th::exact()) == d);
        auto u = v;
        u.push_back(th::random_elem(rng, k, 3));
        std::size_t d2 = span_dim_over_squares(u, th::exact());
        CHECK((d2 == d || d2 == d + 1));
    }
}

TEST_CASE("unit rank in towers") {
    FieldTower k({"x", "y"});
    FieldTower l = k.extend_sqrt(el("x", k)).extend_rational(1);
    FieldTower l2 = l.extend_sqrt(el("y + T1^2*x", l));
    for (const FieldTower& tw : {k, l, l2}) {
        auto r = analyze_span({FieldElement::one(tw)}, th::mc());
        CHECK(r.dim == 1);
        CHECK(r.rows_rank == (std::size_t(1) << tw.t()));
    }
}
