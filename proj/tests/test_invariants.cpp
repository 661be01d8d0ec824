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

#include <cmath>

#include "helpers.hpp"
#include "oracles.hpp"
#include "qlq/errors.hpp"
#include "qlq/invariants.hpp"

using namespace qlq;
using th::el;
using th::els;

namespace {

QuasilinearForm form(std::initializer_list<const char*> xs, const FieldTower& tw) {
    return QuasilinearForm(tw, els(xs, tw));
}

QuasilinearForm generic(int n) {
    std::vector<std::string> names;
    for (int i = 1; i <= n; ++i) names.push_back("T" + std::to_string(i));
    FieldTower k(names);
    std::vector<FieldElement> es;
    for (int i = 0; i < n; ++i) es.push_back(FieldElement::var(k, i));
    return QuasilinearForm(k, es);
}

QuasilinearForm qp(int n) {
    std::vector<std::string> names;
    for (int i = 1; i <= n; ++i) names.push_back("x" + std::to_string(i));
    FieldTower k(names);
    std::vector<FieldElement> gs;
    for (int i = 0; i < n; ++i) gs.push_back(FieldElement::var(k, i));
    return pfister_form(k, gs);
}

QuasilinearForm random_anis(std::mt19937_64& rng, const FieldTower& tw, int nvars, std::size_t dim) {
    std::vector<FieldElement> es;
    for (std::size_t i = 0; i < dim; ++i) es.push_back(th::random_elem(rng, tw, nvars));
    return anisotropic_part(QuasilinearForm(tw, es), th::exact());
}

QuasilinearForm random_mono_anis(std::mt19937_64& rng, const FieldTower& tw, int nvars, std::size_t dim) {
    std::vector<FieldElement> es;
    for (std::size_t i = 0; i < dim; ++i) {
        Monomial m;
        for (int v = 0; v < nvars; ++v) m.set_exp(v, rng() % 3);
        es.emplace_back(tw, RatFunc2(Poly2::monomial(tw.m(), m)));
    }
    return anisotropic_part(QuasilinearForm(tw, es), th::exact());
}

/* monomial entries as parity vectors, for the exhaustive oracle */
std::vector<oracle::Parity> parities(const QuasilinearForm& f) {
    std::vector<oracle::Parity> out;
    for (const auto& e : f.entries()) out.push_back(e.rational_part().num().lead().parity());
    return out;
}

}  // namespace

TEST_CASE("dimension helpers") {
    CHECK(dim_exponent(1) == -1);
    CHECK(dim_exponent(2) == 0);
    CHECK(dim_exponent(3) == 1);
    CHECK(dim_exponent(4) == 1);
    CHECK(dim_exponent(5) == 2);
    CHECK(dim_exponent(16) == 3);
    CHECK(y_value(5, 1) == 2);
    CHECK(y_value(4, 1) == 1);
    CHECK(y_value(16, 3) == 1);
}

TEST_CASE("norm form") {
    auto ex = th::exact();
    FieldTower k({"x", "y"});
    auto n1 = norm_form(form({"1"}, k), ex);
    CHECK(n1.lndeg == 0);
    CHECK(n1.form().dim() == 1);
    auto n2 = norm_form(form({"1", "x", "y"}, k), ex);
    CHECK(n2.lndeg == 2);
    CHECK(n2.ndeg == 4);
    CHECK(isomorphic(n2.form(), pfister_form(k, els({"x", "y"}, k)), ex));
    CHECK(oracle::monomial_lndeg(parities(form({"1", "x", "y"}, k))) == 2);
    for (int n = 2; n <= 6; ++n) {
        auto g = generic(n);
        CHECK(lndeg(g, ex) == n - 1);
        CHECK(oracle::monomial_lndeg(parities(g)) == static_cast<std::size_t>(n - 1));
    }
    // scaling does not change the norm field
    CHECK(lndeg(form({"x", "x*y", "y^3"}, k), ex) == 2);
    CHECK(lndeg(form({"x", "x*y^2"}, k), ex) == 0);  // x * x y^2 is a square
}

TEST_CASE("norm degree agrees with the exhaustive oracle on monomial forms") {
    std::mt19937_64 rng(31);
    FieldTower k({"a", "b", "c", "d"});
    for (int it = 0; it < 40; ++it) {
        std::vector<FieldElement> es;
        std::size_t dim = 1 + rng() % 6;
        for (std::size_t i = 0; i < dim; ++i) {
            Monomial m;
            for (int v = 0; v < 4; ++v) m.set_exp(v, rng() % 3);
            es.emplace_back(k, RatFunc2(Poly2::monomial(4, m)));
        }
        QuasilinearForm f(k, es);
        CHECK(static_cast<std::size_t>(lndeg(f, th::exact())) == oracle::monomial_lndeg(parities(f)));
        CHECK(isotropy_index(f, th::exact()) == f.dim() - oracle::monomial_span_dim(parities(f)));
    }
}

TEST_CASE("similarity factors") {
    auto ex = th::exact();
    FieldTower k({"x", "y", "z"});
    auto pxy = pfister_form(k, els({"x", "y"}, k));
    CHECK(isomorphic(sim_form(pxy, ex), pxy, ex));
    CHECK(sim_form(form({"1", "x", "y"}, k), ex).dim() == 1);
    auto t = tensor(form({"1", "x"}, k), form({"1", "y", "z"}, k));
    CHECK(isomorphic(sim_form(t, ex), pfister_form(k, els({"x"}, k)), ex));
    CHECK_THROWS_AS(sim_form(t, th::mc()), Error);
    // phi is divisible by its similarity form
    CHECK(divides(sim_form(t, ex), t, ex));
}

TEST_CASE("divisibility") {
    auto ex = th::exact();
    FieldTower k({"x", "y"});
    CHECK(divides(form({"1", "x"}, k), pfister_form(k, els({"x", "y"}, k)), ex));
    CHECK_FALSE(divides(form({"1", "y"}, k), form({"1", "x"}, k), ex));
    CHECK(divides(form({"1"}, k), form({"x", "y"}, k), ex));
    CHECK(divides(form({"1"}, k), form({"1", "x", "y"}, k), ex));
}

TEST_CASE("quasi-Pfister detection") {
    auto ex = th::exact();
    FieldTower k({"x", "y"});
    CHECK(is_quasi_pfister(form({"1", "x", "y", "x*y"}, k), ex));
    CHECK(is_quasi_pfister(form({"1"}, k), ex));
    CHECK_FALSE(is_quasi_pfister(form({"x"}, k), ex));
    CHECK_FALSE(is_quasi_pfister(form({"1", "x", "y"}, k), ex));
    CHECK(is_qp_neighbour(form({"1", "x", "y"}, k), ex));
    CHECK_FALSE(is_qp_neighbour(generic(5), ex));
    CHECK(is_qp_neighbour(generic(3), ex));
    CHECK_THROWS_AS(is_qp_neighbour(form({"x"}, k), ex), Error);
}

TEST_CASE("splitting towers") {
    auto ex = th::exact();
    auto st = splitting_tower(qp(3), -1, ex);
    CHECK(st.complete);
    CHECK(st.indices == std::vector<std::size_t>{4, 2, 1});
    CHECK(st.izh == 4);
    for (std::size_t j = 0; j < st.forms.size(); ++j)
        CHECK(lndeg(st.forms[j], ex) == 3 - static_cast<int>(j));

    auto g4 = splitting_tower(generic(4), -1, ex);
    CHECK(g4.i1 == 1);
    CHECK(g4.izh == 3);
    CHECK(g4.complete);
    CHECK(g4.forms.size() == 4);  // h = lndeg = 3
    std::size_t sum = 0;
    for (auto i : g4.indices) sum += i;
    CHECK(sum == 3);
    for (std::size_t j = 0; j < g4.forms.size(); ++j)
        CHECK(lndeg(g4.forms[j], ex) == 3 - static_cast<int>(j));

    auto g5 = splitting_tower(generic(5), 1, ex);
    CHECK_FALSE(g5.complete);
    CHECK(g5.i1 == 1);
    CHECK(g5.izh == 4);

    // a tiny guard stops the tower early without throwing
    FieldTower small({"x1", "x2", "x3"}, DepthGuard{6, 1u << 20});
    auto p = pfister_form(small, els({"x1", "x2", "x3"}, small));
    auto cut = splitting_tower(p, -1, ex);
    CHECK_FALSE(cut.complete);
    CHECK_FALSE(cut.stopped.empty());
}

TEST_CASE("Izhboldin dimension lower bound and phi_1 divisibility") {
    std::mt19937_64 rng(32);
    FieldTower k({"x", "y", "z"});
    auto ex = th::exact();
    int ran = 0;
    for (int it = 0; it < 60 && ran < 20; ++it) {
        auto f = random_anis(rng, k, 3, 2 + rng() % 5);
        if (f.dim() < 2) continue;
        auto st = splitting_tower(f, 1, ex);
        int n = dim_exponent(f.dim());
        CHECK(st.izh >= (std::size_t{1} << n));
        CHECK(st.izh < f.dim());
        // anis(phi) is similar to a subform of the norm form
        CHECK(subform_leq(scale(f[0].inv(), f), norm_form(f, ex).form(), ex));
        ++ran;
    }
    CHECK(ran == 20);
}

TEST_CASE("phi_1 is divisible by a quasi-Pfister form of dimension >= i_1") {
    // exact intersection inside F(phi) is costly; small monomial forms keep it cheap
    std::mt19937_64 rng(40);
    FieldTower k({"x", "y", "z"});
    auto ex = th::exact();
    int ran = 0;
    for (int it = 0; it < 60 && ran < 20; ++it) {
        auto f = random_mono_anis(rng, k, 3, 2 + rng() % 3);
        if (f.dim() < 2) continue;
        auto st = splitting_tower(f, 1, ex);
        auto s = sim_form(st.forms[1], ex);
        CHECK(s.dim() >= st.i1);
        CHECK(divides(s, st.forms[1], ex));
        ++ran;
    }
    CHECK(ran == 20);
}

TEST_CASE("P_r membership") {
    auto ex = th::exact();
    FieldTower k({"x", "y", "z"});
    CHECK(pr_member(form({"1"}, k), form({"x", "y"}, k), ex));
    CHECK(pr_member(form({"1", "x"}, k), form({"1", "x", "y"}, k), ex));
    auto t = tensor(form({"1", "x"}, k), form({"1", "z"}, k));
    CHECK_FALSE(pr_member(form({"1", "y"}, k), t, ex));
}

TEST_CASE("P_r status") {
    auto ex = th::exact();
    auto o = pr_status(generic(5), 2, {}, ex);
    CHECK(o.status == SearchOutcome::Status::Empty);
    CHECK(o.certificate == Certificate::LndegTooLarge);

    FieldTower k({"x", "y"});
    auto o2 = pr_status(form({"1", "x", "y"}, k), 2, {}, ex);
    REQUIRE(o2.status == SearchOutcome::Status::Witness);
    CHECK(isomorphic(*o2.witness, pfister_form(k, els({"x", "y"}, k)), ex));

    auto p3 = qp(3);
    for (int r = 0; r <= 3; ++r) {
        auto w = pr_status(p3, r, {}, ex);
        REQUIRE(w.status == SearchOutcome::Status::Witness);
        CHECK(w.witness->dim() == (std::size_t{1} << r));
        CHECK(is_quasi_pfister(*w.witness, ex));
        CHECK(pr_member(*w.witness, p3, ex));
    }
    auto o3 = pr_status(form({"1", "x"}, k), 0, {}, ex);
    CHECK(o3.status == SearchOutcome::Status::Witness);
}

TEST_CASE("witnesses satisfy the dimension identity") {
    std::mt19937_64 rng(33);
    FieldTower k({"x", "y", "z", "w"});
    auto ex = th::exact();
    for (int it = 0; it < 25; ++it) {
        auto f = random_anis(rng, k, 4, 2 + rng() % 4);
        if (f.dim() < 2) continue;
        for (int r = 1; r <= 3; ++r) {
            auto o = pr_status(f, r, {2, 64}, ex);
            if (o.status != SearchOutcome::Status::Witness) continue;
            auto t = tensor(*o.witness, f);
            std::size_t a = t.dim() - isotropy_index(t, ex);
            CHECK(a == (y_value(f.dim(), r) + 1) << r);
        }
    }
}

TEST_CASE("P_r is stable under a rational extension") {
    std::mt19937_64 rng(34);
    FieldTower k({"x", "y", "z"});
    auto ex = th::exact();
    int compared = 0;
    for (int it = 0; it < 20; ++it) {
        auto f = random_anis(rng, k, 3, 2 + rng() % 4);
        if (f.dim() < 2) continue;
        auto fl = f.embed(k.extend_rational(1));
        for (int r = 1; r <= 2; ++r) {
            auto a = pr_status(f, r, {2, 64}, ex);
            auto b = pr_status(fl, r, {2, 64}, ex);
            if (a.status == SearchOutcome::Status::Unknown || b.status == SearchOutcome::Status::Unknown) continue;
            CHECK(a.status == b.status);
            ++compared;
        }
    }
    CHECK(compared > 10);
}

TEST_CASE("Delta and c") {
    auto ex = th::exact();
    auto g5 = delta(generic(5), {}, ex);
    CHECK(g5.lndeg == 4);
    CHECK(g5.izh == 4);
    CHECK(g5.members == std::set<int>{0, 3});
    CHECK(g5.non_members == std::set<int>{1, 2});
    CHECK(g5.unknown.empty());
    CHECK(g5.c.to_string() == "3");
    bool via_lndeg = false;
    for (const auto& s : g5.reasons) via_lndeg |= s.find("LndegTooLarge") != std::string::npos;
    CHECK(via_lndeg);

    auto g6 = delta(generic(6), {}, ex);
    CHECK(g6.members == std::set<int>{0, 4});
    CHECK(g6.c.to_string() == "4");

    FieldTower k({"x", "y", "z"});
    auto d2 = delta(form({"1", "x"}, k), {}, ex);
    CHECK(d2.members == std::set<int>{0});
    CHECK(d2.c.to_string() == "3/4");
    auto d3 = delta(form({"1", "x", "y"}, k), {}, ex);
    CHECK(d3.members == std::set<int>{0, 1});
    CHECK(d3.c.to_string() == "3/2");

    // neighbours of 3-fold forms: Delta = {0, 1, 2}, c = 2^n - 2^(n-2) = 3
    for (std::size_t dim = 5; dim <= 8; ++dim) {
        auto p = qp(3);
        QuasilinearForm nb(p.tower(), std::vector<FieldElement>(p.entries().begin(), p.entries().begin() + dim));
        auto d = delta(nb, {}, ex);
        CHECK(d.members == std::set<int>{0, 1, 2});
        CHECK(d.unknown.empty());
        CHECK(d.c.to_string() == "3");
    }
}

TEST_CASE("Delta structural facts on random forms") {
    std::mt19937_64 rng(35);
    FieldTower k({"x", "y", "z", "w"});
    auto ex = th::exact();
    for (int it = 0; it < 20; ++it) {
        auto f = random_mono_anis(rng, k, 4, 3 + rng() % 4);
        if (f.dim() < 2) continue;
        auto st = splitting_tower(f, -1, ex);
        CHECK(st.complete);
        for (std::size_t j = 0; j < st.forms.size(); ++j)
            CHECK(lndeg(st.forms[j], ex) == lndeg(f, ex) - static_cast<int>(j));
        auto d = delta(f, {2, 64}, ex, &st);
        int L = d.lndeg;
        int n = dim_exponent(f.dim());
        CHECK(d.members.count(0));
        CHECK(d.members.count(L - 1));
        for (int r : d.members) {
            CHECK(r < L);
            CHECK_FALSE((r >= n + 1 && r <= L - 2));
            if (r <= L - 2 && st.indices.size() >= 2) {
                CHECK(L >= r + 1);
                CHECK(L <= r + 1 + static_cast<int>(y_value(d.izh, r)));
                CHECK((d.izh - st.indices[1]) % (std::size_t{1} << r) == 0);
            }
        }
        if (!d.c.is_interval() && L >= 3) CHECK(d.c.lo.num < static_cast<long>(d.izh));
    }
}

TEST_CASE("strong neighbours") {
    auto ex = th::exact();
    FieldTower k({"x", "y"});
    auto f = form({"1", "x", "y"}, k);
    auto pxy = pfister_form(k, els({"x", "y"}, k));
    CHECK(strong_neighbour_check(f, pxy, ex));
    CHECK(strong_neighbour_check(f, form({"1"}, k), ex));
    auto g5 = generic(5);
    CHECK_FALSE(strong_neighbour_check(g5, pfister_form(g5.tower(), {g5[0] * g5[1]}), ex));

    std::mt19937_64 rng(36);
    FieldTower k3({"x", "y", "z"});
    int hits = 0;
    for (int it = 0; it < 30; ++it) {
        auto phi = random_anis(rng, k3, 3, 2 + rng() % 3);
        if (phi.dim() < 2) continue;
        auto nf = norm_form(phi, ex);
        if (nf.lndeg < 1) continue;
        auto pi = pfister_form(k3, {nf.two_basis[0]});
        if (!strong_neighbour_check(phi, pi, ex)) continue;
        ++hits;
        CHECK(i0_over(phi, pi, ex) > 0);
        CHECK(subform_leq(pi, nf.form(), ex));
    }
    CHECK(hits > 0);
}

TEST_CASE("descent over a rational extension") {
    auto ex = th::exact();
    FieldTower k({"x", "y", "X"});
    auto r = descend_over_rational(form({"x", "y*X^2 + x"}, k), 2, ex);
    REQUIRE(r.at_zero.size() == 2);
    CHECK(r.at_zero[0] == el("x", k));
    CHECK(r.at_zero[1] == el("y", k));
    CHECK(r.rounds == 1);
    CHECK(isomorphic(QuasilinearForm(k, r.at_square), form({"x", "y*X^2 + x"}, k), ex));

    auto c = descend_over_rational(form({"x", "y"}, k), 2, ex);
    CHECK(c.rounds == 0);
    CHECK(c.at_zero[1] == el("y", k));

    try {
        descend_over_rational(form({"1", "X^2"}, k), 2, ex);
        FAIL("expected NotAnisotropic");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::NotAnisotropic);
    }
    try {
        descend_over_rational(form({"1", "X"}, k), 2, ex);
        FAIL("expected NotDefinedOverSquares");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::NotDefinedOverSquares);
    }
}

TEST_CASE("descent on random square-only forms") {
    std::mt19937_64 rng(37);
    FieldTower k({"x", "y", "X"});
    auto ex = th::exact();
    int ran = 0;
    for (int it = 0; it < 80 && ran < 15; ++it) {
        std::vector<FieldElement> es;
        std::size_t dim = 2 + rng() % 3;
        for (std::size_t i = 0; i < dim; ++i) {
            auto a = th::random_poly_elem(rng, k, 2, 1 + rng() % 2, 1);
            auto b = th::random_poly_elem(rng, k, 2, 1 + rng() % 2, 1);
            es.push_back(a + b * el("X^2", k));
        }
        QuasilinearForm s(k, es);
        if (!is_anisotropic(s, ex)) continue;
        auto r = descend_over_rational(s, 2, ex);
        CHECK(isotropy_index(QuasilinearForm(k, r.at_zero), ex) == 0);
        CHECK(isomorphic(QuasilinearForm(k, r.at_square), s, ex));
        ++ran;
    }
    CHECK(ran >= 10);
}

TEST_CASE("divisibility equivalences") {
    std::mt19937_64 rng(38);
    FieldTower k({"x", "y", "z"});
    auto ex = th::exact();
    int ran = 0;
    for (int it = 0; it < 60 && ran < 20; ++it) {
        auto g = th::random_elem(rng, k, 3);
        auto pi = pfister_form(k, {g});
        if (!is_anisotropic(pi, ex)) continue;
        auto base = random_anis(rng, k, 3, 1 + rng() % 3);
        auto phi = anisotropic_part(tensor(pi, base), ex);
        REQUIRE(divides(pi, phi, ex));
        CHECK(isomorphic(anisotropic_part(tensor(pi, phi), ex), phi, ex));
        CHECK(2 * i0_over(phi, pi, ex) == phi.dim());
        ++ran;
    }
    CHECK(ran == 20);
}

TEST_CASE("norm degree drops over F(psi) when phi becomes isotropic") {
    std::mt19937_64 rng(39);
    FieldTower k({"x", "y", "z"});
    auto ex = th::exact();
    int ran = 0;
    for (int it = 0; it < 60 && ran < 10; ++it) {
        auto phi = random_anis(rng, k, 3, 3 + rng() % 3);
        auto psi = random_anis(rng, k, 3, 2);
        if (phi.dim() < 2 || psi.dim() < 2) continue;
        auto ext = quadric_function_field(k, psi, ex);
        if (i0_over(phi, ext, ex) == 0) continue;
        CHECK(lndeg(anis_over(phi, ext, ex), ex) == lndeg(phi, ex) - 1);
        ++ran;
    }
    CHECK(ran >= 5);
}
