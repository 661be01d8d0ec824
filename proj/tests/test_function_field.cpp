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

#include "helpers.hpp"
#include "oracles.hpp"
#include "qlq/errors.hpp"
#include "qlq/function_field.hpp"

using namespace qlq;
using th::el;
using th::els;

namespace {

QuasilinearForm form(std::initializer_list<const char*> xs, const FieldTower& tw) {
    return QuasilinearForm(tw, els(xs, tw));
}

QuasilinearForm random_anis(std::mt19937_64& rng, const FieldTower& tw, int nvars, std::size_t dim) {
    std::vector<FieldElement> es;
    for (std::size_t i = 0; i < dim; ++i) es.push_back(th::random_elem(rng, tw, nvars));
    return anisotropic_part(QuasilinearForm(tw, es), th::exact());
}

}  // namespace

TEST_CASE("quadric function field shape") {
    FieldTower k({"x"});
    auto ext = quadric_function_field(k, form({"1", "x"}, k), th::exact());
    CHECK(ext.rational.var_names() == std::vector<std::string>{"x", "T1_1"});
    CHECK(ext.generic_value == el("x*T1_1^2", ext.rational));
    CHECK(ext.result.t() == 1);
    CHECK(ext.result.quadric_count() == 1);
    CHECK(FieldElement::sqrt_gen(ext.result, 0).square() == ext.generic_value.embed(ext.result));

    FieldTower kxy({"x", "y"});
    auto e2 = quadric_function_field(kxy, form({"x", "y"}, kxy), th::exact());
    CHECK(e2.psi[0] == FieldElement::one(kxy));
    CHECK(e2.generic_value == el("y/x*T1_1^2", e2.rational));

    // a second quadric over the first gets the next counter
    auto e3 = quadric_function_field(ext.result, form({"1", "T1_1"}, ext.result), th::exact());
    CHECK(e3.rational.var_names().back() == "T2_1");

    try {
        quadric_function_field(k, form({"1", "1"}, k), th::exact());
        FAIL("expected SplitForm");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::SplitForm);
    }
}

TEST_CASE("isotropy over quadric function fields") {
    FieldTower k({"x", "y", "z"});
    auto ex = th::exact();
    auto pi = form({"1", "y", "x", "x*y"}, k);
    CHECK(i0_over(pi, form({"1", "x"}, k), ex) == 2);
    CHECK(i0_over(form({"1", "x", "y", "x*y", "z"}, k), form({"1", "z"}, k), ex) == 1);
    CHECK(d_over(pi, form({"1", "x"}, k), ex) == 0);
    CHECK(d_over(form({"1", "x", "y"}, k), form({"1", "x"}, k), ex) == 1);

    CHECK(anis_over(form({"1", "x"}, k), form({"1", "x"}, k), ex).dim() == 1);
    auto a = anis_over(pi, pi, ex);
    CHECK(a.dim() == 2);
}

TEST_CASE("tensor oracle on the five-entry example") {
    // i0 over the rational extension, checked against naive elimination
    FieldTower k({"x", "y", "z"});
    auto phi = form({"1", "x", "y", "x*y", "z"}, k);
    auto ext = quadric_function_field(k, form({"1", "z"}, k), th::exact());
    auto t = tensor(QuasilinearForm(ext.rational, {FieldElement::one(ext.rational), ext.generic_value}),
                    phi.embed(ext.rational));
    CHECK(t.dim() == 10);
    CHECK(t.dim() - oracle::span_dim(t.entries()) == 2);
}

TEST_CASE("psi becomes isotropic over its own function field") {
    std::mt19937_64 rng(21);
    FieldTower k({"x", "y", "z"});
    for (int it = 0; it < 15; ++it) {
        auto psi = random_anis(rng, k, 3, 2 + rng() % 3);
        if (psi.dim() < 2) continue;
        auto i = i0_over(psi, psi, th::exact());
        CHECK(i >= 1);
        CHECK(2 * i <= psi.dim());
    }
}

TEST_CASE("anis_over dimension matches i0_over") {
    std::mt19937_64 rng(22);
    FieldTower k({"x", "y", "z"});
    auto ex = th::exact();
    int ran = 0;
    for (int it = 0; it < 40 && ran < 20; ++it) {
        auto phi = random_anis(rng, k, 3, 1 + rng() % 4);
        auto psi = random_anis(rng, k, 3, 2 + rng() % 2);
        if (psi.dim() < 2) continue;
        auto ext = quadric_function_field(k, psi, ex);
        auto i = i0_over(phi, ext, ex);
        CHECK(anis_over(phi, ext, ex).dim() == phi.dim() - i);
        CHECK(2 * i <= phi.dim());
        CHECK(d_over(phi, psi, ex) >= 0);
        ++ran;
    }
    CHECK(ran == 20);
}

TEST_CASE("explicit root versus the binary Pfister multiple") {
    std::mt19937_64 rng(23);
    FieldTower k({"x", "y", "z"});
    auto ex = th::exact();
    int ran = 0;
    for (int it = 0; it < 80 && ran < 25; ++it) {
        auto phi = random_anis(rng, k, 3, 1 + rng() % 4);
        auto a = th::random_elem(rng, k, 3);
        if (is_square(a, ex)) continue;
        FieldTower l = k.extend_sqrt(a, ex);
        auto direct = isotropy_index(phi.embed(l), ex);
        auto via = isotropy_index(tensor(QuasilinearForm(k, {FieldElement::one(k), a}), phi), ex);
        CHECK(2 * direct == via);
        ++ran;
    }
    CHECK(ran == 25);
}

TEST_CASE("separation") {
    std::mt19937_64 rng(24);
    FieldTower k({"x", "y", "z", "w"});
    auto ex = th::exact();
    int ran = 0;
    for (int it = 0; it < 60 && ran < 20; ++it) {
        auto psi = random_anis(rng, k, 4, 3 + rng() % 2);
        if (psi.dim() < 3) continue;
        // 2 < dim psi <= 4, so any anisotropic phi of dim <= 2 stays anisotropic
        auto phi = random_anis(rng, k, 4, 1 + rng() % 2);
        CHECK(i0_over(phi, psi, ex) == 0);
        ++ran;
    }
    CHECK(ran >= 15);
}

TEST_CASE("complement keeps d over a subform's function field") {
    FieldTower k({"x", "y"});
    auto ex = th::exact();
    auto psi = form({"1", "x"}, k);
    auto eta = pfister_form(k, els({"x", "y"}, k));
    auto c = complement(psi, eta, ex);
    auto nu = form({"1", "y"}, k);
    CHECK(d_over(c, nu, ex) == d_over(psi, nu, ex));
}
