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

#ifndef QLQ_TESTS_HELPERS_HPP
#define QLQ_TESTS_HELPERS_HPP

#include <random>
#include <string>
#include <vector>

#include "qlq/expr.hpp"
#include "qlq/field_tower.hpp"
#include "qlq/linalg2.hpp"

namespace th {

inline qlq::FieldElement el(const std::string& s, const qlq::FieldTower& tw) { return qlq::parse_element(s, tw); }

inline std::vector<qlq::FieldElement> els(std::initializer_list<const char*> xs, const qlq::FieldTower& tw) {
    std::vector<qlq::FieldElement> out;
    for (const char* s : xs) out.push_back(qlq::parse_element(s, tw));
    return out;
}

/* random polynomial element with small support in the first nvars variables */
inline qlq::FieldElement random_poly_elem(std::mt19937_64& rng, const qlq::FieldTower& tw, int nvars, int terms,
                                          int maxexp) {
    std::vector<qlq::Monomial> ts;
    for (int j = 0; j < terms; ++j) {
        qlq::Monomial m;
        for (int v = 0; v < nvars; ++v) {
            m.set_exp(v, static_cast<unsigned>(rng() % (maxexp + 1)));
        }
        ts.push_back(m);
    }
    return qlq::FieldElement(tw, qlq::RatFunc2(qlq::Poly2(tw.m(), ts)));
}

/* random nonzero monomial-ish element, possibly with a unit denominator factor */
inline qlq::FieldElement random_elem(std::mt19937_64& rng, const qlq::FieldTower& tw, int nvars) {
    for (;;) {
        auto a = random_poly_elem(rng, tw, nvars, 1 + rng() % 3, 2);
        if (rng() % 4 == 0) {
            auto d = random_poly_elem(rng, tw, nvars, 1 + rng() % 2, 1);
            if (!d.is_zero()) a = a * d.inv();
        }
        if (!a.is_zero()) return a;
    }
}

inline qlq::RankMode exact() { return qlq::RankMode::exact(); }
inline qlq::RankMode mc(uint64_t seed = 1) { return qlq::RankMode::monte_carlo(seed); }

}  // namespace th

#endif
