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

#ifndef QLQ_FUNCTION_FIELD_HPP
#define QLQ_FUNCTION_FIELD_HPP

#include "qlq/forms.hpp"

namespace qlq {

/* K(T_1..T_{n-1})(s) with s^2 = sum_{i>=2} (a_i/a_1) T_{i-1}^2 */
struct QuadricExtension {
    FieldTower base;
    QuasilinearForm psi;       // scaled so the first entry is 1
    FieldTower rational;       // base + the T variables, no root yet
    FieldTower result;         // rational + s
    FieldElement generic_value;  // over rational
};

QuadricExtension quadric_function_field(const FieldTower& k, const QuasilinearForm& psi,
                                        const RankMode& mode = default_rank_mode());

/* i0 over F(psi) without adjoining the root: half of i0(<<psi'(T)>> (x) phi) */
std::size_t i0_over(const QuasilinearForm& phi, const QuadricExtension& ext, const RankMode& mode = default_rank_mode());
std::size_t i0_over(const QuasilinearForm& phi, const QuasilinearForm& psi, const RankMode& mode = default_rank_mode());

QuasilinearForm anis_over(const QuasilinearForm& phi, const QuadricExtension& ext,
                          const RankMode& mode = default_rank_mode());
QuasilinearForm anis_over(const QuasilinearForm& phi, const QuasilinearForm& psi,
                          const RankMode& mode = default_rank_mode());

long d_over(const QuasilinearForm& phi, const QuasilinearForm& psi, const RankMode& mode = default_rank_mode());

}  // namespace qlq

#endif
