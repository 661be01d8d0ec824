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

#include "qlq/function_field.hpp"

#include "qlq/errors.hpp"

namespace qlq {

QuadricExtension quadric_function_field(const FieldTower& k, const QuasilinearForm& psi_in, const RankMode& mode) {
    QuasilinearForm psi = psi_in.embed(common_tower(k, psi_in.tower()));
    if (psi.dim() < 2 || psi.dim() - isotropy_index(psi, mode) < 2)
        throw Error(ErrorKind::SplitForm, "the quadric of " + psi.to_string() + " has a rational point");
    if (!is_anisotropic(psi, mode))
        throw Error(ErrorKind::NotAnisotropic, psi.to_string() + " is isotropic; pass its anisotropic part");
    QuadricExtension ext{psi.tower(), scale(psi[0].inv(), psi), psi.tower(), psi.tower(), FieldElement()};

    int count = psi.tower().quadric_count() + 1;
    std::vector<std::string> names;
    for (std::size_t j = 1; j < psi.dim(); ++j)
        names.push_back("T" + std::to_string(count) + "_" + std::to_string(j));
    ext.rational = psi.tower().extend_rational_named(names).with_quadric_count(count);

    int m0 = psi.tower().m();
    FieldElement g = FieldElement::zero(ext.rational);
    for (std::size_t j = 1; j < psi.dim(); ++j) {
        FieldElement t = FieldElement::var(ext.rational, m0 + static_cast<int>(j) - 1);
        g += ext.psi[j] * t.square();
    }
    ext.generic_value = g;
    // anisotropy of psi makes g a non-square over the rational extension
    ext.result = ext.rational.extend_sqrt_unchecked(g);
    return ext;
}

std::size_t i0_over(const QuasilinearForm& phi, const QuadricExtension& ext, const RankMode& mode) {
    QuasilinearForm pf(ext.rational, {FieldElement::one(ext.rational), ext.generic_value});
    QuasilinearForm t = tensor(pf, phi.embed(ext.rational));
    std::size_t twice = isotropy_index(t, mode);
    if (twice % 2) throw Error(ErrorKind::PreconditionFailed, "odd isotropy index on a binary Pfister multiple");
    return twice / 2;
}

std::size_t i0_over(const QuasilinearForm& phi, const QuasilinearForm& psi, const RankMode& mode) {
    return i0_over(phi, quadric_function_field(common_tower(phi.tower(), psi.tower()), psi, mode), mode);
}

QuasilinearForm anis_over(const QuasilinearForm& phi, const QuadricExtension& ext, const RankMode& mode) {
    return anisotropic_part(phi.embed(ext.result), mode);
}

QuasilinearForm anis_over(const QuasilinearForm& phi, const QuasilinearForm& psi, const RankMode& mode) {
    return anis_over(phi, quadric_function_field(common_tower(phi.tower(), psi.tower()), psi, mode), mode);
}

long d_over(const QuasilinearForm& phi, const QuasilinearForm& psi, const RankMode& mode) {
    return static_cast<long>(phi.dim()) - 2 * static_cast<long>(i0_over(phi, psi, mode));
}

}  // namespace qlq
