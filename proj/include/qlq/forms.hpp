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

#ifndef QLQ_FORMS_HPP
#define QLQ_FORMS_HPP

#include <optional>
#include <string>
#include <vector>

#include "qlq/field_tower.hpp"
#include "qlq/linalg2.hpp"

namespace qlq {

/* diagonal quasilinear form <a_1, ..., a_n> over a tower; zero entries allowed */
class QuasilinearForm {
   public:
    QuasilinearForm(FieldTower tower, std::vector<FieldElement> entries);
    explicit QuasilinearForm(std::vector<FieldElement> entries);

    const FieldTower& tower() const noexcept { return tower_; }
    const std::vector<FieldElement>& entries() const noexcept { return entries_; }
    std::size_t dim() const noexcept { return entries_.size(); }
    const FieldElement& operator[](std::size_t i) const { return entries_[i]; }

    /* same entries, moved up to a descendant tower */
    QuasilinearForm embed(const FieldTower& tw) const;

    std::string to_string() const;

   private:
    friend std::size_t isotropy_index(const QuasilinearForm&, const RankMode&);
    FieldTower tower_;
    std::vector<FieldElement> entries_;
    // write-once caches, one per rank kind
    mutable std::optional<std::size_t> i0_exact_, i0_mc_;
};

struct WittProfile {
    std::size_t i0 = 0;
    std::size_t anis_dim = 0;
    long d = 0;
};

std::size_t isotropy_index(const QuasilinearForm& f, const RankMode& mode = default_rank_mode());
WittProfile witt_profile(const QuasilinearForm& f, const RankMode& mode = default_rank_mode());
bool is_anisotropic(const QuasilinearForm& f, const RankMode& mode = default_rank_mode());

/* greedy left-to-right; zero entries drop out */
QuasilinearForm anisotropic_part(const QuasilinearForm& f, const RankMode& mode = default_rank_mode());

QuasilinearForm orth_sum(const QuasilinearForm& a, const QuasilinearForm& b);
/* entry order: outer index runs over a */
QuasilinearForm tensor(const QuasilinearForm& a, const QuasilinearForm& b);
QuasilinearForm scale(const FieldElement& a, const QuasilinearForm& f);

/* <<a_1, ..., a_r>>; <1> when r = 0 */
QuasilinearForm pfister_form(const FieldTower& tw, const std::vector<FieldElement>& gens);

bool represents(const QuasilinearForm& f, const FieldElement& a, const RankMode& mode = default_rank_mode());
/* D(a) inside D(b) */
bool subform_leq(const QuasilinearForm& a, const QuasilinearForm& b, const RankMode& mode = default_rank_mode());
bool isomorphic(const QuasilinearForm& a, const QuasilinearForm& b, const RankMode& mode = default_rank_mode());

/* psi-hat with psi perp psi-hat ~ eta, drawn from eta's entries in order */
QuasilinearForm complement(const QuasilinearForm& psi, const QuasilinearForm& eta,
                           const RankMode& mode = default_rank_mode());

/* substitute the rational variables of a purely rational tower; images[i] is
   over target, nullopt keeps variable i (target must then have it at index i) */
QuasilinearForm specialize_form(const QuasilinearForm& f, const FieldTower& target,
                                const std::vector<std::optional<RatFunc2>>& images);

}  // namespace qlq

#endif
