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

#include "qlq/forms.hpp"

#include "qlq/errors.hpp"

namespace qlq {

namespace {

FieldTower tower_of(const std::vector<FieldElement>& es) {
    if (es.empty()) throw Error(ErrorKind::PreconditionFailed, "a form needs at least one entry");
    FieldTower tw = es.front().tower();
    for (const auto& e : es) tw = common_tower(tw, e.tower());
    return tw;
}

}  // namespace

QuasilinearForm::QuasilinearForm(FieldTower tower, std::vector<FieldElement> entries)
    : tower_(std::move(tower)), entries_(std::move(entries)) {
    if (entries_.empty()) throw Error(ErrorKind::PreconditionFailed, "a form needs at least one entry");
    for (auto& e : entries_) {
        if (!(e.tower() == tower_)) {
            if (!e.tower().is_ancestor_of(tower_))
                throw Error(ErrorKind::TowerMismatch, "entry does not live below the form's tower");
            e = e.embed(tower_);
        }
    }
}

QuasilinearForm::QuasilinearForm(std::vector<FieldElement> entries)
    : QuasilinearForm(tower_of(entries), std::move(entries)) {}

QuasilinearForm QuasilinearForm::embed(const FieldTower& tw) const {
    if (tw == tower_) return *this;
    return QuasilinearForm(tw, entries_);
}

std::string QuasilinearForm::to_string() const {
    std::string s = "<";
    for (std::size_t i = 0; i < entries_.size(); ++i) {
        if (i) s += ", ";
        s += entries_[i].to_string();
    }
    return s + ">";
}

std::size_t isotropy_index(const QuasilinearForm& f, const RankMode& mode) {
    auto& slot = mode.is_exact() ? f.i0_exact_ : f.i0_mc_;
    if (!slot) slot = f.dim() - span_dim_over_squares(f.entries(), mode);
    return *slot;
}

WittProfile witt_profile(const QuasilinearForm& f, const RankMode& mode) {
    WittProfile w;
    w.i0 = isotropy_index(f, mode);
    w.anis_dim = f.dim() - w.i0;
    w.d = static_cast<long>(f.dim()) - 2 * static_cast<long>(w.i0);
    return w;
}

bool is_anisotropic(const QuasilinearForm& f, const RankMode& mode) { return isotropy_index(f, mode) == 0; }

QuasilinearForm anisotropic_part(const QuasilinearForm& f, const RankMode& mode) {
    std::vector<FieldElement> kept;
    for (std::size_t i : independent_subset(f.entries(), mode)) kept.push_back(f[i]);
    // the all-zero form has no anisotropic entries; keep a single zero
    if (kept.empty()) kept.push_back(FieldElement::zero(f.tower()));
    return QuasilinearForm(f.tower(), std::move(kept));
}

QuasilinearForm orth_sum(const QuasilinearForm& a, const QuasilinearForm& b) {
    FieldTower tw = common_tower(a.tower(), b.tower());
    std::vector<FieldElement> es = a.entries();
    es.insert(es.end(), b.entries().begin(), b.entries().end());
    return QuasilinearForm(tw, std::move(es));
}

QuasilinearForm tensor(const QuasilinearForm& a, const QuasilinearForm& b) {
    FieldTower tw = common_tower(a.tower(), b.tower());
    std::vector<FieldElement> es;
    es.reserve(a.dim() * b.dim());
    for (const auto& x : a.entries())
        for (const auto& y : b.entries()) es.push_back(x * y);
    return QuasilinearForm(tw, std::move(es));
}

QuasilinearForm scale(const FieldElement& a, const QuasilinearForm& f) {
    if (a.is_zero()) throw Error(ErrorKind::ZeroScalar, "cannot scale a form by zero");
    FieldTower tw = common_tower(a.tower(), f.tower());
    std::vector<FieldElement> es;
    for (const auto& x : f.entries()) es.push_back(a * x);
    return QuasilinearForm(tw, std::move(es));
}

QuasilinearForm pfister_form(const FieldTower& tw, const std::vector<FieldElement>& gens) {
    QuasilinearForm acc(tw, {FieldElement::one(tw)});
    for (const auto& g : gens) acc = tensor(acc, QuasilinearForm(tw, {FieldElement::one(tw), g}));
    return acc;
}

bool represents(const QuasilinearForm& f, const FieldElement& a, const RankMode& mode) {
    if (a.is_zero()) return true;
    return membership_in_square_span(a, f.entries(), mode);
}

bool subform_leq(const QuasilinearForm& a, const QuasilinearForm& b, const RankMode& mode) {
    common_tower(a.tower(), b.tower());
    std::vector<FieldElement> all = b.entries();
    all.insert(all.end(), a.entries().begin(), a.entries().end());
    return span_dim_over_squares(all, mode) == b.dim() - isotropy_index(b, mode);
}

bool isomorphic(const QuasilinearForm& a, const QuasilinearForm& b, const RankMode& mode) {
    if (a.dim() != b.dim()) return false;
    if (isotropy_index(a, mode) != isotropy_index(b, mode)) return false;
    return subform_leq(a, b, mode);
}

QuasilinearForm complement(const QuasilinearForm& psi, const QuasilinearForm& eta, const RankMode& mode) {
    if (!subform_leq(psi, eta, mode)) throw Error(ErrorKind::NotASubform, "psi is not a subform of eta");
    // greedy over psi ++ eta: whatever eta contributes beyond psi is the complement
    std::vector<FieldElement> all = psi.entries();
    all.insert(all.end(), eta.entries().begin(), eta.entries().end());
    std::vector<FieldElement> extra;
    for (std::size_t i : independent_subset(all, mode))
        if (i >= psi.dim()) extra.push_back(all[i]);
    if (extra.empty()) throw Error(ErrorKind::PreconditionFailed, "psi already fills eta; the complement is empty");
    return QuasilinearForm(common_tower(psi.tower(), eta.tower()), std::move(extra));
}

QuasilinearForm specialize_form(const QuasilinearForm& f, const FieldTower& target,
                                const std::vector<std::optional<RatFunc2>>& images) {
    if (f.tower().t() != 0 || target.t() != 0)
        throw Error(ErrorKind::PreconditionFailed, "specialization needs purely rational towers");
    std::vector<FieldElement> es;
    for (const auto& e : f.entries())
        es.emplace_back(target, substitute(e.rational_part(), images, target.m()));
    return QuasilinearForm(target, std::move(es));
}

}  // namespace qlq
