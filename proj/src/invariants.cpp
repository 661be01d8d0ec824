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

#include "qlq/invariants.hpp"

#include <algorithm>

#include "qlq/errors.hpp"

namespace qlq {

int dim_exponent(std::size_t d) {
    if (d == 0) throw Error(ErrorKind::ParameterOutOfRange, "dimension 0");
    int s = -1;
    while ((std::size_t{1} << (s + 1)) < d) ++s;
    return s;
}

std::size_t y_value(std::size_t n, int r) { return n == 0 ? 0 : (n - 1) >> r; }

// ---------------------------------------------------------------- norm form

std::vector<FieldElement> two_basis_of(const std::vector<FieldElement>& gens, const RankMode& mode) {
    std::vector<FieldElement> basis, products;
    for (const auto& g : gens) {
        if (g.is_zero()) continue;
        if (products.empty()) products.push_back(FieldElement::one(g.tower()));
        if (membership_in_square_span(g, products, mode)) continue;
        basis.push_back(g);
        std::size_t half = products.size();
        for (std::size_t i = 0; i < half; ++i) products.push_back(products[i] * g);
    }
    return basis;
}

QuasilinearForm NormFormResult::form() const { return pfister_form(tower, two_basis); }

NormFormResult norm_form(const QuasilinearForm& f, const RankMode& mode) {
    auto first = std::find_if(f.entries().begin(), f.entries().end(), [](const FieldElement& a) { return !a.is_zero(); });
    if (first == f.entries().end()) throw Error(ErrorKind::PreconditionFailed, "norm form of the zero form");
    std::vector<FieldElement> gens;
    for (auto it = f.entries().begin(); it != f.entries().end(); ++it)
        if (it != first && !it->is_zero()) gens.push_back(*first * *it);
    NormFormResult r;
    r.tower = f.tower();
    r.two_basis = two_basis_of(gens, mode);
    r.lndeg = static_cast<int>(r.two_basis.size());
    r.ndeg = std::size_t{1} << r.lndeg;
    return r;
}

int lndeg(const QuasilinearForm& f, const RankMode& mode) { return norm_form(f, mode).lndeg; }

QuasilinearForm sim_form(const QuasilinearForm& f, const RankMode& mode) {
    std::vector<std::vector<FieldElement>> spans;
    for (const auto& a : f.entries()) {
        if (a.is_zero()) continue;
        FieldElement ai = a.inv();
        std::vector<FieldElement> s;
        for (const auto& b : f.entries()) s.push_back(ai * b);
        spans.push_back(std::move(s));
    }
    if (spans.empty()) throw Error(ErrorKind::PreconditionFailed, "similarity factors of the zero form");
    auto g = square_span_intersection(spans, mode);
    return pfister_form(f.tower(), two_basis_of(g, mode));
}

namespace {

/* does c * D(f) stay inside D(f) */
bool is_similarity_factor(const FieldElement& c, const QuasilinearForm& f, std::size_t base_dim, const RankMode& mode) {
    std::vector<FieldElement> all = f.entries();
    for (const auto& a : f.entries()) all.push_back(c * a);
    return span_dim_over_squares(all, mode) == base_dim;
}

}  // namespace

bool divides(const QuasilinearForm& pi, const QuasilinearForm& f, const RankMode& mode) {
    std::size_t base = f.dim() - isotropy_index(f, mode);
    for (const auto& c : norm_form(pi, mode).two_basis)
        if (!is_similarity_factor(c.embed(common_tower(c.tower(), f.tower())), f, base, mode)) return false;
    return true;
}

bool is_quasi_pfister(const QuasilinearForm& f, const RankMode& mode) {
    std::vector<FieldElement> all = f.entries();
    for (std::size_t i = 0; i < f.dim(); ++i)
        for (std::size_t j = i; j < f.dim(); ++j) all.push_back(f[i] * f[j]);
    return span_dim_over_squares(all, mode) == f.dim() - isotropy_index(f, mode);
}

bool is_qp_neighbour(const QuasilinearForm& f, const RankMode& mode) {
    if (f.dim() < 2) throw Error(ErrorKind::PreconditionFailed, "neighbour test needs dim >= 2");
    return lndeg(f, mode) == dim_exponent(f.dim()) + 1;
}

// ---------------------------------------------------------------- splitting tower

SplittingTower splitting_tower(const QuasilinearForm& f, int max_steps, const RankMode& mode) {
    SplittingTower st;
    st.fields.push_back(f.tower());
    st.forms.push_back(f);
    int steps = 0;
    while (st.forms.back().dim() >= 2 && (max_steps < 0 || steps < max_steps)) {
        const QuasilinearForm& cur = st.forms.back();
        try {
            auto ext = quadric_function_field(st.fields.back(), cur, mode);
            auto next = anisotropic_part(cur.embed(ext.result), mode);
            st.indices.push_back(cur.dim() - next.dim());
            st.fields.push_back(ext.result);
            st.forms.push_back(next);
        } catch (const Error& e) {
            if (e.kind() != ErrorKind::DepthGuardExceeded) throw;
            st.stopped = e.what();
            break;
        }
        ++steps;
    }
    st.complete = st.forms.back().dim() == 1;
    if (!st.complete && st.stopped.empty()) st.stopped = "step limit";
    if (st.forms.size() > 1) {
        st.izh = st.forms[1].dim();
        st.i1 = st.indices[0];
    } else if (f.dim() == 1) {
        st.izh = 1;
    }
    return st;
}

// ---------------------------------------------------------------- P_r

const char* to_string(Certificate c) {
    switch (c) {
        case Certificate::None: return "none";
        case Certificate::LndegTooLarge: return "LndegTooLarge";
        case Certificate::DivisibilityObstruction: return "DivisibilityObstruction";
        case Certificate::CaseAnalysis: return "CaseAnalysis";
    }
    return "?";
}

bool pr_member(const QuasilinearForm& pi, const QuasilinearForm& f, const RankMode& mode) {
    std::size_t p = pi.dim();
    if (p & (p - 1)) throw Error(ErrorKind::PreconditionFailed, "not a quasi-Pfister dimension");
    auto t = tensor(pi, f);
    return t.dim() - isotropy_index(t, mode) < f.dim() + p;
}

namespace {

SearchOutcome witness(QuasilinearForm pi, std::string note) {
    SearchOutcome o;
    o.status = SearchOutcome::Status::Witness;
    o.witness = std::move(pi);
    o.note = std::move(note);
    return o;
}

SearchOutcome empty(Certificate c, std::string note) {
    SearchOutcome o;
    o.status = SearchOutcome::Status::Empty;
    o.certificate = c;
    o.note = std::move(note);
    return o;
}

/* next r-subset of {0..n-1} in lexicographic order */
bool next_combination(std::vector<std::size_t>& idx, std::size_t n) {
    std::size_t r = idx.size();
    for (std::size_t i = r; i-- > 0;) {
        if (idx[i] < n - r + i) {
            ++idx[i];
            for (std::size_t j = i + 1; j < r; ++j) idx[j] = idx[j - 1] + 1;
            return true;
        }
    }
    return false;
}

}  // namespace

SearchOutcome pr_status(const QuasilinearForm& f, int r, const Budget& budget, const RankMode& mode, FormFacts facts) {
    if (r < 0) throw Error(ErrorKind::ParameterOutOfRange, "negative foldness");
    const FieldTower& tw = f.tower();
    if (r == 0) return witness(QuasilinearForm(tw, {FieldElement::one(tw)}), "P_0 is always {<1>}");

    const std::size_t d = f.dim();
    const int n = dim_exponent(d);
    auto nf = norm_form(f, mode);
    const int L = facts.lndeg.value_or(nf.lndeg);

    if (r == L) return witness(nf.form(), "the norm form itself");
    if (r > L) {
        // any anisotropic r-fold form containing the norm form; try tower generators
        std::vector<FieldElement> gens = nf.two_basis;
        for (int i = 0; i < tw.m(); ++i) gens.push_back(FieldElement::var(tw, i));
        for (int i = 0; i < tw.t(); ++i) gens.push_back(FieldElement::sqrt_gen(tw, i));
        auto basis = two_basis_of(gens, mode);
        if (static_cast<int>(basis.size()) >= r) {
            basis.resize(r);
            return witness(pfister_form(tw, basis), "norm form extended by tower generators");
        }
        SearchOutcome o;
        o.note = "no r-fold extension of the norm form among the tower generators";
        return o;
    }
    if (r >= n + 1) return empty(Certificate::CaseAnalysis, "n+1 <= r < lndeg");
    if (2 * L > static_cast<int>(d) + 1) return empty(Certificate::LndegTooLarge, "lndeg > (dim+1)/2");
    if (r == n) {
        if (L == n + 1) {
            auto b = nf.two_basis;
            b.resize(n);
            return witness(pfister_form(tw, b), "n-fold subform of the norm form of a neighbour");
        }
        return empty(Certificate::CaseAnalysis, "r = n and not a quasi-Pfister neighbour");
    }

    // necessary conditions for P_r nonempty, 0 < r < lndeg
    const std::size_t step = std::size_t{1} << r;
    if (L > r + static_cast<int>(y_value(d, r)))
        return empty(Certificate::DivisibilityObstruction, "lndeg outside [r, r + y_r]");
    if (facts.tower && facts.tower->forms.size() > 1) {
        const auto& st = *facts.tower;
        if (st.izh % step) return empty(Certificate::DivisibilityObstruction, "Izh not divisible by 2^r");
        for (int j = 2; j <= L - r && j <= static_cast<int>(st.indices.size()); ++j)
            if (st.indices[j - 1] % step)
                return empty(Certificate::DivisibilityObstruction, "i_" + std::to_string(j) + " not divisible by 2^r");
    }

    // bounded search over products of the norm generators
    std::vector<FieldElement> pool;
    auto first = std::find_if(f.entries().begin(), f.entries().end(), [](const FieldElement& a) { return !a.is_zero(); });
    for (auto it = f.entries().begin(); it != f.entries().end(); ++it)
        if (it != first && !it->is_zero()) pool.push_back(*first * *it);
    std::size_t base = pool.size();
    if (budget.depth >= 2)
        for (std::size_t i = 0; i < base; ++i)
            for (std::size_t j = i + 1; j < base; ++j) pool.push_back(pool[i] * pool[j]);

    SearchOutcome o;
    if (pool.size() >= static_cast<std::size_t>(r)) {
        std::vector<std::size_t> idx(r);
        for (int i = 0; i < r; ++i) idx[i] = i;
        do {
            if (o.tried >= budget.candidates) break;
            ++o.tried;
            std::vector<FieldElement> gens;
            for (auto i : idx) gens.push_back(pool[i]);
            if (static_cast<int>(two_basis_of(gens, mode).size()) != r) continue;
            auto pi = pfister_form(tw, gens);
            if (pr_member(pi, f, mode)) {
                auto w = witness(pi, "search");
                w.tried = o.tried;
                return w;
            }
        } while (next_combination(idx, pool.size()));
    }
    o.note = "search budget spent without a witness";
    return o;
}

// ---------------------------------------------------------------- Delta and c

std::string Fraction::to_string() const {
    return den == 1 ? std::to_string(num) : std::to_string(num) + "/" + std::to_string(den);
}

std::string CValue::to_string() const {
    return is_interval() ? "[" + lo.to_string() + ", " + hi.to_string() + "]" : lo.to_string();
}

CValue c_invariant(const DeltaReport& d) {
    CValue c;
    if (d.lndeg == 1) {
        c.lo = c.hi = {3, 4};
        return c;
    }
    if (d.lndeg == 2) {
        c.lo = c.hi = {3, 2};
        return c;
    }
    if (d.lndeg < 1) throw Error(ErrorKind::PreconditionFailed, "c needs dim >= 2");
    int top = d.lndeg - 3;
    int m_cert = 0, m_poss = 0;
    for (int r : d.members)
        if (r <= top) m_cert = std::max(m_cert, r);
    m_poss = m_cert;
    for (int r : d.unknown)
        if (r <= top) m_poss = std::max(m_poss, r);
    auto c_of = [&](int m) { return static_cast<long>(((d.izh - 1) >> m) << m); };
    c.hi = {c_of(m_cert), 1};
    c.lo = {c_of(m_poss), 1};
    return c;
}

DeltaReport delta(const QuasilinearForm& f, const Budget& budget, const RankMode& mode, const SplittingTower* given) {
    if (f.dim() < 2) throw Error(ErrorKind::PreconditionFailed, "Delta needs dim >= 2");
    DeltaReport rep;
    const std::size_t d = f.dim();
    const int n = dim_exponent(d);
    const int L = lndeg(f, mode);
    rep.lndeg = L;

    SplittingTower own;
    const SplittingTower* st = given;
    if (!st || st->forms.size() < 2) {
        own = splitting_tower(f, 1, mode);
        st = &own;
    }
    if (st->forms.size() < 2) throw Error(ErrorKind::DepthGuardExceeded, "could not build F(phi): " + st->stopped);
    rep.izh = st->izh;
    const std::size_t izh = rep.izh;

    rep.members.insert(0);
    rep.members.insert(L - 1);
    auto out = [&](int r, const std::string& why) {
        rep.non_members.insert(r);
        rep.reasons.push_back(std::to_string(r) + " out: " + why);
    };
    auto in = [&](int r, const std::string& why) {
        rep.members.insert(r);
        rep.reasons.push_back(std::to_string(r) + " in: " + why);
    };

    // phi_1 facts, shifted from the tower of phi
    FormFacts facts1;
    facts1.lndeg = L - 1;
    if (st->forms.size() > 2) {
        SplittingTower tail;
        tail.fields.assign(st->fields.begin() + 1, st->fields.end());
        tail.forms.assign(st->forms.begin() + 1, st->forms.end());
        tail.indices.assign(st->indices.begin() + 1, st->indices.end());
        tail.izh = tail.forms[1].dim();
        tail.i1 = tail.indices[0];
        tail.complete = st->complete;
        facts1.tower = tail;
    }

    for (int r = 1; r <= L - 2; ++r) {
        if (2 * L >= static_cast<int>(d) + 4) {
            out(r, "lndeg >= dim/2 + 2");
            continue;
        }
        if (r >= n + 1) {
            out(r, "r in [n+1, lndeg-2]");
            continue;
        }
        if (2 * (L - 1) > static_cast<int>(izh) + 1) {
            out(r, "LndegTooLarge on phi_1: lndeg(phi_1) > (Izh+1)/2");
            continue;
        }
        if (r == n) {
            bool yes = (L == n + 1) || (L == n + 2 && izh > (std::size_t{1} << n));
            if (yes)
                in(r, "r = n with a neighbour or lndeg = n+2 and Izh > 2^n");
            else
                out(r, "r = n without a neighbour and without lndeg = n+2, Izh > 2^n");
            continue;
        }
        std::size_t step = std::size_t{1} << r;
        if (L > r + 1 + static_cast<int>(y_value(izh, r))) {
            out(r, "lndeg outside [r+1, r+1+y_r(Izh)]");
            continue;
        }
        if (st->indices.size() >= 2 && (izh - st->indices[1]) % step) {
            out(r, "Izh - i_2 not divisible by 2^r");
            continue;
        }
        bool blocked = false;
        for (int j = 3; j <= L - r - 1 && j <= static_cast<int>(st->indices.size()); ++j)
            if (st->indices[j - 1] % step) {
                out(r, "i_" + std::to_string(j) + " not divisible by 2^r");
                blocked = true;
                break;
            }
        if (blocked) continue;

        auto o = pr_status(st->forms[1], r, budget, mode, facts1);
        switch (o.status) {
            case SearchOutcome::Status::Witness:
                in(r, "witness " + o.witness->to_string());
                break;
            case SearchOutcome::Status::Empty:
                out(r, std::string(to_string(o.certificate)) + ": " + o.note);
                break;
            case SearchOutcome::Status::Unknown:
                rep.unknown.insert(r);
                rep.reasons.push_back(std::to_string(r) + " unknown: " + o.note);
                break;
        }
    }
    rep.c = c_invariant(rep);
    return rep;
}

CValue c_invariant(const QuasilinearForm& f, const Budget& budget, const RankMode& mode) {
    return delta(f, budget, mode).c;
}

bool strong_neighbour_check(const QuasilinearForm& f, const QuasilinearForm& pi, const RankMode& mode) {
    auto t = tensor(pi, f);
    std::size_t a = t.dim() - isotropy_index(t, mode);
    return a < std::min(f.dim() + pi.dim(), 2 * f.dim());
}

// ---------------------------------------------------------------- descent

namespace {

bool x_free(const Poly2& p, int var) { return p.degree_in(var) == 0; }

bool even_in(const Poly2& p, int var) {
    for (const auto& t : p.terms())
        if (t.exp(var) % 2) return false;
    return true;
}

}  // namespace

DescentResult descend_over_rational(const QuasilinearForm& sigma, int var, const RankMode& mode) {
    const FieldTower& tw = sigma.tower();
    if (tw.t() != 0) throw Error(ErrorKind::PreconditionFailed, "descent works over purely rational towers");
    if (var < 0 || var >= tw.m()) throw Error(ErrorKind::ParameterOutOfRange, "no such variable");
    if (!is_anisotropic(sigma, mode)) throw Error(ErrorKind::NotAnisotropic, sigma.to_string() + " is isotropic");
    const int arity = tw.m();

    // clear denominators: a * den^2 = num * den is a polynomial with even X-degrees
    std::vector<RatFunc2> fs;
    for (const auto& e : sigma.entries()) {
        RatFunc2 r = e.rational_part();
        Poly2 p = r.num() * r.den();
        if (!even_in(p, var))
            throw Error(ErrorKind::NotDefinedOverSquares, e.to_string() + " is not a function of the square of the variable");
        fs.emplace_back(p);
    }
    std::vector<std::optional<RatFunc2>> at0(var + 1);
    at0[var] = RatFunc2();
    auto x_degree = [&](const RatFunc2& r) { return r.num().degree_in(var); };

    DescentResult res;
    for (;;) {
        std::stable_sort(fs.begin(), fs.end(), [&](const RatFunc2& a, const RatFunc2& b) { return x_degree(a) < x_degree(b); });
        std::vector<FieldElement> zero_vals;
        for (const auto& r : fs) zero_vals.emplace_back(tw, substitute(r, at0, arity));
        auto indep = independent_subset(zero_vals, mode);
        if (indep.size() == fs.size()) {
            for (const auto& r : fs) res.at_square.emplace_back(tw, r);
            res.at_zero = zero_vals;
            return res;
        }
        // first r whose value at 0 depends on the earlier ones
        std::size_t r = 0;
        while (r < indep.size() && indep[r] == r) ++r;
        std::vector<FieldElement> earlier(zero_vals.begin(), zero_vals.begin() + r);
        RatFunc2 g = fs[r];
        if (!zero_vals[r].is_zero()) {
            auto coeffs = solve_in_square_span(zero_vals[r], earlier);
            if (!coeffs) throw Error(ErrorKind::PreconditionFailed, "descent: dependency not solvable");
            for (std::size_t i = 0; i < r; ++i) {
                RatFunc2 c = (*coeffs)[i].rational_part();
                if (!x_free(c.num(), var) || !x_free(c.den(), var))
                    throw Error(ErrorKind::PreconditionFailed, "descent: coefficient depends on the variable");
                g += c * fs[i];
            }
        }
        if (g.is_zero()) throw Error(ErrorKind::NotAnisotropic, "descent produced a zero entry");
        // g(0) = 0 and g is even, so X^2 divides the numerator
        Monomial x2;
        x2.set_exp(var, 2);
        while (substitute(g, at0, arity).is_zero()) g = RatFunc2(g.num().div_monomial(x2), g.den());
        fs[r] = g;
        ++res.rounds;
    }
}

}  // namespace qlq
