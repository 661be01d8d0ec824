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

#include "qlq/constructions.hpp"

#include <algorithm>
#include <set>

#include "qlq/errors.hpp"
#include "qlq/expr.hpp"

namespace qlq {

namespace {

long pow2(int e) { return 1L << e; }

QuasilinearForm head(const QuasilinearForm& f, std::size_t n) {
    std::vector<FieldElement> es(f.entries().begin(), f.entries().begin() + static_cast<long>(n));
    return QuasilinearForm(f.tower(), es);
}

QuasilinearForm diag(const FieldTower& tw, const std::vector<FieldElement>& es) { return QuasilinearForm(tw, es); }

void check(bool ok, const std::string& what) {
    if (!ok) throw Error(ErrorKind::PreconditionFailed, "construction check failed: " + what);
}

std::string tower_names(const FieldTower& tw) {
    std::string s;
    for (const auto& n : tw.var_names()) s += (s.empty() ? "" : ",") + n;
    return s;
}

}  // namespace

long Recipe::param(const std::string& name, long fallback) const {
    for (const auto& [k, v] : params)
        if (k == name) return v;
    return fallback;
}

bool Measured::matches(const Expected& e) const {
    return izh == e.izh && k == e.k && dim_q == e.dim_q && qp_neighbour == e.qp_neighbour;
}

Measured measure_instance(const ConstructedInstance& inst, const RankMode& mode) {
    Measured m;
    m.dim_q = inst.q.dim();
    m.s = dim_exponent(inst.p.dim());
    SplittingTower st = splitting_tower(inst.p, 1, mode);
    m.izh = st.izh;
    m.k = static_cast<long>(inst.q.dim()) - 2 * static_cast<long>(i0_over(inst.q, inst.p, mode));
    m.lndeg_p = lndeg(inst.p, mode);
    m.qp_neighbour = m.lndeg_p == m.s + 1;
    return m;
}

FieldTower adjoin_fresh(const FieldTower& tw, const std::string& prefix, int count, std::vector<FieldElement>* out) {
    auto taken = tw.names();
    std::set<std::string> used(taken.begin(), taken.end());
    std::vector<std::string> names;
    for (int n = 1; static_cast<int>(names.size()) < count; ++n) {
        std::string name = prefix + std::to_string(n);
        if (!used.count(name)) names.push_back(name);
    }
    FieldTower ext = count > 0 ? tw.extend_rational_named(names) : tw;
    if (out) {
        out->clear();
        for (const auto& n : names) out->push_back(FieldElement::var(ext, *ext.var_index(n)));
    }
    return ext;
}

ConstructedInstance build_cor52(const QuasilinearForm& tau0, const QuasilinearForm& phi0,
                                const QuasilinearForm& sigma0, const RankMode& mode) {
    FieldTower E = common_tower(common_tower(tau0.tower(), phi0.tower()), sigma0.tower());
    QuasilinearForm tau = tau0.embed(E), phi = phi0.embed(E), sigma = sigma0.embed(E);
    if (!is_anisotropic(tau, mode) || !is_anisotropic(phi, mode) || !is_anisotropic(sigma, mode))
        throw Error(ErrorKind::PreconditionFailed, "tau, phi and sigma must be anisotropic");
    QuasilinearForm prod = anisotropic_part(tensor(tau, phi), mode);
    if (!subform_leq(prod, sigma, mode))
        throw Error(ErrorKind::PreconditionFailed, "anis(tau x phi) is not a subform of sigma");

    std::vector<FieldElement> X;
    FieldTower F = adjoin_fresh(E, "X", 1, &X);
    ConstructedInstance inst{F, orth_sum(diag(F, {X[0]}), phi.embed(F)),
                             orth_sum(sigma.embed(F), scale(X[0], tau.embed(F))), {}, {}};
    inst.expected.izh = phi.dim();
    inst.expected.k = static_cast<long>(sigma.dim()) - static_cast<long>(tau.dim());
    inst.expected.dim_q = sigma.dim() + tau.dim();
    // lndeg(p) = lndeg(phi) + 1 since X is transcendental over E
    inst.expected.qp_neighbour = lndeg(phi, mode) + 1 == dim_exponent(inst.p.dim()) + 1;
    inst.recipe.op = "cor52";
    if (E.t() == 0) inst.recipe.forms = {{"tower", tower_names(E)},
                                         {"tau", tau.to_string()},
                                         {"phi", phi.to_string()},
                                         {"sigma", sigma.to_string()}};
    return inst;
}

ConstructedInstance realize_from_pair(const QuasilinearForm& tau, const QuasilinearForm& phi, long k,
                                      const RankMode& mode) {
    FieldTower E = common_tower(tau.tower(), phi.tower());
    QuasilinearForm prod = anisotropic_part(tensor(tau.embed(E), phi.embed(E)), mode);
    long j = k + static_cast<long>(tau.dim()) - static_cast<long>(prod.dim());
    if (j < 0) throw Error(ErrorKind::PreconditionFailed, "dim anis(tau x phi) exceeds k + dim tau");
    std::vector<FieldElement> Z;
    FieldTower E2 = adjoin_fresh(E, "Z", static_cast<int>(j), &Z);
    QuasilinearForm sigma = prod.embed(E2);
    if (j > 0) sigma = orth_sum(diag(E2, Z), sigma);
    return build_cor52(tau, phi, sigma, mode);
}

/* ---- first tensor family ---- */

namespace {

struct Triple {
    QuasilinearForm pi, tau, phi;
};

struct FamilyCtx {
    FieldTower tw;
    const RankMode& mode;
    int extensions = 0;
    std::vector<std::string> log;
};

int ceil_log2(long v) {
    int t = 0;
    while (pow2(t) < v) ++t;
    return t;
}

Triple embed(const Triple& x, const FieldTower& tw) { return {x.pi.embed(tw), x.tau.embed(tw), x.phi.embed(tw)}; }

/* tau, phi inside <<W1..Wt>>, both divisible by pi = <<W1..Wr>> */
Triple family_claim(FamilyCtx& c, int r, long u, long v, int t) {
    std::vector<FieldElement> W;
    c.tw = adjoin_fresh(c.tw, "W", t, &W);
    QuasilinearForm pi = pfister_form(c.tw, std::vector<FieldElement>(W.begin(), W.begin() + r));
    QuasilinearForm rho = pfister_form(c.tw, std::vector<FieldElement>(W.begin() + r, W.end()));
    return {pi, tensor(head(rho, u), pi), tensor(head(rho, v), pi)};
}

/* replace the field by the function field of the norm form of f until lndeg(f) <= target */
void lower_lndeg(FamilyCtx& c, Triple& x, QuasilinearForm Triple::*which, int target) {
    for (;;) {
        NormFormResult nf = norm_form(x.*which, c.mode);
        if (nf.lndeg <= target) return;
        QuadricExtension ext = quadric_function_field(c.tw, nf.form(), c.mode);
        c.tw = ext.result;
        x = embed(x, c.tw);
        ++c.extensions;
        c.log.push_back("function field of a " + std::to_string(nf.ndeg) + "-dimensional norm form, lndeg " +
                        std::to_string(nf.lndeg) + " -> " + std::to_string(target));
    }
}

Triple family_rec(FamilyCtx& c, int r, long u, long v) {
    const long u2 = u * pow2(r), v2 = v * pow2(r);
    const int t = ceil_log2(u2);
    if (v2 <= pow2(t)) return family_claim(c, r, u, v, t);

    const long x = (v2 - 1) >> t;
    const long m = v2 - x * pow2(t);
    // pi, tau (dim u 2^r), psi (dim m) in the phi slot
    Triple base = [&] {
        if (m >= u2) return family_claim(c, r, u, m >> r, t);
        Triple in = family_rec(c, r, m >> r, u);
        return Triple{in.pi, in.phi, in.tau};
    }();
    base = embed(base, c.tw);
    lower_lndeg(c, base, &Triple::tau, t);

    std::vector<FieldElement> V;
    c.tw = adjoin_fresh(c.tw, "V", static_cast<int>(x), &V);
    base = embed(base, c.tw);
    QuasilinearForm ntau = norm_form(base.tau, c.mode).form();
    Triple out{base.pi, base.tau, orth_sum(tensor(diag(c.tw, V), ntau), base.phi)};
    int n = 0;
    while (pow2(n + 1) <= v2) ++n;
    lower_lndeg(c, out, &Triple::phi, n + 1);
    return out;
}

}  // namespace

TensorFamily build_tensor_family(int r, int u, int v, const RankMode& mode, DepthGuard guard) {
    if (r < 0 || u < 1 || v < u || r > 12)
        throw Error(ErrorKind::ParameterOutOfRange, "need r >= 0 and 1 <= u <= v");
    FamilyCtx c{FieldTower(std::vector<std::string>{}, guard), mode, 0, {}};
    Triple x = family_rec(c, r, u, v);
    x = embed(x, c.tw);

    const long u2 = u * pow2(r), v2 = v * pow2(r);
    check(static_cast<long>(x.tau.dim()) == u2 && static_cast<long>(x.phi.dim()) == v2, "dimensions");
    check(x.pi.dim() == static_cast<std::size_t>(pow2(r)) && is_quasi_pfister(x.pi, mode), "pi is r-fold");
    if (r > 0) check(divides(x.pi, x.tau, mode) && divides(x.pi, x.phi, mode), "pi divides tau and phi");
    check(is_anisotropic(x.tau, mode) && is_anisotropic(x.phi, mode), "anisotropy");
    const long prod = static_cast<long>(anisotropic_part(tensor(x.tau, x.phi), mode).dim());
    check(prod <= (u + v - 1) * pow2(r), "dim anis(tau x phi) <= (u+v-1) 2^r");
    int n = 0;
    while (pow2(n + 1) <= v2) ++n;
    const int L = lndeg(x.phi, mode);
    const bool drop = v2 == pow2(n) && 4 * u2 > pow2(n);
    check(L == (drop ? n : n + 1), "lndeg(phi)");
    return {c.tw, x.pi, x.tau, x.phi, c.extensions, c.log};
}

/* ---- second tensor family ---- */

TensorFamily2 build_tensor_family2(int branch, long i, long a, int s, long d) {
    if (s < 0 || s > 10 || a < 1 || i < 1) throw Error(ErrorKind::ParameterOutOfRange, "need s >= 0, a >= 1, i >= 1");
    if (branch == 1) {
        if (i > a * pow2(s)) throw Error(ErrorKind::ParameterOutOfRange, "branch 1 needs i <= a 2^s");
    } else if (branch == 2) {
        if (i > a * pow2(s + 1)) throw Error(ErrorKind::ParameterOutOfRange, "branch 2 needs i <= a 2^(s+1)");
        if (d < pow2(s) || d >= pow2(s + 1)) throw Error(ErrorKind::ParameterOutOfRange, "need 2^s <= d < 2^(s+1)");
    } else {
        throw Error(ErrorKind::ParameterOutOfRange, "branch must be 1 or 2");
    }
    std::vector<FieldElement> Y, X;
    FieldTower tw = adjoin_fresh(FieldTower(std::vector<std::string>{}), "Y", s, &Y);
    // branch 2 only needs as many X as the blocks tau actually uses
    const long a_used = branch == 1 ? a : std::max(1L, (i + pow2(s + 1) - 1) / pow2(s + 1));
    tw = adjoin_fresh(tw, "X", static_cast<int>(a_used), &X);
    for (auto& y : Y) y = y.embed(tw);
    QuasilinearForm pi = pfister_form(tw, Y);

    TensorFamily2 out{tw, pi, pi, 0};
    if (branch == 1) {
        out.tau = head(tensor(diag(tw, X), pi), static_cast<std::size_t>(i));
        out.phi = pi;
        out.bound = a * pow2(s);
        return out;
    }
    const FieldElement& xa = X.back();
    QuasilinearForm sigma = orth_sum(pi, scale(xa, pi));
    const long j = i - (a_used - 1) * pow2(s + 1);
    QuasilinearForm psi = head(sigma, static_cast<std::size_t>(j));  // inside pi when j <= 2^s
    out.tau = a_used > 1 ? orth_sum(tensor(diag(tw, std::vector<FieldElement>(X.begin(), X.end() - 1)), sigma), psi)
                         : psi;
    std::vector<FieldElement> pe(pi.entries().begin() + 1, pi.entries().end());  // pi', pi = <1> + pi'
    std::vector<FieldElement> ph{xa};
    ph.insert(ph.end(), pe.begin(), pe.end());
    for (long e = 0; e < d - pow2(s); ++e) ph.push_back(xa * pe[static_cast<std::size_t>(e)]);
    out.phi = diag(tw, ph);
    out.bound = a * pow2(s + 1);
    if (d == pow2(s) && s >= 2) out.bound = std::min(out.bound, pow2(s) + i);
    return out;
}

/* ---- realizability ---- */

ConstructedInstance realize(const RealizabilityRequest& req, const RankMode& mode) {
    const int s = req.s;
    const long d = req.d, k = req.k, a = req.a, eps = req.eps;
    auto bad = [](const std::string& w) { throw Error(ErrorKind::ParameterOutOfRange, w); };
    if (s < 0 || s > 10) bad("s out of range");
    if (d < pow2(s) || d >= pow2(s + 1)) bad("need 2^s <= d < 2^(s+1)");
    if (k < 0) bad("k must be non-negative");
    if (req.branch != 1 && ((eps - k) % 2 + 2) % 2 != 0) bad("eps and k must have the same parity");

    std::optional<ConstructedInstance> built;
    long want_dim_q = 0;
    switch (req.branch) {
        case 1: {
            if (k < d) bad("branch 1 needs k >= d");
            if (req.dim_q < k || (req.dim_q - k) % 2) bad("dim q must lie in k + 2N");
            const long i = (req.dim_q - k) / 2;
            want_dim_q = req.dim_q;
            if (i == 0) {
                // q generic of dim k stays anisotropic over the purely transcendental F(p)
                std::vector<FieldElement> Y, Z, X;
                FieldTower tw = adjoin_fresh(FieldTower(std::vector<std::string>{}), "Y", static_cast<int>(d - 1), &Y);
                tw = adjoin_fresh(tw, "Z", static_cast<int>(k), &Z);
                tw = adjoin_fresh(tw, "X", 1, &X);
                std::vector<FieldElement> pe{X[0], FieldElement::one(tw)};
                for (auto& y : Y) pe.push_back(y.embed(tw));
                for (auto& z : Z) z = z.embed(tw);
                built = ConstructedInstance{tw, diag(tw, pe), diag(tw, Z), {}, {}};
                // p = <X, 1, Y...> is generic with lndeg d, a neighbour only when that is s + 1
                built->expected = {static_cast<std::size_t>(d), k, static_cast<std::size_t>(k), d == s + 1};
            } else {
                TensorFamily f = build_tensor_family(0, static_cast<int>(std::min(i, d)),
                                                     static_cast<int>(std::max(i, d)), mode);
                built = i <= d ? realize_from_pair(f.tau, f.phi, k, mode) : realize_from_pair(f.phi, f.tau, k, mode);
                built->recipe.log = f.log;
            }
            break;
        }
        case 2: {
            if (!(k < d && d == pow2(s))) bad("branch 2 needs k < d = 2^s");
            if (a < 1 || eps < -k || eps > k) bad("branch 2 needs a >= 1 and |eps| <= k");
            const long i = a * pow2(s) + (eps - k) / 2;
            TensorFamily2 f = build_tensor_family2(1, i, a, s);
            built = realize_from_pair(f.tau, f.phi, k, mode);
            want_dim_q = a * pow2(s + 1) + eps;
            break;
        }
        case 3: {
            if (!(d > k && d > pow2(s))) bad("branch 3 needs d > max(k, 2^s)");
            if (a < 1 || eps < -k || eps > k) bad("branch 3 needs a >= 1 and |eps| <= k");
            const long i = a * pow2(s + 1) + (eps - k) / 2;
            TensorFamily2 f = build_tensor_family2(2, i, a, s, d);
            built = realize_from_pair(f.tau, f.phi, k, mode);
            want_dim_q = a * pow2(s + 2) + eps;
            break;
        }
        case 4:
        case 5: {
            if (a != 0) bad("branches 4 and 5 are built for a = 0 only");
            const int r = req.r;
            const long x = req.x;
            long lo, hi, v;
            if (req.branch == 4) {
                if (!(d == pow2(s) && s >= 2)) bad("branch 4 needs d = 2^s, s >= 2");
                if (r < 0 || r > s - 2 || x < 1 || x > pow2(s - 2 - r)) bad("branch 4 needs r <= s-2, 1 <= x <= 2^(s-2-r)");
                if (k < pow2(s) - pow2(r) || k >= pow2(s)) bad("branch 4 needs k in [2^s - 2^r, 2^s)");
                lo = (x - 1) * pow2(r + 1) + pow2(s + 1) - k;
                hi = x * pow2(r + 1) + k;
                v = pow2(s - r);
            } else {
                if (d <= pow2(s)) bad("branch 5 needs d > 2^s");
                if (r < 0 || r > s - 1) bad("branch 5 needs r <= s-1");
                const long y = static_cast<long>(y_value(static_cast<std::size_t>(d), r));
                if (x < 1 || x >= pow2(s + 1 - r) - y) bad("branch 5 needs 1 <= x < 2^(s+1-r) - y_r");
                if (k < y * pow2(r) || k >= d) bad("branch 5 needs k in [y_r 2^r, d)");
                lo = (x + y) * pow2(r + 1) - k;
                hi = x * pow2(r + 1) + k;
                v = y + 1;
            }
            if (eps < lo || eps > hi) bad("eps outside the admissible interval");
            const long i = (eps - k) / 2;
            TensorFamily f = build_tensor_family(r, static_cast<int>(x), static_cast<int>(v), mode);
            built = realize_from_pair(head(f.tau, static_cast<std::size_t>(i)), head(f.phi, static_cast<std::size_t>(d)),
                                     k, mode);
            built->recipe.log = f.log;
            want_dim_q = eps;
            break;
        }
        default: bad("branch must be 1..5");
    }
    ConstructedInstance inst = std::move(*built);
    check(static_cast<long>(inst.expected.dim_q) == want_dim_q, "dim q matches the request");
    check(inst.expected.k == k && static_cast<long>(inst.expected.izh) == d, "k and Izh match the request");
    check(dim_exponent(inst.p.dim()) == s, "2^s < dim p <= 2^(s+1)");
    inst.recipe.op = "realize";
    inst.recipe.params = {{"branch", req.branch}, {"s", s}, {"d", d},     {"k", k},    {"a", a},
                          {"eps", eps},          {"dim_q", req.dim_q}, {"r", req.r}, {"x", req.x}};
    inst.recipe.forms.clear();
    return inst;
}

/* ---- misc ---- */

QuasilinearForm form_from_text(const std::string& text, std::optional<FieldTower> tw) {
    FormExpr f = parse_form_expr(text);
    std::vector<std::string> vars = variables(f);
    FieldTower base = tw ? *tw : FieldTower(std::vector<std::string>{});
    auto have = base.names();
    std::vector<std::string> fresh;
    for (const auto& v : vars)
        if (std::find(have.begin(), have.end(), v) == have.end()) fresh.push_back(v);
    if (!fresh.empty()) base = base.extend_rational_named(fresh);
    return QuasilinearForm(base, eval_form_entries(f, base));
}

QuasilinearForm canned(const std::string& name) {
    FormExpr f = parse_form_expr(name);
    if (f.kind != FormExpr::Kind::Canned) throw Error(ErrorKind::UnknownName, "not a canned form: " + name);
    return form_from_text(name);
}

ConstructedInstance replay(const Recipe& rc, const RankMode& mode) {
    if (rc.op == "realize") {
        RealizabilityRequest req;
        req.branch = static_cast<int>(rc.param("branch"));
        req.s = static_cast<int>(rc.param("s"));
        req.d = rc.param("d");
        req.k = rc.param("k");
        req.a = rc.param("a");
        req.eps = rc.param("eps");
        req.dim_q = rc.param("dim_q");
        req.r = static_cast<int>(rc.param("r"));
        req.x = rc.param("x", 1);
        return realize(req, mode);
    }
    if (rc.op == "cor52") {
        auto get = [&](const std::string& key) -> std::string {
            for (const auto& [k, v] : rc.forms)
                if (k == key) return v;
            throw Error(ErrorKind::PreconditionFailed, "recipe lacks " + key);
        };
        std::vector<std::string> names;
        std::string all = get("tower");
        for (std::size_t pos = 0; pos < all.size();) {
            std::size_t c = all.find(',', pos);
            if (c == std::string::npos) c = all.size();
            names.push_back(all.substr(pos, c - pos));
            pos = c + 1;
        }
        FieldTower E(names);
        return build_cor52(form_from_text(get("tau"), E), form_from_text(get("phi"), E),
                           form_from_text(get("sigma"), E), mode);
    }
    throw Error(ErrorKind::UnknownName, "no replay for recipe op " + rc.op);
}

std::pair<QuasilinearForm, QuasilinearForm> random_pair(std::mt19937_64& rng, int nvars, std::size_t max_dim_p,
                                                        std::size_t max_dim_q) {
    std::vector<std::string> names;
    for (int v = 1; v <= nvars; ++v) names.push_back("x" + std::to_string(v));
    FieldTower tw(names);
    RankMode ex = RankMode::exact();
    auto mono = [&]() {
        Monomial m;
        for (int v = 0; v < nvars; ++v) m.set_exp(v, static_cast<unsigned>(rng() % 4));
        return Poly2::monomial(tw.m(), m);
    };
    auto elem = [&]() {
        Poly2 f = mono();
        if (rng() % 4 == 0) f = f + mono();
        if (f.is_zero()) f = mono();
        return FieldElement(tw, RatFunc2(f));
    };
    auto anis = [&](std::size_t lo, std::size_t hi, const std::vector<FieldElement>* from) {
        for (;;) {
            std::size_t n = lo + rng() % (hi - lo + 1);
            std::vector<FieldElement> es;
            for (std::size_t j = 0; j < n; ++j) {
                if (from && rng() % 2 == 0)
                    es.push_back(elem().square() * (*from)[rng() % from->size()]);
                else
                    es.push_back(elem());
            }
            if (from && rng() % 2 == 0) {
                // a scaled copy of a piece of p makes q over F(p) isotropic
                FieldElement c = FieldElement(tw, RatFunc2(mono()));
                for (std::size_t j = 0; j < std::min(n, from->size()); ++j) es[j] = c * (*from)[j];
            }
            QuasilinearForm f = anisotropic_part(QuasilinearForm(tw, es), ex);
            if (f.dim() >= 2 && !f.entries()[0].is_zero()) return f;
        }
    };
    QuasilinearForm p = anis(2, max_dim_p, nullptr);
    QuasilinearForm q = anis(2, max_dim_q, &p.entries());
    return {p, q};
}

}  // namespace qlq
