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

#include "qlq/theorems.hpp"

#include <algorithm>
#include <cstdlib>
#include <sstream>

#include "qlq/errors.hpp"

namespace qlq {

namespace {

long pow2(int e) { return e < 0 ? 0 : (1L << e); }

/* exists a >= a_min with d - a*P in [lo, hi], or (pm) a*P - d in [lo, hi] */
bool hits(long d, long P, long lo, long hi, long a_min, bool pm, long* a_out, long* e_out) {
    if (lo > hi) return false;
    for (long a = a_min; a * P <= d + hi; ++a) {
        long e = d - a * P;
        if (e >= lo && e <= hi) {
            *a_out = a;
            *e_out = e;
            return true;
        }
        if (pm && -e >= lo && -e <= hi) {
            *a_out = a;
            *e_out = -e;
            return true;
        }
    }
    return false;
}

bool frac_gt(const Fraction& f, long k) { return f.num > k * f.den; }  // f > k, den > 0

}  // namespace

void finish_profile(InstanceProfile& p) {
    p.s = dim_exponent(p.dim_p);
    p.u = 0;
    if (p.izh > 0)
        while (p.izh % (std::size_t{1} << (p.u + 1)) == 0) ++p.u;
}

long ResidueSet::rep(long v) const {
    long r = ((v % modulus) + modulus) % modulus;
    if (r > modulus / 2) r -= modulus;
    return r;
}

std::string format_residues(const std::vector<long>& values) {
    std::set<long> in(values.begin(), values.end());
    std::set<long> mags;
    for (long v : values) mags.insert(std::labs(v));
    std::ostringstream os;
    bool first = true;
    for (long m : mags) {
        if (!first) os << ", ";
        first = false;
        if (m != 0 && in.count(m) && in.count(-m))
            os << "±" << m;
        else
            os << (in.count(m) ? m : -m);
    }
    return os.str();
}

ResidueSet thm12_allowed(int s, long izh, long k, bool qp_neighbour) {
    if (s < 0 || s > 24 || k < 0 || izh < pow2(s) || izh >= pow2(s + 1))
        throw Error(ErrorKind::ParameterOutOfRange,
                    "need s >= 0, k >= 0 and 2^s <= izh < 2^(s+1)");
    ResidueSet out;
    out.modulus = pow2(s + 2);
    const long M = out.modulus;
    auto parity_ok = [&](long v) { return ((v - k) % 2 + 2) % 2 == 0; };

    if (k >= izh) {
        for (long v = -M / 2 + 1; v <= M / 2; ++v)
            if (parity_ok(v)) out.allowed.insert(v);
        return out;
    }

    // part (1): near a multiple of 2^(s+1)
    std::set<long> coarse;
    for (long e = -k; e <= k; e += 2) {
        coarse.insert(out.rep(e));
        coarse.insert(out.rep(e + M / 2));
    }
    if (qp_neighbour) {
        out.allowed = coarse;
        return out;
    }

    std::set<long> fine;
    for (long e = -k; e <= k; e += 2) fine.insert(out.rep(e));
    auto add_range = [&](long lo, long hi, bool pm) {
        lo = std::max(lo, 1L);
        for (long e = lo; e <= hi; ++e) {
            if (!parity_ok(e)) continue;
            fine.insert(out.rep(e));
            if (pm) fine.insert(out.rep(-e));
        }
    };
    if (izh == pow2(s)) {
        for (int r = 0; r <= s - 2; ++r) {
            if (k < pow2(s) - pow2(r)) continue;
            for (long x = 1; x <= pow2(s - 2 - r); ++x)
                add_range((x - 1) * pow2(r + 1) + pow2(s + 1) - k, x * pow2(r + 1) + k, true);
        }
    } else {
        for (int r = 0; r <= s - 1; ++r) {
            long y = static_cast<long>(y_value(izh, r));
            if (k < y * pow2(r)) continue;
            for (long x = 1; x < pow2(s + 1 - r) - y; ++x)
                add_range((x + y) * pow2(r + 1) - k, x * pow2(r + 1) + k, false);
        }
    }
    std::set_intersection(fine.begin(), fine.end(), coarse.begin(), coarse.end(),
                          std::inserter(out.allowed, out.allowed.end()));
    return out;
}

std::vector<long> thm12_additional(int s, long izh, long k) {
    ResidueSet rs = thm12_allowed(s, izh, k);
    std::set<long> band;
    for (long e = -k; e <= k; e += 2) band.insert(rs.rep(e));
    std::vector<long> out;
    for (long v : rs.allowed)
        if (!band.count(v)) out.push_back(v);
    std::sort(out.begin(), out.end(), [](long a, long b) {
        return std::labs(a) != std::labs(b) ? std::labs(a) < std::labs(b) : a < b;
    });
    return out;
}

std::vector<TableRow> residue_table(int s, long izh) {
    const long M = pow2(s + 2);
    auto full = [&](long k) {
        ResidueSet rs = thm12_allowed(s, izh, k);
        return static_cast<long>(rs.allowed.size()) == M / 2;
    };
    // smallest k from which every larger k is unrestricted
    long k_full = izh;
    while (k_full > 0 && full(k_full - 1)) --k_full;
    long k_first = 0;
    while (k_first < k_full && thm12_additional(s, izh, k_first).empty()) ++k_first;

    std::vector<TableRow> rows;
    if (k_first > 0) rows.push_back({"< " + std::to_string(k_first), "None", 0, k_first - 1, {}});
    for (long k = k_first; k < k_full; ++k) {
        auto add = thm12_additional(s, izh, k);
        rows.push_back({std::to_string(k), add.empty() ? "None" : format_residues(add), k, k, add});
    }
    rows.push_back({"≥ " + std::to_string(k_full), "Any additional value ≡ k (mod 2)", k_full, -1, {}});
    return rows;
}

std::string residue_table_text(int s, long izh) {
    std::ostringstream os;
    os << "Izh(p) = " << izh << ", s = " << s << ": residues of dim q mod " << pow2(s + 2)
       << " outside [-k, k] (p not a quasi-Pfister neighbour)\n";
    os << "k\tadditional values\n";
    for (const auto& row : residue_table(s, izh)) os << row.k << "\t" << row.values << "\n";
    return os.str();
}

const char* to_string(Verdict v) {
    switch (v) {
        case Verdict::Pass: return "pass";
        case Verdict::NotApplicable: return "not_applicable";
        case Verdict::Inconclusive: return "inconclusive";
        case Verdict::Violation: return "violation";
    }
    return "?";
}

bool near_multiple(long dim_q, int e, long k, long a_min) {
    long a, eps;
    return hits(dim_q, pow2(e), -k, k, a_min, false, &a, &eps);
}

bool check_separation(const InstanceProfile& p) {
    return !(static_cast<long>(p.dim_q) <= pow2(p.s) && p.i0_qfp > 0);
}

Thm12Result check_thm12(const InstanceProfile& p) {
    Thm12Result res;
    if (p.i0_qfp == 0) {
        res.note = "q stays anisotropic over F(p)";
        return res;
    }
    if (p.k >= static_cast<long>(p.izh)) {
        res.note = "k >= Izh, unrestricted";
        return res;
    }
    const long d = static_cast<long>(p.dim_q), k = p.k;
    const int s = p.s;
    long a, e;
    if (!hits(d, pow2(s + 1), -k, k, 1, false, &a, &e)) {
        res.verdict = Verdict::Violation;
        res.note = "dim q not within k of a positive multiple of 2^(s+1)";
        return res;
    }
    res.verdict = Verdict::Pass;
    if (p.qp_neighbour) return res;
    const long M = pow2(s + 2);
    if (hits(d, M, -k, k, 1, false, &a, &e)) return res;
    const long izh = static_cast<long>(p.izh);
    if (izh == pow2(s)) {
        for (int r = 0; r <= s - 2; ++r) {
            if (k < pow2(s) - pow2(r)) continue;
            for (long x = 1; x <= pow2(s - 2 - r); ++x)
                if (hits(d, M, std::max(1L, (x - 1) * pow2(r + 1) + pow2(s + 1) - k), x * pow2(r + 1) + k, 0,
                         true, &a, &e))
                    return res;
        }
    } else {
        for (int r = 0; r <= s - 1; ++r) {
            long y = static_cast<long>(y_value(p.izh, r));
            if (k < y * pow2(r)) continue;
            for (long x = 1; x < pow2(s + 1 - r) - y; ++x)
                if (hits(d, M, std::max(1L, (x + y) * pow2(r + 1) - k), x * pow2(r + 1) + k, 0, false, &a, &e))
                    return res;
        }
    }
    res.verdict = Verdict::Violation;
    res.note = "dim q outside every admissible family mod 2^(s+2)";
    return res;
}

Verdict Thm41Result::verdict() const {
    switch (kind) {
        case Kind::Case1: return Verdict::Pass;
        case Kind::Case2: return uses_unknown ? Verdict::Inconclusive : Verdict::Pass;
        case Kind::Violation: return Verdict::Violation;
        case Kind::NotApplicable: return Verdict::NotApplicable;
    }
    return Verdict::NotApplicable;
}

std::string Thm41Result::to_string() const {
    std::ostringstream os;
    switch (kind) {
        case Kind::Case1: os << "case1 a=" << a << " eps=" << eps; break;
        case Kind::Case2:
            os << "case2 r=" << r << " r'=" << r2 << " x=" << x << " a=" << a << " eps=" << eps;
            if (uses_unknown) os << " (undecided Delta member)";
            break;
        case Kind::Violation: os << "violation"; break;
        case Kind::NotApplicable: os << "not applicable"; break;
    }
    return os.str();
}

Thm41Result check_thm41(const InstanceProfile& p) {
    Thm41Result res;
    if (p.i0_qfp == 0 || p.k >= static_cast<long>(p.izh)) return res;
    const long d = static_cast<long>(p.dim_q), k = p.k;
    const int L = p.lndeg_p;
    if (hits(d, pow2(L), -k, k, 1, false, &res.a, &res.eps)) {
        res.kind = Thm41Result::Kind::Case1;
        return res;
    }
    res.kind = Thm41Result::Kind::Violation;
    if (p.qp_neighbour) return res;

    const int n = dim_exponent(p.izh);
    std::set<int> adm = p.delta.members;
    adm.insert(p.delta.unknown.begin(), p.delta.unknown.end());
    std::optional<Thm41Result> shaky;
    for (int r : adm) {
        if (r < 0 || r > n - 1) continue;
        const long y = static_cast<long>(y_value(p.izh, r));
        if (k < y * pow2(r)) continue;
        for (int r2 : adm) {
            if (r2 < r || r2 > n) continue;
            const long y2 = static_cast<long>(y_value(p.izh, r2));
            const long xmax = std::min(pow2(n - 1 - r), (y2 + 1) * pow2(r2 - r) - y);
            for (long x = std::max<long>(1, r2 - r + 1); x <= xmax; ++x) {
                if (L == n + 2) {
                    if (x * pow2(r + 1) > pow2(n + 1) - y * pow2(r)) continue;
                } else {
                    // weaker form of the c(p_1) bound, scaled by 4
                    if (x * pow2(r + 2) > y * pow2(r + 2) - (pow2(n + 1) + pow2(n))) continue;
                }
                long a, e;
                if (!hits(d, pow2(L), std::max(1L, (x + y) * pow2(r + 1) - k), x * pow2(r + 1) + k, 0, true, &a, &e))
                    continue;
                Thm41Result w;
                w.kind = Thm41Result::Kind::Case2;
                w.r = r;
                w.r2 = r2;
                w.x = x;
                w.a = a;
                w.eps = e;
                w.uses_unknown = p.delta.unknown.count(r) || p.delta.unknown.count(r2);
                if (!w.uses_unknown) return w;
                if (!shaky) shaky = w;
            }
        }
    }
    return shaky ? *shaky : res;
}

Cor13Result check_cor13(const InstanceProfile& p) {
    Cor13Result res;
    const long two_u = pow2(p.u);
    res.i1_bound = static_cast<long>(p.i1) <= two_u;
    if (p.i0_qfp > 0) {
        const long d = static_cast<long>(p.dim_q), izh = static_cast<long>(p.izh);
        res.dim_q_gt_izh = d > izh;
        res.i0_bound = static_cast<long>(p.i0_qfp) <= std::max(d - izh - two_u, two_u);
    }
    return res;
}

Verdict Cor42Result::overall() const {
    Verdict all[] = {cor42, cor43, cor44};
    Verdict out = Verdict::Pass;
    for (Verdict v : all) {
        if (v == Verdict::Violation) return v;
        if (v == Verdict::Inconclusive) out = v;
    }
    return out;
}

Cor42Result check_cor42_44(const InstanceProfile& p) {
    Cor42Result res;
    if (p.i0_qfp == 0) return res;
    const long k = p.k;
    const bool concl = near_multiple(static_cast<long>(p.dim_q), p.lndeg_p, k, 1);
    auto judge = [&](bool hyp) { return hyp ? (concl ? Verdict::Pass : Verdict::Violation) : Verdict::NotApplicable; };

    if (frac_gt(p.c.lo, k))
        res.cor42 = judge(true);
    else if (frac_gt(p.c.hi, k))
        res.cor42 = concl ? Verdict::Pass : Verdict::Inconclusive;  // hypothesis hangs on an undecided r

    // bound scaled by 4 so that 2^(s-2) stays integral for small s
    const long S = pow2(p.s), izh2 = 2 * static_cast<long>(p.izh);
    long b4;
    if (izh2 > 3 * S)
        b4 = 6 * S;
    else if (izh2 > 2 * S)
        b4 = 4 * S;
    else
        b4 = 3 * S;
    res.cor43 = judge(4 * k < b4);

    const long dp = static_cast<long>(p.dim_p);
    res.cor44 = judge(2L * p.lndeg_p >= dp + 4 && k <= dp - 3);
    return res;
}

InstanceProfile compute_profile(const QuasilinearForm& p0, const QuasilinearForm& q0, const VerifyOptions& opt) {
    FieldTower tw = common_tower(p0.tower(), q0.tower());
    QuasilinearForm p = p0.embed(tw), q = q0.embed(tw);
    if (p.dim() < 2) throw Error(ErrorKind::PreconditionFailed, "p needs dimension >= 2");
    if (!is_anisotropic(p, opt.mode)) throw Error(ErrorKind::NotAnisotropic, "p is isotropic");
    if (!is_anisotropic(q, opt.mode)) throw Error(ErrorKind::NotAnisotropic, "q is isotropic");

    InstanceProfile prof;
    prof.dim_p = p.dim();
    prof.dim_q = q.dim();
    SplittingTower st = splitting_tower(p, 1, opt.mode);
    prof.izh = st.izh;
    prof.i1 = st.i1;
    prof.delta = delta(p, opt.budget, opt.mode, &st);
    prof.c = prof.delta.c;
    prof.lndeg_p = prof.delta.lndeg;
    prof.qp_neighbour = is_qp_neighbour(p, opt.mode);
    prof.i0_qfp = i0_over(q, p, opt.mode);
    prof.k = static_cast<long>(prof.dim_q) - 2 * static_cast<long>(prof.i0_qfp);
    finish_profile(prof);
    return prof;
}

VerifyReport check_profile(const InstanceProfile& prof) {
    VerifyReport rep;
    rep.profile = prof;
    rep.separation = check_separation(prof);
    rep.thm12 = check_thm12(prof);
    rep.thm41 = check_thm41(prof);
    rep.cor13 = check_cor13(prof);
    rep.cor42 = check_cor42_44(prof);
    Verdict v[] = {rep.separation ? Verdict::Pass : Verdict::Violation, rep.thm12.verdict, rep.thm41.verdict(),
                   rep.cor13.all() ? Verdict::Pass : Verdict::Violation, rep.cor42.overall()};
    rep.overall = Verdict::Pass;
    for (Verdict x : v) {
        if (x == Verdict::Violation) {
            rep.overall = x;
            break;
        }
        if (x == Verdict::Inconclusive) rep.overall = x;
    }
    return rep;
}

VerifyReport verify_instance(const QuasilinearForm& p, const QuasilinearForm& q, const VerifyOptions& opt) {
    return check_profile(compute_profile(p, q, opt));
}

}  // namespace qlq
