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

#include "qlq/linalg2.hpp"

#include <algorithm>
#include <cmath>
#include <random>

namespace qlq {

RankMode& default_rank_mode() {
    static RankMode mode;
    return mode;
}

namespace {

using Entry = std::pair<uint32_t, RatFunc2>;
using RatRow = std::vector<Entry>;
using PolyRow = std::map<uint32_t, Poly2>;

constexpr uint32_t kAug = 1u << 31;
constexpr int kMaxResamples = 8;

struct Assembled {
    std::vector<RatRow> rows;
    std::vector<std::size_t> owner;  // element (or matrix row) index of each row
    std::size_t cols = 0;
    std::size_t items = 0;
    int arity = 0;
    std::size_t block = 1;  // rows per element
};

FieldTower tower_of(const std::vector<FieldElement>& elems) {
    FieldTower tw = elems.front().tower();
    for (const auto& a : elems) tw = common_tower(tw, a.tower());
    return tw;
}

std::vector<CoordVector> rows_of(const FieldElement& a, const FieldTower& tw) {
    const auto& prods = tw.square_products();
    std::vector<CoordVector> out;
    out.reserve(prods.size());
    for (const auto& bg : prods) {
        if (a.is_zero()) {
            out.emplace_back();
            continue;
        }
        out.push_back((FieldElement(tw, bg) * a).coordinates());
    }
    return out;
}

Assembled assemble(const std::vector<FieldElement>& elems, const FieldTower& tw) {
    Assembled A;
    A.arity = tw.m();
    A.items = elems.size();
    A.block = tw.square_products().size();
    std::map<CoordLabel, uint32_t> cols;
    for (std::size_t i = 0; i < elems.size(); ++i) {
        for (auto& cv : rows_of(elems[i].embed(tw), tw)) {
            RatRow row;
            row.reserve(cv.size());
            for (auto& [label, v] : cv) {
                auto [it, fresh] = cols.emplace(label, static_cast<uint32_t>(cols.size()));
                row.emplace_back(it->second, std::move(v));
            }
            std::sort(row.begin(), row.end(), [](const Entry& x, const Entry& y) { return x.first < y.first; });
            A.rows.push_back(std::move(row));
            A.owner.push_back(i);
        }
    }
    A.cols = cols.size();
    if (A.cols > tw.guard().max_labels)
        throw Error(ErrorKind::DepthGuardExceeded,
                    std::to_string(A.cols) + " occupied coordinate labels exceed the limit of " +
                        std::to_string(tw.guard().max_labels));
    return A;
}

Assembled assemble_matrix(const RatMatrix& m) {
    Assembled A;
    A.items = m.size();
    for (std::size_t i = 0; i < m.size(); ++i) {
        RatRow row;
        for (std::size_t j = 0; j < m[i].size(); ++j) {
            A.arity = std::max(A.arity, m[i][j].arity());
            if (!m[i][j].is_zero()) row.emplace_back(static_cast<uint32_t>(j), m[i][j]);
        }
        A.cols = std::max(A.cols, m[i].size());
        A.rows.push_back(std::move(row));
        A.owner.push_back(i);
    }
    return A;
}

/* multiply a row by a common denominator; returns the multiplier too */
std::pair<PolyRow, Poly2> clear_row(const RatRow& r, int arity) {
    PolyRow out;
    std::vector<Poly2> dens;
    for (const auto& [c, v] : r)
        if (std::find(dens.begin(), dens.end(), v.den()) == dens.end()) dens.push_back(v.den());
    Monomial mono;
    std::vector<Poly2> prims;
    for (const auto& d : dens) {
        Monomial c = d.content();
        mono = mono.lcm(c);
        Poly2 p = d.div_monomial(c);
        if (!p.is_one() && std::find(prims.begin(), prims.end(), p) == prims.end()) prims.push_back(p);
    }
    Poly2 L = Poly2::monomial(arity, mono);
    for (const auto& p : prims) L = L * p;
    std::vector<Poly2> mult;
    for (const auto& d : dens) {
        auto q = L.exact_div(d);
        if (!q) throw Error(ErrorKind::PreconditionFailed, "internal: denominator does not divide the row multiplier");
        mult.push_back(std::move(*q));
    }
    for (const auto& [c, v] : r) {
        std::size_t k = std::find(dens.begin(), dens.end(), v.den()) - dens.begin();
        out.emplace(c, mult[k].is_one() ? v.num() : v.num() * mult[k]);
    }
    return {std::move(out), L};
}

/* fraction-free elimination, one row at a time */
class Bareiss {
   public:
    void reduce(PolyRow& v) const {
        Poly2 prev = Poly2::one();
        for (std::size_t j = 0; j < rows_.size(); ++j) {
            const Poly2& p = piv_[j];
            auto it = v.find(cols_[j]);
            Poly2 a = it == v.end() ? Poly2() : it->second;
            bool same = p == prev;
            if (a.is_zero() && same) continue;
            PolyRow nv;
            for (auto& [c, x] : v) {
                if (c == cols_[j]) continue;
                nv.emplace(c, x * p);
            }
            if (!a.is_zero())
                for (const auto& [c, y] : rows_[j]) {
                    if (c == cols_[j]) continue;
                    auto [slot, fresh] = nv.emplace(c, Poly2());
                    slot->second += a * y;
                }
            for (auto it2 = nv.begin(); it2 != nv.end();) {
                if (it2->second.is_zero()) {
                    it2 = nv.erase(it2);
                    continue;
                }
                if (!prev.is_one()) {
                    auto q = it2->second.exact_div(prev);
                    if (!q) throw Error(ErrorKind::PreconditionFailed, "internal: inexact Bareiss division");
                    it2->second = std::move(*q);
                }
                ++it2;
            }
            v = std::move(nv);
            prev = p;
        }
    }

    /* true if the row raised the rank */
    bool insert(PolyRow v, PolyRow* reduced = nullptr) {
        reduce(v);
        const Poly2* best = nullptr;
        uint32_t best_col = 0;
        for (const auto& [c, x] : v) {
            if (c >= kAug) break;
            if (!best || x.size() < best->size() || (x.size() == best->size() && x.degree() < best->degree())) {
                best = &x;
                best_col = c;
            }
        }
        if (reduced) *reduced = v;
        if (!best) return false;
        piv_.push_back(*best);
        cols_.push_back(best_col);
        rows_.push_back(std::move(v));
        return true;
    }

    std::size_t rank() const { return rows_.size(); }

   private:
    std::vector<PolyRow> rows_;
    std::vector<uint32_t> cols_;
    std::vector<Poly2> piv_;
};

uint64_t mix(uint64_t x) {
    x += 0x9e3779b97f4a7c15ull;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
    return x ^ (x >> 31);
}

uint64_t content_hash(const Assembled& A) {
    uint64_t h = mix(A.cols * 1315423911u + A.rows.size());
    for (const auto& row : A.rows) {
        h = mix(h ^ row.size());
        for (const auto& [c, v] : row) {
            h = mix(h ^ (uint64_t(c) << 20) ^ (v.num().size() << 8) ^ v.den().size());
            if (!v.num().is_zero()) h = mix(h ^ v.num().lead().deg ^ (uint64_t(v.num().lead().parity()) << 16));
        }
    }
    return h;
}

struct Analysis {
    std::vector<std::size_t> cumulative;  // rank after each item
    bool exact = false;
    double failure_bound = 0.0;
};

Analysis analyze_exact(const Assembled& A) {
    Analysis out;
    out.exact = true;
    out.cumulative.assign(A.items, 0);
    Bareiss B;
    for (std::size_t r = 0; r < A.rows.size(); ++r) {
        B.insert(clear_row(A.rows[r], A.arity).first);
        out.cumulative[A.owner[r]] = B.rank();
    }
    for (std::size_t i = 1; i < A.items; ++i) out.cumulative[i] = std::max(out.cumulative[i], out.cumulative[i - 1]);
    return out;
}

std::optional<Analysis> analyze_monte_carlo(const Assembled& A, const RankMode& mode) {
    GF2k field(mode.k);
    uint64_t base = mix(mode.seed ^ content_hash(A));
    Analysis out;
    out.cumulative.assign(A.items, 0);
    for (int trial = 0; trial < std::max(1, mode.trials); ++trial) {
        std::vector<std::vector<uint64_t>> evaluated;
        bool ok = false;
        for (int attempt = 0; attempt <= kMaxResamples && !ok; ++attempt) {
            std::mt19937_64 rng(mix(base + 0x1000 * trial + attempt));
            std::vector<uint64_t> pt(A.arity);
            for (auto& v : pt) v = field.random_nonzero(rng);
            PolyEvaluator ev(field, pt);
            evaluated.assign(A.rows.size(), std::vector<uint64_t>(A.cols, 0));
            ok = true;
            for (std::size_t r = 0; r < A.rows.size() && ok; ++r) {
                for (const auto& [c, v] : A.rows[r]) {
                    uint64_t d = v.den().is_one() ? 1 : ev(v.den());
                    if (!d) {
                        ok = false;
                        break;
                    }
                    uint64_t n = ev(v.num());
                    evaluated[r][c] = d == 1 ? n : field.mul(n, field.inv(d));
                }
            }
        }
        if (!ok) return std::nullopt;
        std::vector<std::vector<uint64_t>> basis;
        std::vector<uint32_t> pcol;
        std::vector<std::size_t> cum(A.items, 0);
        for (std::size_t r = 0; r < A.rows.size(); ++r) {
            auto& v = evaluated[r];
            for (std::size_t j = 0; j < basis.size(); ++j) {
                uint64_t coef = v[pcol[j]];
                if (!coef) continue;
                const auto& P = basis[j];
                for (std::size_t c = 0; c < A.cols; ++c)
                    if (P[c]) v[c] ^= field.mul(coef, P[c]);
            }
            std::size_t c0 = 0;
            while (c0 < A.cols && !v[c0]) ++c0;
            if (c0 < A.cols) {
                uint64_t inv = field.inv(v[c0]);
                for (std::size_t c = c0; c < A.cols; ++c) v[c] = field.mul(v[c], inv);
                basis.push_back(std::move(v));
                pcol.push_back(static_cast<uint32_t>(c0));
            }
            cum[A.owner[r]] = basis.size();
        }
        for (std::size_t i = 0; i < A.items; ++i) {
            if (i) cum[i] = std::max(cum[i], cum[i - 1]);
            out.cumulative[i] = std::max(out.cumulative[i], cum[i]);
        }
    }
    for (std::size_t i = 1; i < A.items; ++i) out.cumulative[i] = std::max(out.cumulative[i], out.cumulative[i - 1]);

    std::size_t full = out.cumulative.empty() ? 0 : out.cumulative.back();
    std::size_t nonzero_rows = 0;
    double degree = 0;
    for (const auto& row : A.rows) {
        if (row.empty()) continue;
        ++nonzero_rows;
        int d = 0;
        for (const auto& [c, v] : row) d = std::max(d, v.num().degree() + v.den().degree());
        degree += d;
    }
    if (full < std::min(nonzero_rows, A.cols)) {
        double p = std::min(1.0, (degree + 1) / std::ldexp(1.0, mode.k));
        out.failure_bound = std::pow(p, std::max(1, mode.trials));
    }
    return out;
}

Analysis analyze(const Assembled& A, const RankMode& mode, bool* fell_back = nullptr) {
    if (mode.is_exact()) return analyze_exact(A);
    if (auto r = analyze_monte_carlo(A, mode)) return *r;
    if (fell_back) *fell_back = true;
    return analyze_exact(A);
}

/* relations among the rows: for each row that reduces to zero, its combination of earlier rows */
std::vector<std::pair<std::size_t, PolyRow>> exact_relations(const Assembled& A) {
    std::vector<std::pair<std::size_t, PolyRow>> rel;
    Bareiss B;
    for (std::size_t r = 0; r < A.rows.size(); ++r) {
        auto [row, mult] = clear_row(A.rows[r], A.arity);
        row.emplace(kAug + static_cast<uint32_t>(r), mult);
        PolyRow reduced;
        if (!B.insert(std::move(row), &reduced)) rel.emplace_back(r, std::move(reduced));
    }
    return rel;
}

/* a polynomial in the square variables, read as an element of L */
FieldElement from_square_poly(const FieldTower& tw, const Poly2& p) { return FieldElement(tw, RatFunc2(p.square())); }

}  // namespace

RankResult rank_backend(const RatMatrix& m, const RankMode& mode) {
    RankResult out;
    if (m.empty()) {
        out.exact = true;
        return out;
    }
    Assembled A = assemble_matrix(m);
    Analysis an = analyze(A, mode, &out.fell_back);
    out.rank = an.cumulative.back();
    out.exact = an.exact;
    out.failure_bound = an.failure_bound;
    return out;
}

SpanResult analyze_span(const std::vector<FieldElement>& elems, const RankMode& mode) {
    SpanResult out;
    if (elems.empty()) {
        out.exact = true;
        return out;
    }
    FieldTower tw = tower_of(elems);
    Assembled A = assemble(elems, tw);
    Analysis an = analyze(A, mode);
    std::size_t prev = 0;
    for (std::size_t i = 0; i < elems.size(); ++i) {
        if (an.cumulative[i] > prev) out.independent.push_back(i);
        prev = an.cumulative[i];
    }
    out.rows_rank = prev;
    out.dim = (prev + A.block - 1) / A.block;
    out.exact = an.exact;
    out.failure_bound = an.failure_bound;
    return out;
}

std::size_t span_dim_over_squares(const std::vector<FieldElement>& elems, const RankMode& mode) {
    return analyze_span(elems, mode).dim;
}

std::vector<std::size_t> independent_subset(const std::vector<FieldElement>& elems, const RankMode& mode) {
    return analyze_span(elems, mode).independent;
}

bool membership_in_square_span(const FieldElement& target, const std::vector<FieldElement>& elems,
                               const RankMode& mode) {
    if (target.is_zero()) return true;
    std::vector<FieldElement> all = elems;
    all.push_back(target);
    auto r = analyze_span(all, mode);
    return r.independent.empty() || r.independent.back() != elems.size();
}

std::vector<FieldElement> square_span_intersection(const std::vector<std::vector<FieldElement>>& spans,
                                                   const RankMode& mode) {
    if (!mode.is_exact()) throw Error(ErrorKind::ExactModeRequired, "span intersection needs exact rank");
    if (spans.empty()) return {};
    auto basis_of = [&](const std::vector<FieldElement>& s) {
        std::vector<FieldElement> b;
        if (s.empty()) return b;
        for (auto i : independent_subset(s, mode)) b.push_back(s[i]);
        return b;
    };
    std::vector<FieldElement> cur = basis_of(spans[0]);
    for (std::size_t k = 1; k < spans.size() && !cur.empty(); ++k) {
        std::vector<FieldElement> other = basis_of(spans[k]);
        if (other.empty()) return {};
        std::vector<FieldElement> all = cur;
        all.insert(all.end(), other.begin(), other.end());
        FieldTower tw = tower_of(all);
        Assembled A = assemble(all, tw);
        const auto& prods = tw.square_products();
        std::vector<FieldElement> found;
        for (const auto& [r, row] : exact_relations(A)) {
            // coefficients of the rows that come from cur
            std::vector<FieldElement> lambda(cur.size(), FieldElement(tw));
            for (const auto& [c, mu] : row) {
                if (c < kAug) continue;
                std::size_t src = c - kAug;
                std::size_t item = A.owner[src];
                if (item >= cur.size()) continue;
                std::size_t g = src - item * A.block;
                lambda[item] += from_square_poly(tw, mu) * FieldElement(tw, prods[g]);
            }
            FieldElement w(tw);
            for (std::size_t i = 0; i < cur.size(); ++i)
                if (!lambda[i].is_zero()) w += lambda[i] * cur[i].embed(tw);
            if (!w.is_zero()) found.push_back(w);
        }
        cur = basis_of(found);
    }
    return cur;
}

std::optional<std::vector<FieldElement>> solve_in_square_span(const FieldElement& target,
                                                              const std::vector<FieldElement>& elems) {
    std::vector<FieldElement> all = elems;
    all.push_back(target);
    FieldTower tw = tower_of(all);
    if (target.is_zero()) return std::vector<FieldElement>(elems.size(), FieldElement(tw));
    Assembled A = assemble(all, tw);
    // only the first row of the target (B_0 = 1) is needed
    A.rows.resize(elems.size() * A.block + 1);
    A.owner.resize(A.rows.size());
    const auto& prods = tw.square_products();
    std::size_t target_row = elems.size() * A.block;
    for (const auto& [r, row] : exact_relations(A)) {
        if (r != target_row) continue;
        auto own = row.find(kAug + static_cast<uint32_t>(target_row));
        if (own == row.end()) return std::nullopt;
        FieldElement inv_mu = from_square_poly(tw, own->second).inv();
        std::vector<FieldElement> coeffs(elems.size(), FieldElement(tw));
        for (const auto& [c, mu] : row) {
            if (c < kAug || c == own->first) continue;
            std::size_t src = c - kAug;
            std::size_t item = A.owner[src];
            std::size_t g = src - item * A.block;
            coeffs[item] += from_square_poly(tw, mu) * FieldElement(tw, prods[g]);
        }
        for (auto& x : coeffs) x = x * inv_mu;
        return coeffs;
    }
    return std::nullopt;
}

std::vector<CoordVector> square_rows(const FieldElement& a) { return rows_of(a, a.tower()); }

std::size_t occupied_labels(const std::vector<FieldElement>& elems) {
    if (elems.empty()) return 0;
    return assemble(elems, tower_of(elems)).cols;
}

}  // namespace qlq
