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

#include "qlq/field_tower.hpp"

#include <algorithm>
#include <bit>
#include <regex>
#include <sstream>

#include "qlq/linalg2.hpp"

namespace qlq {

namespace {

const std::shared_ptr<const TowerData>& root_data() {
    static const auto root = std::make_shared<const TowerData>();
    return root;
}

void add_into(Comps& acc, uint32_t f, const RatFunc2& c) {
    if (c.is_zero()) return;
    auto it = acc.find(f);
    if (it == acc.end()) {
        acc.emplace(f, c);
        return;
    }
    it->second += c;
    if (it->second.is_zero()) acc.erase(it);
}

Comps add_comps(const Comps& a, const Comps& b) {
    if (a.empty()) return b;
    Comps r = a;
    for (const auto& [f, c] : b) add_into(r, f, c);
    return r;
}

int level_of(const Comps& a) {
    uint32_t all = 0;
    for (const auto& kv : a) all |= kv.first;
    return all ? 32 - std::countl_zero(all) : 0;
}

Comps scale_comps(const Comps& a, const RatFunc2& c) {
    Comps r;
    if (c.is_zero()) return r;
    for (const auto& [f, v] : a) r.emplace(f, v * c);
    return r;
}

Comps mul_rec(const Comps& a, const Comps& b, int level, const TowerData& d) {
    if (a.empty() || b.empty()) return {};
    if (level == 0) {
        Comps r;
        add_into(r, 0, a.begin()->second * b.begin()->second);
        return r;
    }
    // scalar fast paths
    if (a.size() == 1 && a.begin()->first == 0) return scale_comps(b, a.begin()->second);
    if (b.size() == 1 && b.begin()->first == 0) return scale_comps(a, b.begin()->second);

    uint32_t bit = 1u << (level - 1);
    Comps a0, a1, b0, b1;
    for (const auto& [f, c] : a) (f & bit ? a1 : a0).emplace(f & ~bit, c);
    for (const auto& [f, c] : b) (f & bit ? b1 : b0).emplace(f & ~bit, c);
    if (a1.empty() && b1.empty()) return mul_rec(a0, b0, level - 1, d);

    Comps r0 = mul_rec(a0, b0, level - 1, d);
    if (!a1.empty() && !b1.empty()) {
        Comps t = mul_rec(a1, b1, level - 1, d);
        r0 = add_comps(r0, mul_rec(t, d.sqrt_squares[level - 1], level - 1, d));
    }
    Comps r1 = add_comps(mul_rec(a0, b1, level - 1, d), mul_rec(a1, b0, level - 1, d));
    for (const auto& [f, c] : r1) r0.emplace(f | bit, c);
    return r0;
}

Comps mul_comps(const Comps& a, const Comps& b, const TowerData& d) {
    return mul_rec(a, b, std::max(level_of(a), level_of(b)), d);
}

Comps square_comps(const Comps& a, const TowerData& d) {
    Comps r;
    for (const auto& [f, c] : a) {
        RatFunc2 c2 = c.square();
        for (const auto& [g, v] : d.products[f]) add_into(r, g, v * c2);
    }
    return r;
}

Comps inv_comps(const Comps& a, const TowerData& d) {
    if (a.empty()) throw Error(ErrorKind::DivisionByZero, "inverse of zero");
    if (a.size() == 1 && a.begin()->first == 0) return Comps{{0u, a.begin()->second.inv()}};
    // a^-1 = a * (a^2)^-1, and a^2 lies strictly lower in the tower
    Comps a2 = square_comps(a, d);
    return mul_comps(a, inv_comps(a2, d), d);
}

void check_guard(const TowerData& d) {
    int total = static_cast<int>(d.vars.size() + d.sqrt_names.size());
    if (total > d.guard.max_generators)
        throw Error(ErrorKind::DepthGuardExceeded,
                    "tower would have " + std::to_string(total) + " generators, limit " +
                        std::to_string(d.guard.max_generators));
    if (static_cast<int>(d.vars.size()) > kMaxVars)
        throw Error(ErrorKind::DepthGuardExceeded, "more than 32 rational variables");
}

}  // namespace

// ---------------------------------------------------------------- FieldTower

FieldTower::FieldTower() : d_(root_data()) {}

FieldTower::FieldTower(std::vector<std::string> vars, DepthGuard guard) {
    auto d = std::make_shared<TowerData>();
    d->parent = root_data();
    d->vars = std::move(vars);
    d->guard = guard;
    d->products = {Comps{{0u, RatFunc2::one()}}};
    check_guard(*d);
    d_ = d;
}

int FieldTower::m() const { return static_cast<int>(d_->vars.size()); }
int FieldTower::t() const { return static_cast<int>(d_->sqrt_names.size()); }
const std::vector<std::string>& FieldTower::var_names() const { return d_->vars; }
const std::vector<std::string>& FieldTower::sqrt_names() const { return d_->sqrt_names; }
const DepthGuard& FieldTower::guard() const { return d_->guard; }
int FieldTower::quadric_count() const { return d_->quadric_count; }

std::vector<std::string> FieldTower::names() const {
    auto n = d_->vars;
    n.insert(n.end(), d_->sqrt_names.begin(), d_->sqrt_names.end());
    return n;
}

std::optional<int> FieldTower::var_index(const std::string& name) const {
    auto it = std::find(d_->vars.begin(), d_->vars.end(), name);
    if (it == d_->vars.end()) return std::nullopt;
    return static_cast<int>(it - d_->vars.begin());
}

std::optional<int> FieldTower::sqrt_index(const std::string& name) const {
    auto it = std::find(d_->sqrt_names.begin(), d_->sqrt_names.end(), name);
    if (it == d_->sqrt_names.end()) return std::nullopt;
    return static_cast<int>(it - d_->sqrt_names.begin());
}

FieldElement FieldTower::sqrt_square(int i) const { return FieldElement(*this, d_->sqrt_squares.at(i)); }

const std::vector<Comps>& FieldTower::square_products() const {
    if (d_->products.empty()) {
        static const std::vector<Comps> unit{Comps{{0u, RatFunc2::one()}}};
        return unit;
    }
    return d_->products;
}

FieldTower FieldTower::extend_rational(int count) const {
    static const std::regex pat("T([0-9]+)");
    int next = 1;
    for (const auto& v : d_->vars) {
        std::smatch mt;
        if (std::regex_match(v, mt, pat)) next = std::max(next, std::stoi(mt[1]) + 1);
    }
    std::vector<std::string> names;
    for (int j = 0; j < count; ++j) names.push_back("T" + std::to_string(next + j));
    return extend_rational_named(names);
}

FieldTower FieldTower::extend_rational_named(const std::vector<std::string>& names) const {
    auto d = std::make_shared<TowerData>(*d_);
    d->parent = d_;
    for (const auto& n : names) {
        if (var_index(n) || sqrt_index(n)) throw Error(ErrorKind::PreconditionFailed, "duplicate generator name " + n);
        d->vars.push_back(n);
    }
    if (d->products.empty()) d->products = {Comps{{0u, RatFunc2::one()}}};
    check_guard(*d);
    return FieldTower(std::shared_ptr<const TowerData>(d));
}

FieldTower FieldTower::extend_sqrt(const FieldElement& b, const RankMode& mode) const {
    FieldElement be = b.embed(*this);
    if (be.is_zero()) throw Error(ErrorKind::ZeroGenerator, "square root of zero");
    if (is_square(be, mode)) throw Error(ErrorKind::SquareGenerator, be.to_string() + " is already a square");
    return extend_sqrt_unchecked(be);
}

FieldTower FieldTower::extend_sqrt(const FieldElement& b) const { return extend_sqrt(b, default_rank_mode()); }

FieldTower FieldTower::extend_sqrt_unchecked(const FieldElement& b, std::string name) const {
    FieldElement be = b.embed(*this);
    if (be.is_zero()) throw Error(ErrorKind::ZeroGenerator, "square root of zero");
    auto d = std::make_shared<TowerData>(*d_);
    d->parent = d_;
    if (d->products.empty()) d->products = {Comps{{0u, RatFunc2::one()}}};
    if (name.empty()) name = "s" + std::to_string(t() + 1);
    if (var_index(name) || sqrt_index(name)) throw Error(ErrorKind::PreconditionFailed, "duplicate generator name " + name);
    d->sqrt_names.push_back(name);
    d->sqrt_squares.push_back(be.comps());
    check_guard(*d);
    std::size_t half = d->products.size();
    d->products.reserve(2 * half);
    for (std::size_t g = 0; g < half; ++g) d->products.push_back(mul_comps(d->products[g], be.comps(), *d));
    return FieldTower(std::shared_ptr<const TowerData>(d));
}

FieldTower FieldTower::with_quadric_count(int count) const {
    auto d = std::make_shared<TowerData>(*d_);
    d->parent = d_;
    d->quadric_count = count;
    return FieldTower(std::shared_ptr<const TowerData>(d));
}

FieldTower FieldTower::with_guard(const DepthGuard& guard) const {
    auto d = std::make_shared<TowerData>(*d_);
    d->parent = d_;
    d->guard = guard;
    check_guard(*d);
    return FieldTower(std::shared_ptr<const TowerData>(d));
}

bool FieldTower::is_ancestor_of(const FieldTower& other) const {
    for (const TowerData* p = other.d_.get(); p; p = p->parent.get())
        if (p == d_.get()) return true;
    return false;
}

std::string FieldTower::describe() const {
    std::ostringstream os;
    os << "GF(2)(";
    for (std::size_t i = 0; i < d_->vars.size(); ++i) os << (i ? "," : "") << d_->vars[i];
    os << ")";
    for (int i = 0; i < t(); ++i) os << "(" << d_->sqrt_names[i] << "^2 = " << sqrt_square(i).to_string() << ")";
    return os.str();
}

FieldTower common_tower(const FieldTower& a, const FieldTower& b) {
    if (a == b) return a;
    if (a.is_ancestor_of(b)) return b;
    if (b.is_ancestor_of(a)) return a;
    throw Error(ErrorKind::TowerMismatch, "elements live in unrelated towers");
}

// ---------------------------------------------------------------- FieldElement

FieldElement::FieldElement(FieldTower tower, Comps comps) : tower_(std::move(tower)) {
    for (auto& [f, c] : comps)
        if (!c.is_zero()) comps_.emplace(f, std::move(c));
}

FieldElement::FieldElement(FieldTower tower, const RatFunc2& r) : tower_(std::move(tower)) {
    if (!r.is_zero()) comps_.emplace(0u, r);
}

FieldElement FieldElement::one(const FieldTower& tw) { return FieldElement(tw, RatFunc2::one()); }

FieldElement FieldElement::var(const FieldTower& tw, int i) {
    if (i < 0 || i >= tw.m()) throw Error(ErrorKind::ParameterOutOfRange, "no rational variable " + std::to_string(i));
    return FieldElement(tw, RatFunc2(Poly2::var(tw.m(), i)));
}

FieldElement FieldElement::sqrt_gen(const FieldTower& tw, int i) {
    if (i < 0 || i >= tw.t()) throw Error(ErrorKind::ParameterOutOfRange, "no square root generator " + std::to_string(i));
    return FieldElement(tw, Comps{{1u << i, RatFunc2::one()}});
}

bool FieldElement::is_one() const { return comps_.size() == 1 && comps_.begin()->first == 0 && comps_.begin()->second.is_one(); }

RatFunc2 FieldElement::rational_part() const {
    auto it = comps_.find(0);
    return it == comps_.end() ? RatFunc2() : it->second;
}

FieldElement FieldElement::embed(const FieldTower& tw) const {
    if (tw == tower_) return *this;
    if (!tower_.is_ancestor_of(tw)) throw Error(ErrorKind::TowerMismatch, "cannot embed into a tower that does not extend the owner");
    FieldElement r(tw);
    r.comps_ = comps_;
    return r;
}

FieldElement operator+(const FieldElement& a, const FieldElement& b) {
    FieldTower tw = common_tower(a.tower_, b.tower_);
    FieldElement r(tw);
    r.comps_ = add_comps(a.comps_, b.comps_);
    return r;
}

FieldElement operator*(const FieldElement& a, const FieldElement& b) {
    FieldTower tw = common_tower(a.tower_, b.tower_);
    FieldElement r(tw);
    r.comps_ = mul_comps(a.comps_, b.comps_, *tw.data());
    return r;
}

FieldElement FieldElement::inv() const {
    FieldElement r(tower_);
    r.comps_ = inv_comps(comps_, *tower_.data());
    return r;
}

FieldElement FieldElement::square() const {
    FieldElement r(tower_);
    r.comps_ = square_comps(comps_, *tower_.data());
    return r;
}

bool operator==(const FieldElement& a, const FieldElement& b) {
    if (a.comps_.size() != b.comps_.size()) return (a + b).is_zero();
    auto i = a.comps_.begin();
    auto j = b.comps_.begin();
    for (; i != a.comps_.end(); ++i, ++j)
        if (i->first != j->first || !(i->second == j->second)) return false;
    common_tower(a.tower_, b.tower_);
    return true;
}

CoordVector FieldElement::coordinates() const {
    CoordVector out;
    int m = tower_.m();
    for (const auto& [f, c] : comps_) {
        const Poly2& d = c.den();
        Poly2 nd = d.is_one() ? c.num() : c.num() * d;
        for (auto& [e, q] : square_split(nd, m)) out.emplace(make_label(e, f), RatFunc2(q, d));
    }
    return out;
}

FieldElement reassemble(const FieldTower& tw, const CoordVector& c) {
    Comps comps;
    for (const auto& [label, v] : c) {
        Monomial ye = Monomial::from_parity(label_e(label));
        add_into(comps, label_f(label), RatFunc2(v.num().square().mul_monomial(ye), v.den().square()));
    }
    return FieldElement(tw, comps);
}

std::string FieldElement::to_string() const {
    if (comps_.empty()) return "0";
    auto names = tower_.var_names();
    const auto& sn = tower_.sqrt_names();
    std::string out;
    for (const auto& [f, c] : comps_) {
        if (!out.empty()) out += " + ";
        std::string smon;
        for (int i = 0; i < 32; ++i)
            if ((f >> i) & 1u) smon += (smon.empty() ? "" : "*") + (i < static_cast<int>(sn.size()) ? sn[i] : "s" + std::to_string(i + 1));
        std::string cs = c.to_string(names);
        if (smon.empty()) {
            out += cs;
        } else if (c.is_one()) {
            out += smon;
        } else {
            bool bare = c.den().is_one() && c.num().size() == 1;
            out += (bare ? cs : "(" + cs + ")") + "*" + smon;
        }
    }
    return out;
}

FieldElement elem_arith(ElemOp op, const FieldElement& a, const FieldElement& b) {
    switch (op) {
        case ElemOp::Add: return a + b;
        case ElemOp::Mul: return a * b;
        case ElemOp::Inv: return a.inv();
    }
    return a;
}

bool is_square(const FieldElement& a, const RankMode& mode) {
    if (a.is_zero()) return true;
    return membership_in_square_span(a, {FieldElement::one(a.tower())}, mode);
}

bool is_square(const FieldElement& a) { return is_square(a, default_rank_mode()); }

// ---------------------------------------------------------------- evaluation

std::optional<uint64_t> try_eval_tower(const FieldElement& a, const GF2k& field, const std::vector<uint64_t>& values) {
    const FieldTower& tw = a.tower();
    int t = tw.t();
    std::vector<uint64_t> s(t);
    auto eval_comps = [&](const Comps& c, int upto) -> std::optional<uint64_t> {
        uint64_t acc = 0;
        for (const auto& [f, r] : c) {
            auto v = try_evaluate(r, field, values);
            if (!v) return std::nullopt;
            uint64_t term = *v;
            for (int i = 0; i < upto; ++i)
                if ((f >> i) & 1u) term = field.mul(term, s[i]);
            acc ^= term;
        }
        return acc;
    };
    for (int i = 0; i < t; ++i) {
        auto bi = eval_comps(tw.data()->sqrt_squares[i], i);
        if (!bi) return std::nullopt;
        s[i] = field.sqrt(*bi);
    }
    return eval_comps(a.comps(), t);
}

uint64_t eval_tower(const FieldElement& a, const GF2kPoint& pt) {
    GF2k field(pt.k);
    auto v = try_eval_tower(a, field, pt.assignment);
    if (!v) throw Error(ErrorKind::DenominatorZero, "denominator vanishes at the sample point");
    return *v;
}

// ---------------------------------------------------------------- substitution

RatFunc2 substitute(const RatFunc2& r, const std::vector<std::optional<RatFunc2>>& images, int arity) {
    auto subst_poly = [&](const Poly2& p) {
        RatFunc2 acc{Poly2(arity)};
        std::map<std::pair<int, unsigned>, RatFunc2> cache;
        auto power = [&](int v, unsigned e) -> RatFunc2 {
            auto key = std::make_pair(v, e);
            if (auto it = cache.find(key); it != cache.end()) return it->second;
            RatFunc2 base = *images[v];
            RatFunc2 out = RatFunc2::one();
            for (unsigned i = 0; i < e; ++i) out *= base;
            cache.emplace(key, out);
            return out;
        };
        for (const auto& t : p.terms()) {
            Monomial kept;
            RatFunc2 factor = RatFunc2::one();
            for (int v = 0; v < kMaxVars; ++v) {
                unsigned e = t.exp(v);
                if (!e) continue;
                if (v < static_cast<int>(images.size()) && images[v])
                    factor *= power(v, e);
                else
                    kept.set_exp(v, e);
            }
            acc += factor * RatFunc2(Poly2::monomial(arity, kept));
        }
        return acc;
    };
    RatFunc2 num = subst_poly(r.num());
    RatFunc2 den = subst_poly(r.den());
    if (den.is_zero()) throw Error(ErrorKind::DenominatorZero, "denominator vanishes under substitution");
    return num * den.inv();
}

}  // namespace qlq
