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

#include "qlq/f2poly.hpp"

#include <algorithm>
#include <bit>
#include <sstream>

namespace qlq {

const char* to_string(ErrorKind kind) noexcept {
    switch (kind) {
        case ErrorKind::DivisionByZero: return "DivisionByZero";
        case ErrorKind::DenominatorZero: return "DenominatorZero";
        case ErrorKind::DepthGuardExceeded: return "DepthGuardExceeded";
        case ErrorKind::SquareGenerator: return "SquareGenerator";
        case ErrorKind::ZeroGenerator: return "ZeroGenerator";
        case ErrorKind::TowerMismatch: return "TowerMismatch";
        case ErrorKind::ExactModeRequired: return "ExactModeRequired";
        case ErrorKind::SplitForm: return "SplitForm";
        case ErrorKind::NotASubform: return "NotASubform";
        case ErrorKind::ZeroScalar: return "ZeroScalar";
        case ErrorKind::NotDefinedOverSquares: return "NotDefinedOverSquares";
        case ErrorKind::NotAnisotropic: return "NotAnisotropic";
        case ErrorKind::ParameterOutOfRange: return "ParameterOutOfRange";
        case ErrorKind::PreconditionFailed: return "PreconditionFailed";
        case ErrorKind::UnknownName: return "UnknownName";
        case ErrorKind::SyntaxError: return "SyntaxError";
        case ErrorKind::NotApplicable: return "NotApplicable";
        case ErrorKind::ExponentOverflow: return "ExponentOverflow";
    }
    return "Error";
}

// ---------------------------------------------------------------- Monomial

namespace {

constexpr uint64_t kHigh = 0x8000800080008000ull;
constexpr uint64_t kLow = 0x0001000100010001ull;
constexpr uint64_t kLane = 0x7FFF7FFF7FFF7FFFull;

[[noreturn]] void overflow() { throw Error(ErrorKind::ExponentOverflow, "exponent exceeds 32767"); }

}  // namespace

Monomial Monomial::var(int i, unsigned power) {
    if (i < 0 || i >= kMaxVars) throw Error(ErrorKind::ParameterOutOfRange, "variable index " + std::to_string(i));
    Monomial m;
    m.set_exp(i, power);
    return m;
}

void Monomial::set_exp(int i, unsigned v) {
    if (v > kMaxExponent) overflow();
    unsigned old = exp(i);
    w[i >> 2] = (w[i >> 2] & ~(uint64_t(0xFFFF) << shift(i))) | (uint64_t(v) << shift(i));
    deg = deg - old + v;
}

bool Monomial::divides(const Monomial& other) const noexcept {
    if (deg > other.deg) return false;
    for (int i = 0; i < kWords; ++i)
        if ((((other.w[i] | kHigh) - w[i]) & kHigh) != kHigh) return false;
    return true;
}

Monomial Monomial::operator*(const Monomial& other) const {
    Monomial r;
    uint64_t bad = 0;
    for (int i = 0; i < kWords; ++i) {
        r.w[i] = w[i] + other.w[i];
        bad |= r.w[i];
    }
    if (bad & kHigh) overflow();
    r.deg = deg + other.deg;
    return r;
}

Monomial Monomial::operator/(const Monomial& other) const noexcept {
    Monomial r;
    for (int i = 0; i < kWords; ++i) r.w[i] = w[i] - other.w[i];
    r.deg = deg - other.deg;
    return r;
}

Monomial Monomial::doubled() const { return *this * *this; }

uint32_t Monomial::parity() const noexcept {
    uint32_t bits = 0;
    for (int i = 0; i < kWords; ++i) {
        uint64_t odd = w[i] & kLow;
        if (!odd) continue;
        for (int j = 0; j < 4; ++j)
            if ((odd >> (48 - 16 * j)) & 1u) bits |= 1u << (4 * i + j);
    }
    return bits;
}

Monomial Monomial::from_parity(uint32_t bits) {
    Monomial m;
    for (int i = 0; i < kMaxVars; ++i)
        if ((bits >> i) & 1u) m.set_exp(i, 1);
    return m;
}

Monomial Monomial::halved() const noexcept {
    Monomial r;
    uint32_t d = 0;
    for (int i = 0; i < kWords; ++i) {
        r.w[i] = (w[i] >> 1) & kLane;
        uint64_t x = r.w[i];
        d += static_cast<uint32_t>((x & 0xFFFF) + ((x >> 16) & 0xFFFF) + ((x >> 32) & 0xFFFF) + (x >> 48));
    }
    r.deg = d;
    return r;
}

Monomial Monomial::gcd(const Monomial& other) const noexcept {
    Monomial r;
    for (int i = 0; i < kMaxVars; ++i) {
        unsigned v = std::min(exp(i), other.exp(i));
        if (v) r.set_exp(i, v);
    }
    return r;
}

Monomial Monomial::lcm(const Monomial& other) const noexcept {
    Monomial r;
    for (int i = 0; i < kMaxVars; ++i) {
        unsigned v = std::max(exp(i), other.exp(i));
        if (v) r.set_exp(i, v);
    }
    return r;
}

int Monomial::highest_var() const noexcept {
    for (int i = kMaxVars - 1; i >= 0; --i)
        if (exp(i)) return i;
    return -1;
}

// ---------------------------------------------------------------- Poly2

namespace {

/* sort descending and drop pairs of equal monomials */
void canonicalize(std::vector<Monomial>& v) {
    std::sort(v.begin(), v.end(), std::greater<>());
    std::size_t out = 0;
    for (std::size_t i = 0; i < v.size();) {
        std::size_t j = i + 1;
        while (j < v.size() && v[j] == v[i]) ++j;
        if ((j - i) & 1u) v[out++] = v[i];
        i = j;
    }
    v.resize(out);
}

}  // namespace

Poly2::Poly2(int arity, std::vector<Monomial> terms) : arity_(arity), terms_(std::move(terms)) {
    canonicalize(terms_);
}

Poly2 Poly2::one(int arity) {
    Poly2 p(arity);
    p.terms_.emplace_back();
    return p;
}

Poly2 Poly2::var(int arity, int i, unsigned power) {
    Poly2 p(std::max(arity, i + 1));
    p.terms_.push_back(Monomial::var(i, power));
    return p;
}

Poly2 Poly2::monomial(int arity, const Monomial& m) {
    Poly2 p(arity);
    p.terms_.push_back(m);
    return p;
}

Poly2 Poly2::with_arity(int arity) const {
    Poly2 r = *this;
    r.arity_ = arity;
    return r;
}

unsigned Poly2::degree_in(int var) const noexcept {
    unsigned d = 0;
    for (const auto& t : terms_) d = std::max<unsigned>(d, t.exp(var));
    return d;
}

int Poly2::highest_var() const noexcept {
    int h = -1;
    for (const auto& t : terms_) h = std::max(h, t.highest_var());
    return h;
}

Poly2& Poly2::operator+=(const Poly2& other) {
    arity_ = std::max(arity_, other.arity_);
    if (other.terms_.empty()) return *this;
    if (terms_.empty()) {
        terms_ = other.terms_;
        return *this;
    }
    std::vector<Monomial> merged;
    merged.reserve(terms_.size() + other.terms_.size());
    auto a = terms_.begin();
    auto b = other.terms_.begin();
    while (a != terms_.end() && b != other.terms_.end()) {
        auto c = *a <=> *b;
        if (c > 0) merged.push_back(*a++);
        else if (c < 0) merged.push_back(*b++);
        else {
            ++a;
            ++b;
        }
    }
    merged.insert(merged.end(), a, terms_.end());
    merged.insert(merged.end(), b, other.terms_.end());
    terms_ = std::move(merged);
    return *this;
}

Poly2 Poly2::mul_monomial(const Monomial& m) const {
    Poly2 r(arity_);
    r.terms_.reserve(terms_.size());
    for (const auto& t : terms_) r.terms_.push_back(t * m);
    return r;  // monomial orders are multiplicative, so the order is kept
}

Poly2 Poly2::div_monomial(const Monomial& m) const {
    Poly2 r(arity_);
    r.terms_.reserve(terms_.size());
    for (const auto& t : terms_) r.terms_.push_back(t / m);
    return r;
}

Poly2 operator*(const Poly2& a, const Poly2& b) {
    int arity = std::max(a.arity_, b.arity_);
    if (a.is_zero() || b.is_zero()) return Poly2(arity);
    if (b.is_monomial()) return a.mul_monomial(b.terms_[0]).with_arity(arity);
    if (a.is_monomial()) return b.mul_monomial(a.terms_[0]).with_arity(arity);
    std::size_t n = a.terms_.size() * b.terms_.size();
    if (n <= 256) {
        std::vector<Monomial> prod;
        prod.reserve(n);
        for (const auto& s : a.terms_)
            for (const auto& t : b.terms_) prod.push_back(s * t);
        return Poly2(arity, std::move(prod));
    }
    // open addressing with parity counts; only survivors get sorted
    std::size_t cap = 1;
    while (cap < 2 * n) cap <<= 1;
    std::vector<Monomial> slot(cap);
    std::vector<uint8_t> state(cap, 0);  // 0 empty, 1 odd, 2 even
    for (const auto& s : a.terms_)
        for (const auto& t : b.terms_) {
            Monomial p = s * t;
            uint64_t h = p.deg * 0x9e3779b97f4a7c15ull;
            for (uint64_t x : p.w) h = (h ^ x) * 0xff51afd7ed558ccdull;
            std::size_t i = (h ^ (h >> 29)) & (cap - 1);
            while (state[i] && !(slot[i] == p)) i = (i + 1) & (cap - 1);
            if (!state[i]) {
                slot[i] = p;
                state[i] = 1;
            } else {
                state[i] = state[i] == 1 ? 2 : 1;
            }
        }
    Poly2 r(arity);
    for (std::size_t i = 0; i < cap; ++i)
        if (state[i] == 1) r.terms_.push_back(slot[i]);
    std::sort(r.terms_.begin(), r.terms_.end(), std::greater<>());
    return r;
}

Poly2 Poly2::square() const {
    Poly2 r(arity_);
    r.terms_.reserve(terms_.size());
    for (const auto& t : terms_) r.terms_.push_back(t.doubled());
    return r;
}

Monomial Poly2::content() const {
    if (terms_.empty()) return Monomial{};
    Monomial g = terms_[0];
    for (std::size_t i = 1; i < terms_.size() && g.deg > 0; ++i) g = g.gcd(terms_[i]);
    return g;
}

std::optional<Poly2> Poly2::exact_div(const Poly2& d) const {
    if (d.is_zero()) throw Error(ErrorKind::DivisionByZero, "polynomial division by zero");
    int arity = std::max(arity_, d.arity_);
    if (is_zero()) return Poly2(arity);
    if (d.is_one()) return with_arity(arity);
    if (d.is_monomial()) {
        const Monomial& m = d.terms_[0];
        for (const auto& t : terms_)
            if (!m.divides(t)) return std::nullopt;
        return div_monomial(m).with_arity(arity);
    }
    if (*this == d) return one(arity);
    Poly2 rem = *this;
    std::vector<Monomial> q;
    const Monomial& dl = d.lead();
    while (!rem.is_zero()) {
        const Monomial& rl = rem.lead();
        if (rl.deg < dl.deg || !dl.divides(rl)) return std::nullopt;
        Monomial t = rl / dl;
        q.push_back(t);
        rem += d.mul_monomial(t);
    }
    Poly2 r(arity);
    r.terms_ = std::move(q);  // produced in descending order
    return r;
}

std::string Poly2::to_string(const std::vector<std::string>& names) const {
    if (terms_.empty()) return "0";
    std::ostringstream os;
    bool first_term = true;
    for (const auto& t : terms_) {
        if (!first_term) os << " + ";
        first_term = false;
        if (t.is_one()) {
            os << "1";
            continue;
        }
        bool first_var = true;
        for (int i = 0; i < kMaxVars; ++i) {
            unsigned e = t.exp(i);
            if (!e) continue;
            if (!first_var) os << "*";
            first_var = false;
            os << (i < static_cast<int>(names.size()) ? names[i] : "x" + std::to_string(i + 1));
            if (e > 1) os << "^" << e;
        }
    }
    return os.str();
}

std::string Poly2::to_string() const { return to_string(default_names(std::max(arity_, highest_var() + 1))); }

std::vector<std::string> default_names(int arity) {
    std::vector<std::string> names;
    for (int i = 0; i < arity; ++i) names.push_back("x" + std::to_string(i + 1));
    return names;
}

// ---------------------------------------------------------------- RatFunc2

RatFunc2::RatFunc2(Poly2 num) : num_(std::move(num)), den_(Poly2::one(num_.arity())) {}

RatFunc2::RatFunc2(Poly2 num, Poly2 den) : num_(std::move(num)), den_(std::move(den)) {
    if (den_.is_zero()) throw Error(ErrorKind::DivisionByZero, "zero denominator");
    normalize();
}

void RatFunc2::normalize() {
    if (num_.is_zero()) {
        den_ = Poly2::one(den_.arity());
        return;
    }
    if (den_.is_one()) return;
    Monomial g = num_.content().gcd(den_.content());
    if (g.deg > 0) {
        num_ = num_.div_monomial(g);
        den_ = den_.div_monomial(g);
    }
    if (num_ == den_) {
        num_ = Poly2::one(num_.arity());
        den_ = Poly2::one(den_.arity());
        return;
    }
    if (den_.is_monomial()) return;
    if (num_.size() > 64 || den_.size() > 16) return;
    if (auto q = num_.exact_div(den_)) {
        num_ = std::move(*q);
        den_ = Poly2::one(den_.arity());
    }
}

RatFunc2 operator+(const RatFunc2& a, const RatFunc2& b) {
    if (a.is_zero()) return b;
    if (b.is_zero()) return a;
    if (a.den_ == b.den_) return RatFunc2(a.num_ + b.num_, a.den_);
    if (b.den_.is_one()) return RatFunc2(a.num_ + b.num_ * a.den_, a.den_);
    if (a.den_.is_one()) return RatFunc2(a.num_ * b.den_ + b.num_, b.den_);
    if (a.den_.is_monomial() && b.den_.is_monomial()) {
        const Monomial& da = a.den_.lead();
        const Monomial& db = b.den_.lead();
        Monomial l = da.lcm(db);
        return RatFunc2(a.num_.mul_monomial(l / da) + b.num_.mul_monomial(l / db),
                        Poly2::monomial(std::max(a.arity(), b.arity()), l));
    }
    return RatFunc2(a.num_ * b.den_ + b.num_ * a.den_, a.den_ * b.den_);
}

RatFunc2 operator*(const RatFunc2& a, const RatFunc2& b) {
    if (a.is_zero() || b.is_zero()) return RatFunc2(Poly2(std::max(a.arity(), b.arity())));
    // identical-factor cancellation
    if (a.num_ == b.den_) return RatFunc2(b.num_, a.den_);
    if (b.num_ == a.den_) return RatFunc2(a.num_, b.den_);
    return RatFunc2(a.num_ * b.num_, a.den_ * b.den_);
}

RatFunc2 RatFunc2::inv() const {
    if (num_.is_zero()) throw Error(ErrorKind::DivisionByZero, "inverse of zero");
    return RatFunc2(den_, num_);
}

std::string RatFunc2::to_string(const std::vector<std::string>& names) const {
    if (den_.is_one()) return num_.to_string(names);
    auto wrap = [&](const Poly2& p) {
        std::string s = p.to_string(names);
        return p.size() > 1 ? "(" + s + ")" : s;
    };
    return wrap(num_) + "/" + wrap(den_);
}

RatFunc2 rf_arith(RfOp op, const RatFunc2& a, const RatFunc2& b) {
    switch (op) {
        case RfOp::Add: return a + b;
        case RfOp::Mul: return a * b;
        case RfOp::Inv: return a.inv();
    }
    return a;
}

std::map<uint32_t, Poly2> square_split(const Poly2& p, int arity) {
    std::map<uint32_t, std::vector<Monomial>> buckets;
    for (const auto& t : p.terms()) buckets[t.parity()].push_back(t.halved());
    std::map<uint32_t, Poly2> out;
    for (auto& [e, v] : buckets) out.emplace(e, Poly2(arity, std::move(v)));
    return out;
}

// ---------------------------------------------------------------- GF(2^k)

std::vector<int> GF2k::modulus_exponents(int k) {
    // lowest-weight irreducible for each degree: trinomial x^k + x^a + 1 with smallest a,
    // otherwise pentanomial x^k + x^a + x^b + x^c + 1 lexicographically smallest
    static const int table[65][3] = {
        {0, 0, 0},  {0, 0, 0},  {1, 0, 0},  {1, 0, 0},  {1, 0, 0},  {2, 0, 0},  {1, 0, 0},  {1, 0, 0},
        {4, 3, 1},  {1, 0, 0},  {3, 0, 0},  {2, 0, 0},  {3, 0, 0},  {4, 3, 1},  {5, 0, 0},  {1, 0, 0},
        {5, 3, 1},  {3, 0, 0},  {3, 0, 0},  {5, 2, 1},  {3, 0, 0},  {2, 0, 0},  {1, 0, 0},  {5, 0, 0},
        {4, 3, 1},  {3, 0, 0},  {4, 3, 1},  {5, 2, 1},  {1, 0, 0},  {2, 0, 0},  {1, 0, 0},  {3, 0, 0},
        {7, 3, 2},  {10, 0, 0}, {7, 0, 0},  {2, 0, 0},  {9, 0, 0},  {6, 4, 1},  {6, 5, 1},  {4, 0, 0},
        {5, 4, 3},  {3, 0, 0},  {7, 0, 0},  {6, 4, 3},  {5, 0, 0},  {4, 3, 1},  {1, 0, 0},  {5, 0, 0},
        {5, 3, 2},  {9, 0, 0},  {4, 3, 2},  {6, 3, 1},  {3, 0, 0},  {6, 2, 1},  {9, 0, 0},  {7, 0, 0},
        {7, 4, 2},  {4, 0, 0},  {19, 0, 0}, {7, 4, 2},  {1, 0, 0},  {5, 2, 1},  {29, 0, 0}, {1, 0, 0},
        {4, 3, 1}};
    if (k < 1 || k > 64) throw Error(ErrorKind::ParameterOutOfRange, "GF(2^k) needs 1 <= k <= 64");
    if (k == 1) return {0};  // x + 1
    std::vector<int> taps{0};
    for (int j = 0; j < 3; ++j)
        if (table[k][j]) taps.push_back(table[k][j]);
    return taps;
}

GF2k::GF2k(int k) : k_(k), taps_(modulus_exponents(k)) {
    mask_ = k == 64 ? ~uint64_t(0) : ((uint64_t(1) << k) - 1);
    low_ = 0;
    for (int t : taps_) low_ |= uint64_t(1) << t;
}

uint64_t GF2k::reduce(unsigned __int128 v) const noexcept {
    while (v >> k_) {
        unsigned __int128 h = v >> k_;
        v &= mask_;
        for (int t : taps_) v ^= h << t;
    }
    return static_cast<uint64_t>(v);
}

uint64_t GF2k::mul(uint64_t a, uint64_t b) const noexcept {
    if (!a || !b) return 0;
    if (k_ <= 32) {
        uint64_t tbl[16];
        tbl[0] = 0;
        tbl[1] = a;
        for (int i = 2; i < 16; ++i) tbl[i] = (i & 1) ? tbl[i - 1] ^ a : tbl[i >> 1] << 1;
        uint64_t r = 0;
        for (int shift = (k_ - 1) & ~3; shift >= 0; shift -= 4) r = (r << 4) ^ tbl[(b >> shift) & 15];
        return reduce(r);
    }
    unsigned __int128 tbl[16];
    tbl[0] = 0;
    tbl[1] = a;
    for (int i = 2; i < 16; ++i) tbl[i] = (i & 1) ? tbl[i - 1] ^ a : tbl[i >> 1] << 1;
    unsigned __int128 r = 0;
    for (int shift = (k_ - 1) & ~3; shift >= 0; shift -= 4) r = (r << 4) ^ tbl[(b >> shift) & 15];
    return reduce(r);
}

uint64_t GF2k::pow(uint64_t a, uint64_t e) const noexcept {
    uint64_t r = 1;
    while (e) {
        if (e & 1) r = mul(r, a);
        a = mul(a, a);
        e >>= 1;
    }
    return r;
}

uint64_t GF2k::inv(uint64_t a) const {
    if (!a) throw Error(ErrorKind::DivisionByZero, "inverse of zero in GF(2^k)");
    if (k_ == 64) {
        // a^(2^64 - 2) = (a^(2^63 - 1))^2
        uint64_t t = pow(a, (uint64_t(1) << 63) - 1);
        return mul(t, t);
    }
    return pow(a, (uint64_t(1) << k_) - 2);
}

uint64_t GF2k::sqrt(uint64_t a) const noexcept {
    for (int i = 1; i < k_; ++i) a = mul(a, a);
    return a;
}

uint64_t GF2k::random_nonzero(std::mt19937_64& rng) const {
    uint64_t v;
    do v = rng() & mask_;
    while (!v);
    return v;
}

uint64_t gf2k_sqrt(const GF2k& field, uint64_t v) noexcept { return field.sqrt(v); }

// ---------------------------------------------------------------- evaluation

PolyEvaluator::PolyEvaluator(const GF2k& field, const std::vector<uint64_t>& values)
    : field_(field), values_(values), powers_(values.size()) {}

uint64_t PolyEvaluator::power(int var, unsigned e) {
    auto& tbl = powers_[var];
    if (tbl.empty()) tbl.push_back(1);
    while (tbl.size() <= e) tbl.push_back(field_.mul(tbl.back(), values_[var]));
    return tbl[e];
}

uint64_t PolyEvaluator::operator()(const Poly2& p) {
    uint64_t acc = 0;
    for (const auto& t : p.terms()) {
        uint64_t v = 1;
        for (int i = 0; i < kMaxVars && v; ++i) {
            unsigned e = t.exp(i);
            if (!e) continue;
            if (i >= static_cast<int>(values_.size()))
                throw Error(ErrorKind::ParameterOutOfRange, "point does not assign variable " + std::to_string(i + 1));
            v = field_.mul(v, power(i, e));
        }
        acc ^= v;
    }
    return acc;
}

uint64_t evaluate(const Poly2& p, const GF2k& field, const std::vector<uint64_t>& values) {
    PolyEvaluator ev(field, values);
    return ev(p);
}

std::optional<uint64_t> try_evaluate(const RatFunc2& r, const GF2k& field, const std::vector<uint64_t>& values) {
    PolyEvaluator ev(field, values);
    uint64_t d = ev(r.den());
    if (!d) return std::nullopt;
    return field.mul(ev(r.num()), field.inv(d));
}

uint64_t evaluate(const RatFunc2& r, const GF2kPoint& pt) {
    GF2k field(pt.k);
    auto v = try_evaluate(r, field, pt.assignment);
    if (!v) throw Error(ErrorKind::DenominatorZero, "denominator vanishes at the sample point");
    return *v;
}

}  // namespace qlq
