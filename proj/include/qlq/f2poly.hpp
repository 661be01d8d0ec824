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

#ifndef QLQ_F2POLY_HPP
#define QLQ_F2POLY_HPP

#include <algorithm>
#include <array>
#include <compare>
#include <cstdint>
#include <map>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "qlq/errors.hpp"

namespace qlq {

constexpr int kMaxVars = 32;

constexpr unsigned kMaxExponent = 0x7FFF;

/*
   exponent vector, four 16-bit lanes per word with x1 in the top lane of w[0], so
   graded-lex with x1 > x2 > ... is (deg, w[0], w[1], ...) compared as integers.
   Exponents stay below 2^15, which keeps lane sums carry-free.
*/
struct Monomial {
    static constexpr int kWords = kMaxVars / 4;
    std::array<uint64_t, kWords> w{};
    uint32_t deg = 0;

    static Monomial var(int i, unsigned power = 1);
    unsigned exp(int i) const noexcept { return static_cast<unsigned>(w[i >> 2] >> shift(i)) & 0xFFFFu; }
    void set_exp(int i, unsigned v);
    bool is_one() const noexcept { return deg == 0; }
    bool divides(const Monomial& other) const noexcept;
    Monomial operator*(const Monomial& other) const;
    /* caller guarantees divisibility */
    Monomial operator/(const Monomial& other) const noexcept;
    Monomial doubled() const;
    /* bit j set iff exponent of variable j is odd */
    uint32_t parity() const noexcept;
    /* halves every exponent after dropping parities */
    Monomial halved() const noexcept;
    Monomial gcd(const Monomial& other) const noexcept;
    Monomial lcm(const Monomial& other) const noexcept;
    int highest_var() const noexcept;
    static Monomial from_parity(uint32_t bits);

    friend bool operator==(const Monomial& a, const Monomial& b) noexcept {
        return a.deg == b.deg && a.w == b.w;
    }
    friend std::strong_ordering operator<=>(const Monomial& a, const Monomial& b) noexcept {
        if (a.deg != b.deg) return a.deg <=> b.deg;
        for (int i = 0; i < kWords; ++i)
            if (a.w[i] != b.w[i]) return a.w[i] <=> b.w[i];
        return std::strong_ordering::equal;
    }

   private:
    static constexpr int shift(int i) noexcept { return 48 - 16 * (i & 3); }
};

/* polynomial over GF(2): a set of monomials, kept in descending graded-lex order */
class Poly2 {
   public:
    Poly2() = default;
    explicit Poly2(int arity) : arity_(arity) {}
    Poly2(int arity, std::vector<Monomial> terms);

    static Poly2 zero(int arity = 0) { return Poly2(arity); }
    static Poly2 one(int arity = 0);
    static Poly2 var(int arity, int i, unsigned power = 1);
    static Poly2 monomial(int arity, const Monomial& m);

    int arity() const noexcept { return arity_; }
    Poly2 with_arity(int arity) const;
    bool is_zero() const noexcept { return terms_.empty(); }
    bool is_one() const noexcept { return terms_.size() == 1 && terms_[0].is_one(); }
    bool is_monomial() const noexcept { return terms_.size() == 1; }
    std::size_t size() const noexcept { return terms_.size(); }
    const std::vector<Monomial>& terms() const noexcept { return terms_; }
    const Monomial& lead() const { return terms_.front(); }
    int degree() const noexcept { return terms_.empty() ? -1 : static_cast<int>(terms_.front().deg); }
    unsigned degree_in(int var) const noexcept;
    /* largest variable index occurring, or -1 */
    int highest_var() const noexcept;

    Poly2& operator+=(const Poly2& other);
    friend Poly2 operator+(const Poly2& a, const Poly2& b) {
        Poly2 r = a;
        r += b;
        return r;
    }
    friend Poly2 operator*(const Poly2& a, const Poly2& b);
    Poly2 mul_monomial(const Monomial& m) const;
    Poly2 div_monomial(const Monomial& m) const;
    /* p(y)^2 = p(y^2) over GF(2) */
    Poly2 square() const;
    /* gcd of all terms */
    Monomial content() const;
    /* q with q*d == *this, or nothing if d does not divide exactly */
    std::optional<Poly2> exact_div(const Poly2& d) const;

    std::string to_string(const std::vector<std::string>& names) const;
    std::string to_string() const;

    friend bool operator==(const Poly2& a, const Poly2& b) noexcept { return a.terms_ == b.terms_; }
    friend bool operator<(const Poly2& a, const Poly2& b) noexcept { return a.terms_ < b.terms_; }

   private:
    int arity_ = 0;
    std::vector<Monomial> terms_;
};

/* num/den without gcd; equality by cross-multiplication */
class RatFunc2 {
   public:
    RatFunc2() : num_(0), den_(Poly2::one()) {}
    RatFunc2(Poly2 num);  // NOLINT implicit from polynomial
    RatFunc2(Poly2 num, Poly2 den);

    static RatFunc2 zero() { return RatFunc2(); }
    static RatFunc2 one() { return RatFunc2(Poly2::one()); }

    const Poly2& num() const noexcept { return num_; }
    const Poly2& den() const noexcept { return den_; }
    int arity() const noexcept { return std::max(num_.arity(), den_.arity()); }
    bool is_zero() const noexcept { return num_.is_zero(); }
    bool is_one() const { return num_ == den_; }

    friend RatFunc2 operator+(const RatFunc2& a, const RatFunc2& b);
    friend RatFunc2 operator*(const RatFunc2& a, const RatFunc2& b);
    RatFunc2& operator+=(const RatFunc2& b) { return *this = *this + b; }
    RatFunc2& operator*=(const RatFunc2& b) { return *this = *this * b; }
    RatFunc2 inv() const;
    RatFunc2 square() const { return RatFunc2(num_.square(), den_.square()); }

    friend bool operator==(const RatFunc2& a, const RatFunc2& b) { return a.num_ * b.den_ == b.num_ * a.den_; }

    std::string to_string(const std::vector<std::string>& names) const;

   private:
    void normalize();
    Poly2 num_;
    Poly2 den_;
};

enum class RfOp { Add, Mul, Inv };
RatFunc2 rf_arith(RfOp op, const RatFunc2& a, const RatFunc2& b = RatFunc2());

/* p = sum_e y^e * q_e(y^2); the map holds q_e written in the square variables */
std::map<uint32_t, Poly2> square_split(const Poly2& p, int arity);

/* GF(2^k) with a fixed low-weight irreducible modulus, 1 <= k <= 64 */
class GF2k {
   public:
    explicit GF2k(int k = 32);

    int k() const noexcept { return k_; }
    uint64_t mask() const noexcept { return mask_; }
    /* modulus without the leading x^k term */
    uint64_t modulus_low() const noexcept { return low_; }
    static std::vector<int> modulus_exponents(int k);

    uint64_t add(uint64_t a, uint64_t b) const noexcept { return a ^ b; }
    uint64_t mul(uint64_t a, uint64_t b) const noexcept;
    uint64_t sqr(uint64_t a) const noexcept { return mul(a, a); }
    uint64_t pow(uint64_t a, uint64_t e) const noexcept;
    uint64_t inv(uint64_t a) const;
    uint64_t sqrt(uint64_t a) const noexcept;
    uint64_t random(std::mt19937_64& rng) const { return rng() & mask_; }
    uint64_t random_nonzero(std::mt19937_64& rng) const;
    /* the class of x modulo the modulus */
    uint64_t generator() const noexcept { return k_ == 1 ? 1 : 2; }

   private:
    uint64_t reduce(unsigned __int128 v) const noexcept;
    int k_;
    uint64_t mask_;
    uint64_t low_;
    std::vector<int> taps_;  // exponents of the low terms of the modulus
};

uint64_t gf2k_sqrt(const GF2k& field, uint64_t v) noexcept;

struct GF2kPoint {
    int k = 32;
    std::vector<uint64_t> assignment;  // variable index -> value
};

/* evaluation with per-variable power caching */
class PolyEvaluator {
   public:
    PolyEvaluator(const GF2k& field, const std::vector<uint64_t>& values);
    uint64_t operator()(const Poly2& p);

   private:
    uint64_t power(int var, unsigned e);
    const GF2k& field_;
    const std::vector<uint64_t>& values_;
    std::vector<std::vector<uint64_t>> powers_;
};

uint64_t evaluate(const Poly2& p, const GF2k& field, const std::vector<uint64_t>& values);
/* throws DenominatorZero */
uint64_t evaluate(const RatFunc2& r, const GF2kPoint& pt);
std::optional<uint64_t> try_evaluate(const RatFunc2& r, const GF2k& field, const std::vector<uint64_t>& values);

/* default variable names x1, x2, ... */
std::vector<std::string> default_names(int arity);

}  // namespace qlq

#endif
