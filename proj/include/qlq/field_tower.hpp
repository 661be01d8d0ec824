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

#ifndef QLQ_FIELD_TOWER_HPP
#define QLQ_FIELD_TOWER_HPP

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "qlq/f2poly.hpp"

namespace qlq {

struct RankMode;

/* resource limits for tower construction and matrix assembly */
struct DepthGuard {
    int max_generators = 24;             // m + t
    std::size_t max_labels = 1u << 20;   // occupied coordinate labels in one matrix
};

/* s-monomial bitmask -> rational coefficient */
using Comps = std::map<uint32_t, RatFunc2>;

/* label of the coordinate y^e s^f: e in the low 32 bits, f in the high 32 bits */
using CoordLabel = uint64_t;
inline CoordLabel make_label(uint32_t e, uint32_t f) { return (uint64_t(f) << 32) | e; }
inline uint32_t label_e(CoordLabel l) { return static_cast<uint32_t>(l); }
inline uint32_t label_f(CoordLabel l) { return static_cast<uint32_t>(l >> 32); }

/* entries are rational functions in z_j = y_j^2 (stored with variable j standing for z_j) */
using CoordVector = std::map<CoordLabel, RatFunc2>;

struct TowerData;
class FieldElement;

/*
   GF(2)(y_1..y_m)(s_1..s_t) with s_i^2 = b_i, b_i in the subtower below s_i.
   Immutable; extensions return new towers which remember their parent.
*/
class FieldTower {
   public:
    FieldTower();  // GF(2) itself
    explicit FieldTower(std::vector<std::string> vars, DepthGuard guard = {});

    int m() const;
    int t() const;
    const std::vector<std::string>& var_names() const;
    const std::vector<std::string>& sqrt_names() const;
    /* every generator name, rational variables first */
    std::vector<std::string> names() const;
    std::optional<int> var_index(const std::string& name) const;
    std::optional<int> sqrt_index(const std::string& name) const;
    const DepthGuard& guard() const;
    int quadric_count() const;

    /* b_i as an element of this tower */
    FieldElement sqrt_square(int i) const;
    /* B_g = prod_{i in g} b_i for every g in [0, 2^t), as component maps */
    const std::vector<Comps>& square_products() const;

    FieldTower extend_rational(int count) const;
    FieldTower extend_rational_named(const std::vector<std::string>& names) const;
    /* checks that b is a nonzero non-square; the check uses the given mode */
    FieldTower extend_sqrt(const FieldElement& b, const RankMode& mode) const;
    FieldTower extend_sqrt(const FieldElement& b) const;
    /* skips the squareness check; for callers that already know b is not a square */
    FieldTower extend_sqrt_unchecked(const FieldElement& b, std::string name = {}) const;
    /* marks the tower as the result of one more quadric extension */
    FieldTower with_quadric_count(int count) const;
    FieldTower with_guard(const DepthGuard& guard) const;

    /* this == other or this is an ancestor of other */
    bool is_ancestor_of(const FieldTower& other) const;

    friend bool operator==(const FieldTower& a, const FieldTower& b) { return a.d_ == b.d_; }

    std::string describe() const;

    const TowerData* data() const { return d_.get(); }

   private:
    explicit FieldTower(std::shared_ptr<const TowerData> d) : d_(std::move(d)) {}
    std::shared_ptr<const TowerData> d_;
    friend struct TowerData;
};

struct TowerData {
    std::shared_ptr<const TowerData> parent;
    std::vector<std::string> vars;
    std::vector<std::string> sqrt_names;
    std::vector<Comps> sqrt_squares;
    std::vector<Comps> products;  // B_g
    DepthGuard guard;
    int quadric_count = 0;
};

class FieldElement {
   public:
    FieldElement() = default;
    explicit FieldElement(FieldTower tower) : tower_(std::move(tower)) {}
    FieldElement(FieldTower tower, Comps comps);
    FieldElement(FieldTower tower, const RatFunc2& r);

    static FieldElement zero(const FieldTower& tw) { return FieldElement(tw); }
    static FieldElement one(const FieldTower& tw);
    static FieldElement var(const FieldTower& tw, int i);
    static FieldElement sqrt_gen(const FieldTower& tw, int i);

    const FieldTower& tower() const noexcept { return tower_; }
    const Comps& comps() const noexcept { return comps_; }
    bool is_zero() const noexcept { return comps_.empty(); }
    bool is_one() const;
    /* true when no s_i occurs */
    bool is_rational() const noexcept { return comps_.empty() || (comps_.size() == 1 && comps_.begin()->first == 0); }
    RatFunc2 rational_part() const;

    /* same element over a descendant tower */
    FieldElement embed(const FieldTower& tw) const;

    friend FieldElement operator+(const FieldElement& a, const FieldElement& b);
    friend FieldElement operator*(const FieldElement& a, const FieldElement& b);
    friend FieldElement operator/(const FieldElement& a, const FieldElement& b) { return a * b.inv(); }
    FieldElement& operator+=(const FieldElement& b) { return *this = *this + b; }
    FieldElement& operator*=(const FieldElement& b) { return *this = *this * b; }
    FieldElement inv() const;
    FieldElement square() const;

    friend bool operator==(const FieldElement& a, const FieldElement& b);

    CoordVector coordinates() const;
    std::string to_string() const;

   private:
    FieldTower tower_;
    Comps comps_;
};

enum class ElemOp { Add, Mul, Inv };
FieldElement elem_arith(ElemOp op, const FieldElement& a, const FieldElement& b = FieldElement());

/* the descendant of the two towers; TowerMismatch if they are unrelated */
FieldTower common_tower(const FieldTower& a, const FieldTower& b);

/* rebuild an element from its coordinates (inverse of coordinates()) */
FieldElement reassemble(const FieldTower& tw, const CoordVector& c);

bool is_square(const FieldElement& a, const RankMode& mode);
bool is_square(const FieldElement& a);

/* s_i evaluated as sqrt of the value of b_i, inductively */
uint64_t eval_tower(const FieldElement& a, const GF2kPoint& pt);
std::optional<uint64_t> try_eval_tower(const FieldElement& a, const GF2k& field, const std::vector<uint64_t>& values);

/* substitute polynomial maps for rational variables of a rational function */
RatFunc2 substitute(const RatFunc2& r, const std::vector<std::optional<RatFunc2>>& images, int arity);

}  // namespace qlq

#endif
