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

#ifndef QLQ_INVARIANTS_HPP
#define QLQ_INVARIANTS_HPP

#include <optional>
#include <set>
#include <string>
#include <vector>

#include "qlq/function_field.hpp"

namespace qlq {

/* the s with 2^s < d <= 2^(s+1); -1 for d = 1 */
int dim_exponent(std::size_t d);
/* largest y with n > y * 2^r */
std::size_t y_value(std::size_t n, int r);

struct NormFormResult {
    std::vector<FieldElement> two_basis;
    int lndeg = 0;
    std::size_t ndeg = 1;
    QuasilinearForm form() const;
    FieldTower tower;
};

NormFormResult norm_form(const QuasilinearForm& f, const RankMode& mode = default_rank_mode());
int lndeg(const QuasilinearForm& f, const RankMode& mode = default_rank_mode());

/* 2-basis of the subfield spanned by gens over L^2, greedy in order */
std::vector<FieldElement> two_basis_of(const std::vector<FieldElement>& gens, const RankMode& mode);

/* similarity factors G(f) as a quasi-Pfister form; needs Exact mode */
QuasilinearForm sim_form(const QuasilinearForm& f, const RankMode& mode = RankMode::exact());

bool divides(const QuasilinearForm& pi, const QuasilinearForm& f, const RankMode& mode = default_rank_mode());
bool is_quasi_pfister(const QuasilinearForm& f, const RankMode& mode = default_rank_mode());
bool is_qp_neighbour(const QuasilinearForm& f, const RankMode& mode = default_rank_mode());

struct SplittingTower {
    std::vector<FieldTower> fields;       // F_0 .. F_h
    std::vector<QuasilinearForm> forms;   // phi_0 .. phi_h
    std::vector<std::size_t> indices;     // i_1 .. i_h
    std::size_t izh = 0;
    std::size_t i1 = 0;
    bool complete = false;
    std::string stopped;  // why the tower is partial, empty when complete
};

/* max_steps < 0 runs until the last form has dim 1 */
SplittingTower splitting_tower(const QuasilinearForm& f, int max_steps = -1,
                               const RankMode& mode = default_rank_mode());

struct Budget {
    int depth = 2;
    int candidates = 512;
};

enum class Certificate { None, LndegTooLarge, DivisibilityObstruction, CaseAnalysis };
const char* to_string(Certificate c);

struct SearchOutcome {
    enum class Status { Witness, Empty, Unknown };
    Status status = Status::Unknown;
    std::optional<QuasilinearForm> witness;
    Certificate certificate = Certificate::None;
    int tried = 0;
    std::string note;
};

/* facts about phi that the caller may already have; filled on demand otherwise */
struct FormFacts {
    std::optional<int> lndeg;
    std::optional<SplittingTower> tower;
};

bool pr_member(const QuasilinearForm& pi, const QuasilinearForm& f, const RankMode& mode = default_rank_mode());
SearchOutcome pr_status(const QuasilinearForm& f, int r, const Budget& budget = {},
                        const RankMode& mode = default_rank_mode(), FormFacts facts = {});

/* rational number p/q, used for c which is 3/4 or 3/2 in small cases */
struct Fraction {
    long num = 0;
    long den = 1;
    bool operator==(const Fraction&) const = default;
    std::string to_string() const;
};

struct CValue {
    Fraction lo, hi;  // equal unless Delta has unknowns
    bool is_interval() const { return !(lo == hi); }
    std::string to_string() const;
};

struct DeltaReport {
    std::set<int> members, non_members, unknown;
    std::vector<std::string> reasons;  // one line per decided r
    CValue c;
    int lndeg = 0;
    std::size_t izh = 0;
};

DeltaReport delta(const QuasilinearForm& f, const Budget& budget = {}, const RankMode& mode = default_rank_mode(),
                  const SplittingTower* tower = nullptr);
CValue c_invariant(const DeltaReport& d);
CValue c_invariant(const QuasilinearForm& f, const Budget& budget = {}, const RankMode& mode = default_rank_mode());

bool strong_neighbour_check(const QuasilinearForm& f, const QuasilinearForm& pi,
                            const RankMode& mode = default_rank_mode());

struct DescentResult {
    std::vector<FieldElement> at_square;  // f_i(X^2), over the input tower
    std::vector<FieldElement> at_zero;    // f_i(0)
    int rounds = 0;
};

/* sigma over K(X), X = variable var of a purely rational tower, all entries in K(X^2) */
DescentResult descend_over_rational(const QuasilinearForm& sigma, int var, const RankMode& mode = RankMode::exact());

}  // namespace qlq

#endif
