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

#ifndef QLQ_THEOREMS_HPP
#define QLQ_THEOREMS_HPP

#include <optional>
#include <set>
#include <string>
#include <vector>

#include "qlq/invariants.hpp"

namespace qlq {

/* Numbers the constraint checkers look at. Everything here is plain integers
   except delta, which carries the three-valued membership. */
struct InstanceProfile {
    int s = 0;  // 2^s < dim p <= 2^(s+1)
    std::size_t dim_p = 0, dim_q = 0;
    std::size_t izh = 0;
    std::size_t i1 = 0;
    int lndeg_p = 0;
    bool qp_neighbour = false;
    DeltaReport delta;
    CValue c;
    long k = 0;  // dim q - 2 i0(q over F(p))
    std::size_t i0_qfp = 0;
    int u = 0;  // 2^u is the largest power of 2 dividing izh
};

/* fill s and u from dim_p and izh; the rest is left alone */
void finish_profile(InstanceProfile& p);

/* residues mod 2^(s+2), stored as signed representatives in (-2^(s+1), 2^(s+1)] */
struct ResidueSet {
    long modulus = 1;
    std::set<long> allowed;
    long rep(long v) const;
    bool contains(long v) const { return allowed.count(rep(v)) > 0; }
};

/* +-e pairs folded together, sorted by absolute value: "+-18, +-20, 32" */
std::string format_residues(const std::vector<long>& values);

/* allowed residues of dim q mod 2^(s+2) given s, izh and k.
   qp_neighbour selects the weaker statement that only constrains mod 2^(s+1).
   For k >= izh every residue of the parity of k comes back. */
ResidueSet thm12_allowed(int s, long izh, long k, bool qp_neighbour = false);
/* residues in thm12_allowed outside the plain band [-k, k] */
std::vector<long> thm12_additional(int s, long izh, long k);

struct TableRow {
    std::string k;       // "< 12", "13", ">= 16"
    std::string values;  // "None", "+-19, +-21", "Any additional value ..."
    long k_lo = 0, k_hi = 0;  // k range covered, k_hi = -1 for open ended
    std::vector<long> additional;
};
std::vector<TableRow> residue_table(int s, long izh);
std::string residue_table_text(int s, long izh);

enum class Verdict { Pass, NotApplicable, Inconclusive, Violation };
const char* to_string(Verdict v);

bool check_separation(const InstanceProfile& p);  // true = no violation

struct Thm12Result {
    Verdict verdict = Verdict::NotApplicable;
    std::string note;
};
Thm12Result check_thm12(const InstanceProfile& p);

struct Thm41Result {
    enum class Kind { Case1, Case2, Violation, NotApplicable };
    Kind kind = Kind::NotApplicable;
    int r = -1, r2 = -1;
    long x = 0;
    long a = 0, eps = 0;
    bool uses_unknown = false;  // the witness leans on a Delta member that is not certified
    Verdict verdict() const;
    std::string to_string() const;
};
Thm41Result check_thm41(const InstanceProfile& p);

struct Cor13Result {
    bool i1_bound = true;
    bool dim_q_gt_izh = true;
    bool i0_bound = true;
    bool all() const { return i1_bound && dim_q_gt_izh && i0_bound; }
};
Cor13Result check_cor13(const InstanceProfile& p);

struct Cor42Result {
    Verdict cor42 = Verdict::NotApplicable;
    Verdict cor43 = Verdict::NotApplicable;
    Verdict cor44 = Verdict::NotApplicable;
    Verdict overall() const;
};
Cor42Result check_cor42_44(const InstanceProfile& p);

/* dim q = a 2^e + eps with |eps| <= k and a >= a_min */
bool near_multiple(long dim_q, int e, long k, long a_min = 1);

struct VerifyOptions {
    Budget budget;
    RankMode mode = default_rank_mode();
};

struct VerifyReport {
    InstanceProfile profile;
    bool separation = true;
    Thm12Result thm12;
    Thm41Result thm41;
    Cor13Result cor13;
    Cor42Result cor42;
    Verdict overall = Verdict::Pass;
};

InstanceProfile compute_profile(const QuasilinearForm& p, const QuasilinearForm& q, const VerifyOptions& opt = {});
VerifyReport check_profile(const InstanceProfile& prof);
VerifyReport verify_instance(const QuasilinearForm& p, const QuasilinearForm& q, const VerifyOptions& opt = {});

}  // namespace qlq

#endif
