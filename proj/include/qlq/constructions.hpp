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

#ifndef QLQ_CONSTRUCTIONS_HPP
#define QLQ_CONSTRUCTIONS_HPP

#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "qlq/invariants.hpp"

namespace qlq {

/* enough to rebuild an instance: the operation name plus integer parameters,
   and forms as text when the operation took explicit forms */
struct Recipe {
    std::string op;
    std::vector<std::pair<std::string, long>> params;
    std::vector<std::pair<std::string, std::string>> forms;
    std::vector<std::string> log;  // extension steps and other costs
    long param(const std::string& name, long fallback = 0) const;
};

struct Expected {
    std::size_t izh = 0;
    long k = 0;
    std::size_t dim_q = 0;
    bool qp_neighbour = false;
};

struct ConstructedInstance {
    FieldTower tower;
    QuasilinearForm p, q;
    Expected expected;
    Recipe recipe;
};

/* what verify_constructed recomputed from p and q alone */
struct Measured {
    std::size_t izh = 0;
    long k = 0;
    std::size_t dim_q = 0;
    bool qp_neighbour = false;
    int lndeg_p = 0;
    int s = 0;
    bool matches(const Expected& e) const;
};

Measured measure_instance(const ConstructedInstance& inst, const RankMode& mode = default_rank_mode());

/* fresh rational variables prefix1, prefix2, ... that do not clash with tw */
FieldTower adjoin_fresh(const FieldTower& tw, const std::string& prefix, int count, std::vector<FieldElement>* out);

/* F = E(X); p = <X> + phi; q = sigma + X tau.  Needs anis(tau x phi) inside sigma. */
ConstructedInstance build_cor52(const QuasilinearForm& tau, const QuasilinearForm& phi, const QuasilinearForm& sigma,
                                const RankMode& mode = default_rank_mode());

/* tau, phi with dim anis(tau x phi) <= k + dim tau: pad anis(tau x phi) by fresh
   variables up to dim k + i and hand the result to build_cor52 */
ConstructedInstance realize_from_pair(const QuasilinearForm& tau, const QuasilinearForm& phi, long k,
                                      const RankMode& mode = default_rank_mode());

struct TensorFamily {
    FieldTower tower;
    QuasilinearForm pi, tau, phi;
    int extensions = 0;  // function field steps taken along norm forms
    std::vector<std::string> log;
};

/* r-fold pi dividing tau (dim u 2^r) and phi (dim v 2^r) with
   dim anis(tau x phi) <= (u+v-1) 2^r; 1 <= u <= v */
TensorFamily build_tensor_family(int r, int u, int v, const RankMode& mode = default_rank_mode(),
                                 DepthGuard guard = {});

struct TensorFamily2 {
    FieldTower tower;
    QuasilinearForm tau, phi;
    long bound = 0;  // the dimension bound the construction promises for anis(tau x phi)
};

/* branch 1: tau of dim i, phi an s-fold quasi-Pfister, dim anis <= a 2^s (needs i <= a 2^s).
   branch 2: tau of dim i, phi of dim d and lndeg s+1, dim anis <= a 2^(s+1)
   (needs i <= a 2^(s+1), 2^s <= d < 2^(s+1)); when d = 2^s and s >= 2 also <= 2^s + i. */
TensorFamily2 build_tensor_family2(int branch, long i, long a, int s, long d = 0);

struct RealizabilityRequest {
    int branch = 2;
    int s = 0;
    long d = 0;
    long k = 0;
    long a = 0;
    long eps = 0;
    long dim_q = 0;  // branch 1 only
    int r = 0;       // branches 4, 5
    long x = 1;      // branches 4, 5
};

ConstructedInstance realize(const RealizabilityRequest& req, const RankMode& mode = default_rank_mode());

/* "generic(4)", "quasi_pfister(2)", "qp_neighbour(2,3)", "splitting_demo(3)" over a fresh tower */
QuasilinearForm canned(const std::string& name);

/* parse a form expression; variables not in tw (or all of them if tw is absent)
   become fresh rational variables in order of appearance */
QuasilinearForm form_from_text(const std::string& text, std::optional<FieldTower> tw = std::nullopt);

/* rebuild from a recipe; cor52 recipes carry their forms as text */
ConstructedInstance replay(const Recipe& recipe, const RankMode& mode = default_rank_mode());

/* random anisotropic pair over GF(2)(x1..x_nvars) with q built partly from
   multiples of entries of p so that q over F(p) is isotropic fairly often */
std::pair<QuasilinearForm, QuasilinearForm> random_pair(std::mt19937_64& rng, int nvars, std::size_t max_dim_p,
                                                        std::size_t max_dim_q);

}  // namespace qlq

#endif
