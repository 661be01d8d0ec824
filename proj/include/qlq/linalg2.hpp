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

#ifndef QLQ_LINALG2_HPP
#define QLQ_LINALG2_HPP

#include <cstdint>
#include <optional>
#include <vector>

#include "qlq/field_tower.hpp"

namespace qlq {

struct RankMode {
    enum class Kind { MonteCarlo, Exact };
    Kind kind = Kind::MonteCarlo;
    int trials = 2;
    int k = 32;
    uint64_t seed = 0x9e3779b97f4a7c15ull;

    static RankMode exact() {
        RankMode m;
        m.kind = Kind::Exact;
        return m;
    }
    static RankMode monte_carlo(uint64_t seed, int trials = 2, int k = 32) {
        RankMode m;
        m.kind = Kind::MonteCarlo;
        m.seed = seed;
        m.trials = trials;
        m.k = k;
        return m;
    }
    bool is_exact() const noexcept { return kind == Kind::Exact; }
};

/* process-wide default used by the overloads without an explicit mode */
RankMode& default_rank_mode();

struct RankResult {
    std::size_t rank = 0;
    bool exact = false;
    /* Schwartz-Zippel bound on under-reporting; 0 when exact or full rank */
    double failure_bound = 0.0;
    bool fell_back = false;  // MonteCarlo gave up on zero denominators
};

using RatMatrix = std::vector<std::vector<RatFunc2>>;

RankResult rank_backend(const RatMatrix& m, const RankMode& mode);

struct SpanResult {
    std::size_t dim = 0;                 // over L^2
    std::vector<std::size_t> independent;  // greedy left-to-right
    std::size_t rows_rank = 0;           // over R^2
    bool exact = false;
    double failure_bound = 0.0;
};

SpanResult analyze_span(const std::vector<FieldElement>& elems, const RankMode& mode);

std::size_t span_dim_over_squares(const std::vector<FieldElement>& elems, const RankMode& mode);
std::vector<std::size_t> independent_subset(const std::vector<FieldElement>& elems, const RankMode& mode);
bool membership_in_square_span(const FieldElement& target, const std::vector<FieldElement>& elems,
                               const RankMode& mode);

/* basis of the intersection of the L^2-spans; Exact mode only */
std::vector<FieldElement> square_span_intersection(const std::vector<std::vector<FieldElement>>& spans,
                                                   const RankMode& mode);

/* coefficients c_i, each a square in L, with sum c_i a_i = target; exact */
std::optional<std::vector<FieldElement>> solve_in_square_span(const FieldElement& target,
                                                              const std::vector<FieldElement>& elems);

/* the R^2 rows B_g * a for every g, as coordinate vectors */
std::vector<CoordVector> square_rows(const FieldElement& a);

/* number of distinct labels among the rows of elems; guarded */
std::size_t occupied_labels(const std::vector<FieldElement>& elems);

}  // namespace qlq

#endif
