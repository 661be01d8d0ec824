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

#ifndef QLQ_EXPR_HPP
#define QLQ_EXPR_HPP

#include <memory>
#include <string>
#include <vector>

#include "qlq/field_tower.hpp"

namespace qlq {

/* element syntax: sums, products, quotients, integer powers, parentheses, 0/1 constants, names */
struct ElemExpr {
    enum class Kind { Num, Name, Add, Mul, Div, Pow };
    Kind kind = Kind::Num;
    int value = 0;       // Num: 0 or 1; Pow: exponent
    std::string name;    // Name
    std::vector<ElemExpr> kids;

    static ElemExpr num(int v);
    static ElemExpr var(std::string n);
    static ElemExpr binary(Kind k, ElemExpr a, ElemExpr b);
    static ElemExpr pow(ElemExpr base, int e);

    friend bool operator==(const ElemExpr&, const ElemExpr&) = default;
};

struct FormExpr {
    enum class Kind { Diag, Pfister, Perp, Otimes, Scale, Canned };
    Kind kind = Kind::Diag;
    std::vector<ElemExpr> elems;  // Diag, Pfister, Scale (one scalar)
    std::vector<FormExpr> kids;   // Perp/Otimes (two), Scale (one)
    std::string canned;           // Canned name
    std::vector<int> args;        // Canned arguments

    friend bool operator==(const FormExpr&, const FormExpr&) = default;
};

ElemExpr parse_elem_expr(const std::string& text);
FormExpr parse_form_expr(const std::string& text);

std::string print(const ElemExpr& e);
std::string print(const FormExpr& f);

/* names used by the expression, in order of first appearance; canned forms contribute theirs */
std::vector<std::string> variables(const FormExpr& f);
std::vector<std::string> variables(const ElemExpr& e);

/* canned forms written out as ordinary expressions; UnknownName for anything else */
FormExpr expand_canned(const std::string& name, const std::vector<int>& args);
bool is_canned_name(const std::string& name);

/* names resolve to rational variables or square-root generators of tw */
FieldElement eval_element(const ElemExpr& e, const FieldTower& tw);
FieldElement parse_element(const std::string& text, const FieldTower& tw);

/* the diagonal entries of f over tw, in the order orth_sum/tensor produce them */
std::vector<FieldElement> eval_form_entries(const FormExpr& f, const FieldTower& tw);

}  // namespace qlq

#endif
