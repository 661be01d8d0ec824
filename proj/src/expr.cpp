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

#include "qlq/expr.hpp"

#include <cctype>
#include <set>

namespace qlq {

ElemExpr ElemExpr::num(int v) {
    ElemExpr e;
    e.kind = Kind::Num;
    e.value = v & 1;
    return e;
}

ElemExpr ElemExpr::var(std::string n) {
    ElemExpr e;
    e.kind = Kind::Name;
    e.name = std::move(n);
    return e;
}

ElemExpr ElemExpr::binary(Kind k, ElemExpr a, ElemExpr b) {
    ElemExpr e;
    e.kind = k;
    e.kids = {std::move(a), std::move(b)};
    return e;
}

ElemExpr ElemExpr::pow(ElemExpr base, int p) {
    ElemExpr e;
    e.kind = Kind::Pow;
    e.value = p;
    e.kids = {std::move(base)};
    return e;
}

namespace {

const std::set<std::string> kCanned{"generic", "quasi_pfister", "qp_neighbour", "splitting_demo"};
const std::set<std::string> kKeywords{"perp", "otimes", "scale", "pfister"};

struct Token {
    enum class Kind { End, Ident, Int, Sym };
    Kind kind = Kind::End;
    std::string text;
    std::size_t col = 0;
};

class Parser {
   public:
    explicit Parser(const std::string& s) : src_(s) { advance(); }

    ElemExpr elem() {
        // a leading sign is harmless in characteristic two
        if (is_sym("+") || is_sym("-")) advance();
        ElemExpr lhs = term();
        while (is_sym("+") || is_sym("-")) {
            advance();
            lhs = ElemExpr::binary(ElemExpr::Kind::Add, std::move(lhs), term());
        }
        return lhs;
    }

    FormExpr form() {
        FormExpr lhs = form_term();
        while (is_ident("perp")) {
            advance();
            FormExpr f;
            f.kind = FormExpr::Kind::Perp;
            f.kids = {std::move(lhs), form_term()};
            lhs = std::move(f);
        }
        return lhs;
    }

    void expect_end() {
        if (tok_.kind != Token::Kind::End) fail("unexpected '" + tok_.text + "'");
    }

   private:
    ElemExpr term() {
        ElemExpr lhs = power();
        while (is_sym("*") || is_sym("/")) {
            auto k = tok_.text == "*" ? ElemExpr::Kind::Mul : ElemExpr::Kind::Div;
            advance();
            lhs = ElemExpr::binary(k, std::move(lhs), power());
        }
        return lhs;
    }

    ElemExpr power() {
        ElemExpr base = atom();
        while (is_sym("^")) {
            advance();
            base = ElemExpr::pow(std::move(base), integer());
        }
        return base;
    }

    ElemExpr atom() {
        if (tok_.kind == Token::Kind::Int) return ElemExpr::num(integer() & 1);
        if (tok_.kind == Token::Kind::Ident) {
            if (kKeywords.count(tok_.text) || kCanned.count(tok_.text)) fail("'" + tok_.text + "' is not an element");
            std::string n = tok_.text;
            advance();
            return ElemExpr::var(n);
        }
        if (is_sym("(")) {
            advance();
            ElemExpr e = elem();
            expect_sym(")");
            return e;
        }
        fail(tok_.kind == Token::Kind::End ? "unexpected end of input" : "unexpected '" + tok_.text + "'");
    }

    FormExpr form_term() {
        FormExpr lhs = form_primary();
        while (is_ident("otimes")) {
            advance();
            FormExpr f;
            f.kind = FormExpr::Kind::Otimes;
            f.kids = {std::move(lhs), form_primary()};
            lhs = std::move(f);
        }
        return lhs;
    }

    FormExpr form_primary() {
        FormExpr f;
        if (is_sym("<")) {
            advance();
            f.kind = FormExpr::Kind::Diag;
            f.elems.push_back(elem());
            while (is_sym(",")) {
                advance();
                f.elems.push_back(elem());
            }
            expect_sym(">");
            return f;
        }
        if (is_ident("pfister")) {
            advance();
            expect_sym("(");
            f.kind = FormExpr::Kind::Pfister;
            f.elems.push_back(elem());
            while (is_sym(",")) {
                advance();
                f.elems.push_back(elem());
            }
            expect_sym(")");
            return f;
        }
        if (is_ident("scale")) {
            advance();
            expect_sym("(");
            f.kind = FormExpr::Kind::Scale;
            f.elems.push_back(elem());
            expect_sym(",");
            f.kids.push_back(form());
            expect_sym(")");
            return f;
        }
        if (tok_.kind == Token::Kind::Ident && kCanned.count(tok_.text)) {
            f.kind = FormExpr::Kind::Canned;
            f.canned = tok_.text;
            advance();
            expect_sym("(");
            f.args.push_back(integer());
            while (is_sym(",")) {
                advance();
                f.args.push_back(integer());
            }
            expect_sym(")");
            return f;
        }
        if (is_sym("(")) {
            advance();
            f = form();
            expect_sym(")");
            return f;
        }
        fail(tok_.kind == Token::Kind::End ? "unexpected end of input, expected a form" : "expected a form, got '" + tok_.text + "'");
    }

    int integer() {
        if (tok_.kind != Token::Kind::Int) fail("expected an integer");
        int v = 0;
        try {
            v = std::stoi(tok_.text);
        } catch (const std::exception&) {
            fail("integer out of range");
        }
        advance();
        return v;
    }

    bool is_sym(const char* s) const { return tok_.kind == Token::Kind::Sym && tok_.text == s; }
    bool is_ident(const char* s) const { return tok_.kind == Token::Kind::Ident && tok_.text == s; }

    void expect_sym(const char* s) {
        if (!is_sym(s)) fail(std::string("expected '") + s + "'");
        advance();
    }

    [[noreturn]] void fail(const std::string& msg) const { throw SyntaxError(tok_.col, msg); }

    void advance() {
        while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[pos_]))) ++pos_;
        tok_ = Token{};
        tok_.col = pos_;
        if (pos_ >= src_.size()) return;
        char c = src_[pos_];
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            std::size_t b = pos_;
            while (pos_ < src_.size() && (std::isalnum(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '_')) ++pos_;
            tok_.kind = Token::Kind::Ident;
            tok_.text = src_.substr(b, pos_ - b);
        } else if (std::isdigit(static_cast<unsigned char>(c))) {
            std::size_t b = pos_;
            while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) ++pos_;
            tok_.kind = Token::Kind::Int;
            tok_.text = src_.substr(b, pos_ - b);
        } else if (std::string("<>,()+-*/^").find(c) != std::string::npos) {
            tok_.kind = Token::Kind::Sym;
            tok_.text = std::string(1, c);
            ++pos_;
        } else {
            throw SyntaxError(pos_, std::string("unexpected character '") + c + "'");
        }
    }

    const std::string& src_;
    std::size_t pos_ = 0;
    Token tok_;
};

int prec(const ElemExpr& e) {
    switch (e.kind) {
        case ElemExpr::Kind::Add: return 1;
        case ElemExpr::Kind::Mul:
        case ElemExpr::Kind::Div: return 2;
        case ElemExpr::Kind::Pow: return 3;
        default: return 4;
    }
}

std::string print_at(const ElemExpr& e, int min_prec) {
    std::string s;
    switch (e.kind) {
        case ElemExpr::Kind::Num: s = std::to_string(e.value); break;
        case ElemExpr::Kind::Name: s = e.name; break;
        case ElemExpr::Kind::Add: s = print_at(e.kids[0], 1) + " + " + print_at(e.kids[1], 2); break;
        case ElemExpr::Kind::Mul: s = print_at(e.kids[0], 2) + "*" + print_at(e.kids[1], 3); break;
        case ElemExpr::Kind::Div: s = print_at(e.kids[0], 2) + "/" + print_at(e.kids[1], 3); break;
        // x^2^3 parses left to right, so a power base may itself be a power
        case ElemExpr::Kind::Pow: s = print_at(e.kids[0], 3) + "^" + std::to_string(e.value); break;
    }
    return prec(e) < min_prec ? "(" + s + ")" : s;
}

int form_prec(const FormExpr& f) {
    if (f.kind == FormExpr::Kind::Perp) return 1;
    if (f.kind == FormExpr::Kind::Otimes) return 2;
    return 3;
}

std::string print_form_at(const FormExpr& f, int min_prec) {
    std::string s;
    auto list = [](const std::vector<ElemExpr>& es) {
        std::string out;
        for (std::size_t i = 0; i < es.size(); ++i) out += (i ? ", " : "") + print(es[i]);
        return out;
    };
    switch (f.kind) {
        case FormExpr::Kind::Diag: s = "<" + list(f.elems) + ">"; break;
        case FormExpr::Kind::Pfister: s = "pfister(" + list(f.elems) + ")"; break;
        case FormExpr::Kind::Scale: s = "scale(" + print(f.elems[0]) + ", " + print(f.kids[0]) + ")"; break;
        case FormExpr::Kind::Perp: s = print_form_at(f.kids[0], 1) + " perp " + print_form_at(f.kids[1], 2); break;
        case FormExpr::Kind::Otimes: s = print_form_at(f.kids[0], 2) + " otimes " + print_form_at(f.kids[1], 3); break;
        case FormExpr::Kind::Canned: {
            s = f.canned + "(";
            for (std::size_t i = 0; i < f.args.size(); ++i) s += (i ? ", " : "") + std::to_string(f.args[i]);
            s += ")";
            break;
        }
    }
    return form_prec(f) < min_prec ? "(" + s + ")" : s;
}

void collect(const ElemExpr& e, std::vector<std::string>& out) {
    if (e.kind == ElemExpr::Kind::Name) {
        if (std::find(out.begin(), out.end(), e.name) == out.end()) out.push_back(e.name);
        return;
    }
    for (const auto& k : e.kids) collect(k, out);
}

void collect(const FormExpr& f, std::vector<std::string>& out) {
    if (f.kind == FormExpr::Kind::Canned) {
        collect(expand_canned(f.canned, f.args), out);
        return;
    }
    for (const auto& e : f.elems) collect(e, out);
    for (const auto& k : f.kids) collect(k, out);
}

ElemExpr product_of(const std::vector<ElemExpr>& factors) {
    if (factors.empty()) return ElemExpr::num(1);
    ElemExpr p = factors[0];
    for (std::size_t i = 1; i < factors.size(); ++i) p = ElemExpr::binary(ElemExpr::Kind::Mul, p, factors[i]);
    return p;
}

}  // namespace

ElemExpr parse_elem_expr(const std::string& text) {
    Parser p(text);
    ElemExpr e = p.elem();
    p.expect_end();
    return e;
}

FormExpr parse_form_expr(const std::string& text) {
    Parser p(text);
    FormExpr f = p.form();
    p.expect_end();
    return f;
}

std::string print(const ElemExpr& e) { return print_at(e, 0); }
std::string print(const FormExpr& f) { return print_form_at(f, 0); }

std::vector<std::string> variables(const FormExpr& f) {
    std::vector<std::string> out;
    collect(f, out);
    return out;
}

std::vector<std::string> variables(const ElemExpr& e) {
    std::vector<std::string> out;
    collect(e, out);
    return out;
}

bool is_canned_name(const std::string& name) { return kCanned.count(name) > 0; }

FormExpr expand_canned(const std::string& name, const std::vector<int>& args) {
    auto need = [&](std::size_t n) {
        if (args.size() != n)
            throw Error(ErrorKind::ParameterOutOfRange, name + " takes " + std::to_string(n) + " argument(s)");
        for (int a : args)
            if (a < 0 || a > 24) throw Error(ErrorKind::ParameterOutOfRange, name + " argument out of range");
    };
    auto x = [](const std::string& p, int i) { return ElemExpr::var(p + std::to_string(i)); };
    FormExpr f;
    if (name == "generic") {
        need(1);
        if (args[0] < 1) throw Error(ErrorKind::ParameterOutOfRange, "generic(n) needs n >= 1");
        for (int i = 1; i <= args[0]; ++i) f.elems.push_back(x("T", i));
        return f;
    }
    if (name == "quasi_pfister") {
        need(1);
        if (args[0] == 0) {
            f.elems.push_back(ElemExpr::num(1));
            return f;
        }
        f.kind = FormExpr::Kind::Pfister;
        for (int i = 1; i <= args[0]; ++i) f.elems.push_back(x("x", i));
        return f;
    }
    if (name == "qp_neighbour") {
        need(2);
        int n = args[0], dim = args[1];
        if (n > 20 || dim <= (1 << n) / 2 || dim > (1 << n))
            throw Error(ErrorKind::ParameterOutOfRange, "qp_neighbour(n, dim) needs 2^(n-1) < dim <= 2^n");
        // subset products of x1..xn in binary counting order
        for (int mask = 0; mask < dim; ++mask) {
            std::vector<ElemExpr> factors;
            for (int i = 0; i < n; ++i)
                if ((mask >> i) & 1) factors.push_back(x("x", i + 1));
            f.elems.push_back(product_of(factors));
        }
        return f;
    }
    if (name == "splitting_demo") {
        need(1);
        f.elems.push_back(ElemExpr::num(1));
        for (int i = 1; i <= args[0]; ++i) f.elems.push_back(x("x", i));
        return f;
    }
    throw Error(ErrorKind::UnknownName, "no canned form named " + name);
}

FieldElement eval_element(const ElemExpr& e, const FieldTower& tw) {
    switch (e.kind) {
        case ElemExpr::Kind::Num: return e.value ? FieldElement::one(tw) : FieldElement::zero(tw);
        case ElemExpr::Kind::Name: {
            if (auto i = tw.var_index(e.name)) return FieldElement::var(tw, *i);
            if (auto i = tw.sqrt_index(e.name)) return FieldElement::sqrt_gen(tw, *i);
            throw Error(ErrorKind::UnknownName, "unknown name " + e.name);
        }
        case ElemExpr::Kind::Add: return eval_element(e.kids[0], tw) + eval_element(e.kids[1], tw);
        case ElemExpr::Kind::Mul: return eval_element(e.kids[0], tw) * eval_element(e.kids[1], tw);
        case ElemExpr::Kind::Div: {
            FieldElement d = eval_element(e.kids[1], tw);
            if (d.is_zero()) throw Error(ErrorKind::DivisionByZero, "division by zero in " + print(e));
            return eval_element(e.kids[0], tw) * d.inv();
        }
        case ElemExpr::Kind::Pow: {
            FieldElement b = eval_element(e.kids[0], tw);
            FieldElement r = FieldElement::one(tw);
            for (int i = 0; i < e.value; ++i) r *= b;
            return r;
        }
    }
    return FieldElement(tw);
}

FieldElement parse_element(const std::string& text, const FieldTower& tw) { return eval_element(parse_elem_expr(text), tw); }

std::vector<FieldElement> eval_form_entries(const FormExpr& f, const FieldTower& tw) {
    std::vector<FieldElement> out;
    auto tensor = [&](const std::vector<FieldElement>& a, const std::vector<FieldElement>& b) {
        std::vector<FieldElement> r;
        for (const auto& x : a)
            for (const auto& y : b) r.push_back(x * y);
        return r;
    };
    switch (f.kind) {
        case FormExpr::Kind::Diag:
            for (const auto& e : f.elems) out.push_back(eval_element(e, tw));
            break;
        case FormExpr::Kind::Pfister:
            out.push_back(FieldElement::one(tw));
            for (const auto& e : f.elems) out = tensor(out, {FieldElement::one(tw), eval_element(e, tw)});
            break;
        case FormExpr::Kind::Perp: {
            out = eval_form_entries(f.kids[0], tw);
            auto b = eval_form_entries(f.kids[1], tw);
            out.insert(out.end(), b.begin(), b.end());
            break;
        }
        case FormExpr::Kind::Otimes:
            out = tensor(eval_form_entries(f.kids[0], tw), eval_form_entries(f.kids[1], tw));
            break;
        case FormExpr::Kind::Scale: {
            FieldElement a = eval_element(f.elems[0], tw);
            if (a.is_zero()) throw Error(ErrorKind::ZeroScalar, "scale by zero");
            for (const auto& x : eval_form_entries(f.kids[0], tw)) out.push_back(a * x);
            break;
        }
        case FormExpr::Kind::Canned: out = eval_form_entries(expand_canned(f.canned, f.args), tw); break;
    }
    return out;
}

}  // namespace qlq
