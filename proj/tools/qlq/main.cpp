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

// qlq command line: invariants, isotropy, theorem checks, constructions and tables.
// Every report is a JSON object tagged with schema "qlq/1".

#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <random>

#include "CLI11.hpp"
#include "json.hpp"
#include "qlq/constructions.hpp"
#include "qlq/errors.hpp"
#include "qlq/theorems.hpp"

using json = nlohmann::ordered_json;
using namespace qlq;

namespace {

constexpr const char* kSchema = "qlq/1";

enum Exit { kOk = 0, kError = 1, kViolation = 2, kUnknown = 3 };

struct SessionConfig {
    uint64_t seed = 1;
    bool exact = false;
    int mc_k = 32;
    int mc_trials = 2;
    Budget budget;
    DepthGuard guard;
    std::string format = "json";

    RankMode mode() const { return exact ? RankMode::exact() : RankMode::monte_carlo(seed, mc_trials, mc_k); }
    FieldTower base() const { return FieldTower(std::vector<std::string>{}, guard); }
};

json header(const std::string& cmd) {
    json j;
    j["schema"] = kSchema;
    j["command"] = cmd;
    return j;
}

json form_json(const QuasilinearForm& f) {
    json e = json::array();
    for (const auto& x : f.entries()) e.push_back(x.to_string());
    return json{{"dim", f.dim()}, {"entries", e}};
}

json tower_json(const FieldTower& tw) {
    json sq = json::array();
    for (int i = 0; i < tw.t(); ++i)
        sq.push_back(json{{"name", tw.sqrt_names()[static_cast<std::size_t>(i)]},
                          {"square", tw.sqrt_square(i).to_string()}});
    return json{{"vars", tw.var_names()}, {"sqrt", sq}, {"quadrics", tw.quadric_count()}};
}

json set_json(const std::set<int>& s) { return json(std::vector<int>(s.begin(), s.end())); }

json delta_json(const DeltaReport& d) {
    return json{{"members", set_json(d.members)},
                {"non_members", set_json(d.non_members)},
                {"unknown", set_json(d.unknown)},
                {"reasons", d.reasons}};
}

json c_json(const CValue& c) {
    return json{{"text", c.to_string()}, {"lo", c.lo.to_string()}, {"hi", c.hi.to_string()}};
}

json recipe_json(const Recipe& r) {
    json params = json::object(), forms = json::object();
    for (const auto& [k, v] : r.params) params[k] = v;
    for (const auto& [k, v] : r.forms) forms[k] = v;
    return json{{"op", r.op}, {"params", params}, {"forms", forms}, {"log", r.log}};
}

Recipe recipe_from_json(const json& j) {
    Recipe r;
    r.op = j.at("op").get<std::string>();
    if (j.contains("params"))
        for (auto it = j["params"].begin(); it != j["params"].end(); ++it) r.params.emplace_back(it.key(), it.value().get<long>());
    if (j.contains("forms"))
        for (auto it = j["forms"].begin(); it != j["forms"].end(); ++it)
            r.forms.emplace_back(it.key(), it.value().get<std::string>());
    return r;
}

json profile_json(const InstanceProfile& p) {
    return json{{"s", p.s},
                {"dim_p", p.dim_p},
                {"dim_q", p.dim_q},
                {"izh", p.izh},
                {"i1", p.i1},
                {"lndeg_p", p.lndeg_p},
                {"qp_neighbour", p.qp_neighbour},
                {"delta", delta_json(p.delta)},
                {"c", c_json(p.c)},
                {"k", p.k},
                {"i0_qfp", p.i0_qfp},
                {"u", p.u}};
}

json report_json(const VerifyReport& r) {
    return json{{"profile", profile_json(r.profile)},
                {"separation", r.separation ? "pass" : "violation"},
                {"thm12", json{{"verdict", to_string(r.thm12.verdict)}, {"note", r.thm12.note}}},
                {"thm41", json{{"verdict", to_string(r.thm41.verdict())}, {"detail", r.thm41.to_string()}}},
                {"cor13", json{{"i1_bound", r.cor13.i1_bound},
                               {"dim_q_gt_izh", r.cor13.dim_q_gt_izh},
                               {"i0_bound", r.cor13.i0_bound}}},
                {"cor42_44", json{{"cor42", to_string(r.cor42.cor42)},
                                  {"cor43", to_string(r.cor42.cor43)},
                                  {"cor44", to_string(r.cor42.cor44)}}},
                {"overall", to_string(r.overall)}};
}

int exit_for(Verdict v) {
    if (v == Verdict::Violation) return kViolation;
    if (v == Verdict::Inconclusive) return kUnknown;
    return kOk;
}

json instance_json(const ConstructedInstance& inst) {
    return json{{"tower", tower_json(inst.tower)},
                {"p", inst.p.to_string()},
                {"q", inst.q.to_string()},
                {"expected", json{{"izh", inst.expected.izh},
                                  {"k", inst.expected.k},
                                  {"dim_q", inst.expected.dim_q},
                                  {"qp_neighbour", inst.expected.qp_neighbour}}},
                {"recipe", recipe_json(inst.recipe)}};
}

/* p and q over one tower: q's new variables are appended after p's */
std::pair<QuasilinearForm, QuasilinearForm> parse_pair(const SessionConfig& cfg, const std::string& a,
                                                       const std::string& b) {
    QuasilinearForm fa = form_from_text(a, cfg.base());
    QuasilinearForm fb = form_from_text(b, fa.tower());
    return {fa.embed(fb.tower()), fb};
}

void emit(const SessionConfig& cfg, const json& j) {
    (void)cfg;
    std::cout << j.dump(2) << "\n";
}

/* ---- subcommands ---- */

int cmd_compute(const SessionConfig& cfg, const std::string& text, int steps) {
    RankMode mode = cfg.mode();
    QuasilinearForm f = form_from_text(text, cfg.base());
    json j = header("compute");
    j["form"] = form_json(f);
    j["dim"] = f.dim();
    j["i0"] = isotropy_index(f, mode);
    QuasilinearForm an = anisotropic_part(f, mode);
    j["anis_dim"] = an.dim();
    int code = kOk;
    if (an.dim() >= 2) {
        NormFormResult nf = norm_form(an, mode);
        j["lndeg"] = nf.lndeg;
        j["ndeg"] = nf.ndeg;
        SplittingTower st = splitting_tower(an, steps, mode);
        j["izh"] = st.izh;
        j["i1"] = st.i1;
        j["indices"] = st.indices;
        j["tower_complete"] = st.complete;
        if (!st.stopped.empty()) j["tower_stopped"] = st.stopped;
        DeltaReport d = delta(an, cfg.budget, mode, &st);
        j["delta"] = delta_json(d);
        j["c"] = c_json(d.c);
        j["is_qp"] = is_quasi_pfister(an, mode);
        j["is_qp_neighbour"] = is_qp_neighbour(an, mode);
        if (!d.unknown.empty()) code = kUnknown;
    } else {
        j["note"] = "anisotropic part has dimension < 2; splitting invariants are not defined";
    }
    emit(cfg, j);
    return code;
}

int cmd_tower(const SessionConfig& cfg, const std::string& text, int steps) {
    RankMode mode = cfg.mode();
    QuasilinearForm f = anisotropic_part(form_from_text(text, cfg.base()), mode);
    if (f.dim() < 2) throw Error(ErrorKind::PreconditionFailed, "anisotropic part has dimension < 2");
    SplittingTower st = splitting_tower(f, steps, mode);
    json j = header("tower");
    json levels = json::array();
    for (std::size_t h = 0; h < st.forms.size(); ++h) {
        json l{{"level", h}, {"field", st.fields[h].describe()}, {"form", form_json(st.forms[h])}};
        if (h > 0) l["index"] = st.indices[h - 1];
        levels.push_back(l);
    }
    j["levels"] = levels;
    j["indices"] = st.indices;
    j["izh"] = st.izh;
    j["i1"] = st.i1;
    j["complete"] = st.complete;
    if (!st.stopped.empty()) j["stopped"] = st.stopped;
    emit(cfg, j);
    return kOk;
}

int cmd_isotropy(const SessionConfig& cfg, const std::string& phi_text, const std::string& psi_text) {
    RankMode mode = cfg.mode();
    auto [phi, psi] = parse_pair(cfg, phi_text, psi_text);
    std::size_t i0 = i0_over(phi, psi, mode);
    json j = header("isotropy");
    j["i0"] = i0;
    j["d"] = static_cast<long>(phi.dim()) - 2 * static_cast<long>(i0);
    j["anis_dim"] = phi.dim() - i0;
    emit(cfg, j);
    return kOk;
}

int cmd_verify(const SessionConfig& cfg, const std::string& p_text, const std::string& q_text) {
    auto [p, q] = parse_pair(cfg, p_text, q_text);
    VerifyOptions opt{cfg.budget, cfg.mode()};
    VerifyReport rep = verify_instance(p, q, opt);
    json j = header("verify");
    j["p"] = p.to_string();
    j["q"] = q.to_string();
    j["report"] = report_json(rep);
    emit(cfg, j);
    return exit_for(rep.overall);
}

int cmd_construct(const SessionConfig& cfg, const RealizabilityRequest& req, const std::string& out) {
    RankMode mode = cfg.mode();
    ConstructedInstance inst = realize(req, mode);
    json j = header("construct");
    json body = instance_json(inst);
    for (auto it = body.begin(); it != body.end(); ++it) j[it.key()] = it.value();
    int code = kOk;
    try {
        Measured m = measure_instance(inst, mode);
        j["measured"] = json{{"izh", m.izh}, {"k", m.k}, {"dim_q", m.dim_q}, {"qp_neighbour", m.qp_neighbour},
                             {"lndeg_p", m.lndeg_p}, {"s", m.s}};
        j["verified"] = m.matches(inst.expected);
        if (!m.matches(inst.expected)) code = kError;
    } catch (const Error& e) {
        if (e.kind() != ErrorKind::DepthGuardExceeded) throw;
        j["measured"] = nullptr;
        j["verified"] = false;
        j["note"] = e.what();
        code = kUnknown;
    }
    if (!out.empty()) {
        std::ofstream f(out);
        if (!f) throw Error(ErrorKind::PreconditionFailed, "cannot write " + out);
        f << j.dump(2) << "\n";
    }
    emit(cfg, j);
    return code;
}

int cmd_tables(const SessionConfig& cfg, int s, const std::vector<long>& izhs, long mod) {
    if (mod != 0 && mod != (1L << (s + 2)))
        throw Error(ErrorKind::ParameterOutOfRange, "--mod must be 2^(s+2) = " + std::to_string(1L << (s + 2)));
    if (cfg.format == "text") {
        bool first = true;
        for (long izh : izhs) {
            if (!first) std::cout << "\n";
            first = false;
            std::cout << residue_table_text(s, izh);
        }
        return kOk;
    }
    json j = header("tables");
    j["s"] = s;
    j["modulus"] = 1L << (s + 2);
    json tabs = json::array();
    for (long izh : izhs) {
        json rows = json::array();
        for (const auto& r : residue_table(s, izh))
            rows.push_back(json{{"k", r.k}, {"values", r.values}, {"additional", r.additional}});
        tabs.push_back(json{{"izh", izh}, {"rows", rows}});
    }
    j["tables"] = tabs;
    emit(cfg, j);
    return kOk;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

int cmd_bench(const SessionConfig& cfg, int instances) {
    RankMode mode = cfg.mode(), ex = RankMode::exact();
    json j = header("bench");
    json runs = json::array();
    auto run = [&](const std::string& name, auto&& fn) {
        auto t0 = std::chrono::steady_clock::now();
        json r = fn();
        r["name"] = name;
        r["seconds"] = seconds_since(t0);
        runs.push_back(r);
    };
    run("tables s=4", [&] {
        std::size_t rows = 0;
        for (long izh = 16; izh < 32; ++izh) rows += residue_table(4, izh).size();
        return json{{"rows", rows}};
    });
    run("splitting tower of a 3-fold quasi-Pfister form", [&] {
        auto st = splitting_tower(canned("quasi_pfister(3)"), -1, ex);
        return json{{"indices", st.indices}};
    });
    run("delta of generic(5)", [&] {
        auto d = delta(canned("generic(5)"), cfg.budget, ex);
        return json{{"members", set_json(d.members)}, {"c", d.c.to_string()}};
    });
    run("realize branches 2 and 3", [&] {
        int ok = 0;
        for (int br : {2, 3})
            for (long e : {1L, -1L}) {
                RealizabilityRequest rq{br, 2, br == 2 ? 4L : 5L, 1, 1, e};
                auto inst = realize(rq, ex);
                ok += measure_instance(inst, ex).matches(inst.expected);
            }
        return json{{"verified", ok}};
    });
    run("random verification", [&] {
        std::mt19937_64 rng(cfg.seed);
        int viol = 0;
        VerifyOptions opt{cfg.budget, mode};
        for (int i = 0; i < instances; ++i) {
            auto [p, q] = random_pair(rng, 3, 6, 8);
            viol += verify_instance(p, q, opt).overall == Verdict::Violation;
        }
        return json{{"instances", instances}, {"violations", viol}};
    });
    j["runs"] = runs;
    emit(cfg, j);
    return kOk;
}

std::vector<std::string> split_names(const json& vars) {
    std::vector<std::string> out;
    for (const auto& v : vars) out.push_back(v.get<std::string>());
    return out;
}

int cmd_corpus_run(const SessionConfig& cfg, const std::string& dir) {
    namespace fs = std::filesystem;
    if (!fs::is_directory(dir)) throw Error(ErrorKind::PreconditionFailed, dir + " is not a directory");
    std::vector<fs::path> files;
    for (const auto& e : fs::directory_iterator(dir))
        if (e.path().extension() == ".json") files.push_back(e.path());
    std::sort(files.begin(), files.end());

    VerifyOptions opt{cfg.budget, cfg.mode()};
    json j = header("corpus-run");
    json results = json::array();
    int code = kOk;
    auto worsen = [&](int c) {
        // violation beats unknown beats error beats ok
        static const int rank[] = {0, 1, 3, 2};
        if (rank[c] > rank[code]) code = c;
    };
    for (const auto& path : files) {
        json r{{"file", path.filename().string()}};
        try {
            std::ifstream in(path);
            json inst = json::parse(in);
            const json& tw = inst.at("tower");
            std::optional<std::pair<QuasilinearForm, QuasilinearForm>> pq;
            if (tw.contains("sqrt") && !tw["sqrt"].empty()) {
                // square roots do not round trip through text; rebuild from the recipe
                ConstructedInstance ci = replay(recipe_from_json(inst.at("recipe")), opt.mode);
                pq.emplace(ci.p, ci.q);
            } else {
                FieldTower base(split_names(tw.at("vars")), cfg.guard);
                pq.emplace(form_from_text(inst.at("p").get<std::string>(), base),
                           form_from_text(inst.at("q").get<std::string>(), base));
            }
            VerifyReport rep = verify_instance(pq->first, pq->second, opt);
            r["overall"] = to_string(rep.overall);
            r["k"] = rep.profile.k;
            r["izh"] = rep.profile.izh;
            r["dim_q"] = rep.profile.dim_q;
            if (inst.contains("expected")) {
                const json& ex = inst["expected"];
                bool same = ex.value("k", -1L) == rep.profile.k && ex.value("izh", 0UL) == rep.profile.izh &&
                            ex.value("dim_q", 0UL) == rep.profile.dim_q;
                r["matches_expected"] = same;
                if (!same) worsen(kError);
            }
            worsen(exit_for(rep.overall));
        } catch (const std::exception& e) {
            r["error"] = e.what();
            worsen(kError);
        }
        results.push_back(r);
    }
    j["results"] = results;
    emit(cfg, j);
    return code;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"qlq: quasilinear quadratic forms in characteristic 2"};
    app.require_subcommand(1);
    SessionConfig cfg;
    if (const char* env = std::getenv("QLQ_SEED")) cfg.seed = std::strtoull(env, nullptr, 10);
    int max_generators = cfg.guard.max_generators;
    app.add_option("--seed", cfg.seed, "seed for Monte Carlo rank and random instances (env QLQ_SEED)");
    app.add_flag("--exact", cfg.exact, "route every rank computation through exact elimination");
    app.add_option("--mc-k", cfg.mc_k, "Monte Carlo field degree")->check(CLI::Range(8, 63));
    app.add_option("--mc-trials", cfg.mc_trials, "Monte Carlo trials")->check(CLI::PositiveNumber);
    app.add_option("--budget", cfg.budget.candidates, "candidate forms tried per P_r search");
    app.add_option("--depth", cfg.budget.depth, "combination depth of the P_r search");
    app.add_option("--max-generators", max_generators, "tower size limit m + t");
    app.add_option("--format", cfg.format, "json or text")->check(CLI::IsMember({"json", "text"}));

    std::string form, phi, psi, p, q, out, dir;
    int steps = -1, instances = 20;

    auto* compute = app.add_subcommand("compute", "invariants of one form");
    compute->add_option("--form", form, "form expression")->required();
    int compute_steps = 1;
    compute->add_option("--steps", compute_steps, "splitting tower steps, -1 for all");

    auto* tower = app.add_subcommand("tower", "Knebusch splitting tower");
    tower->add_option("--form", form, "form expression")->required();
    tower->add_option("--steps", steps, "steps, -1 for all");

    auto* iso = app.add_subcommand("isotropy", "isotropy of phi over the function field of psi");
    iso->add_option("--phi", phi)->required();
    iso->add_option("--psi", psi)->required();

    auto* verify = app.add_subcommand("verify", "check the constraint theorems on a pair (p, q)");
    verify->add_option("--p", p)->required();
    verify->add_option("--q", q)->required();

    RealizabilityRequest req;
    auto* construct = app.add_subcommand("construct", "realize (s, Izh, dim q, k) by an explicit instance");
    construct->add_option("--branch", req.branch)->required()->check(CLI::Range(1, 5));
    construct->add_option("--s", req.s)->required();
    construct->add_option("--d", req.d, "target Izh(p)")->required();
    construct->add_option("--k", req.k)->required();
    construct->add_option("--a", req.a);
    construct->add_option("--eps", req.eps);
    construct->add_option("--dim-q", req.dim_q, "branch 1");
    construct->add_option("--r", req.r, "branches 4 and 5");
    construct->add_option("--x", req.x, "branches 4 and 5");
    construct->add_option("--out", out, "also write the instance JSON here");

    int s = 4;
    long mod = 0;
    std::vector<long> izhs;
    std::string tables_format = "text";
    auto* tables = app.add_subcommand("tables", "allowed residues of dim q beyond [-k, k]");
    tables->add_option("--s", s);
    tables->add_option("--izh", izhs)->required()->delimiter(',');
    tables->add_option("--mod", mod, "must equal 2^(s+2)");
    tables->add_option("--format", tables_format)->check(CLI::IsMember({"json", "text"}));

    auto* bench = app.add_subcommand("bench", "time the standard workloads");
    bench->add_option("--instances", instances);

    auto* corpus = app.add_subcommand("corpus-run", "verify every instance JSON in a directory");
    corpus->add_option("--dir", dir)->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? kOk : kError;
    }
    cfg.guard.max_generators = max_generators;
    default_rank_mode() = cfg.mode();

    try {
        if (*compute) return cmd_compute(cfg, form, compute_steps);
        if (*tower) return cmd_tower(cfg, form, steps);
        if (*iso) return cmd_isotropy(cfg, phi, psi);
        if (*verify) return cmd_verify(cfg, p, q);
        if (*construct) return cmd_construct(cfg, req, out);
        if (*tables) {
            SessionConfig tc = cfg;
            tc.format = tables_format;
            return cmd_tables(tc, s, izhs, mod);
        }
        if (*bench) return cmd_bench(cfg, instances);
        if (*corpus) return cmd_corpus_run(cfg, dir);
    } catch (const SyntaxError& e) {
        json j = header("error");
        j["error"] = json{{"kind", "SyntaxError"}, {"column", e.column()}, {"message", e.what()}};
        std::cout << j.dump(2) << "\n";
        return kError;
    } catch (const Error& e) {
        json j = header("error");
        j["error"] = json{{"kind", to_string(e.kind())}, {"message", e.what()}};
        std::cout << j.dump(2) << "\n";
        return kError;
    } catch (const std::exception& e) {
        json j = header("error");
        j["error"] = json{{"kind", "Internal"}, {"message", e.what()}};
        std::cout << j.dump(2) << "\n";
        return kError;
    }
    return kError;
}
