#include "ztk/ztk_c.h"

#include <cstring>
#include "json.hpp"
#include "ztk/verify.hpp"

using json = nlohmann::ordered_json;
using namespace ztk;

struct ztk_ctx {
    RunConfig cfg;
    std::string last_error;
};

namespace {

json complex_json(cplx z) { return json{{"re", z.real()}, {"im", z.imag()}}; }

Rat rat_from_json(const json& j) {
    if (j.is_number_integer()) return Rat(j.get<long long>());
    if (j.is_string()) return Rat::parse(j.get<std::string>());
    throw Error("expected an integer or a \"p/q\" string");
}

char* dup_string(const std::string& s) {
    char* out = static_cast<char*>(std::malloc(s.size() + 1));
    std::memcpy(out, s.c_str(), s.size() + 1);
    return out;
}

json record_kl(const RunConfig& cfg, const json& req) {
    RamificationSet S(cfg.s_primes);
    KlParams p(req.at("k").get<long long>(), req.at("f").get<long long>(),
               rat_from_json(req.at("xi")), rat_from_json(req.at("m")), S);
    cplx direct = global_kl(p);
    auto fac = crt_factorize(p);
    auto gb = bound_global(p);

    json factors = json::array();
    for (const auto& f : fac.factors) {
        auto lb = bound_local(f.local, S);
        factors.push_back(json{{"ell", f.ell},
                               {"u", f.local.u},
                               {"v", f.local.v},
                               {"value", complex_json(f.value)},
                               {"bound_case", lb.case_id},
                               {"bound", lb.bound},
                               {"bound_ratio", lb.ratio}});
    }
    double crt_err = std::abs(direct - fac.product) / (1.0 + std::abs(direct));
    return json{{"record", "kl"},
                {"k", p.k},
                {"f", p.f},
                {"xi", p.xi.str()},
                {"m", p.m.str()},
                {"value", complex_json(direct)},
                {"error_estimate", 1e-12 * (1.0 + std::abs(direct))},
                {"method", "definitional-sum"},
                {"crt_product", complex_json(fac.product)},
                {"crt_factors", factors},
                {"crt_ok", crt_err <= 1e-9},
                {"global_bound", json{{"gate", gb.gate},
                                      {"bound", gb.bound},
                                      {"implied_constant", gb.implied_constant},
                                      {"vanishes", gb.vanishes_exactly}}}};
}

json record_lfun(const RunConfig& cfg, const json& req) {
    RamificationSet S(cfg.s_primes);
    Rat delta = rat_from_json(req.at("delta"));
    cplx s(req.value("s", 1.0), req.value("s_im", 0.0));
    std::string via = req.value("via", "auto");
    double A = req.value("A", 0.0);

    if (via == "auto") {
        if (is_rational_square(delta)) via = "square";
        else if (s.real() > 1.2) via = "series";
        else via = "afe";
    }
    if (via == "square" || (is_rational_square(delta) && via != "series")) {
        cplx v = lfun_square(s, delta, S);
        return json{{"record", "lfun"},   {"delta", delta.str()},
                    {"s", complex_json(s)}, {"value", complex_json(v)},
                    {"error_estimate", 1e-12 * (1.0 + std::abs(v))},
                    {"method", "square-closed-form"}};
    }
    if (via == "series") {
        LSeriesParams p{delta, S, cfg.series_cutoff, cfg.tolerance};
        auto v = lfun_series(s, p);
        return json{{"record", "lfun"},   {"delta", delta.str()},
                    {"s", complex_json(s)}, {"value", complex_json(v.value)},
                    {"error_estimate", v.error},
                    {"method", "dirichlet-series"}};
    }
    auto d = decompose_discriminant(delta, S);
    double dn = abs_modified_norm_inf_q(delta, S).to_double();
    if (A <= 0) A = std::sqrt(dn);
    auto v = lfun_afe(s, d, S, A);
    return json{{"record", "lfun"},   {"delta", delta.str()},
                {"s", complex_json(s)}, {"value", complex_json(v.value)},
                {"error_estimate", v.error},
                {"method", "approximate-functional-equation"},
                {"A", A}};
}

json record_afe_check(const RunConfig& cfg, const json& req) {
    RamificationSet S(cfg.s_primes);
    Rat delta = rat_from_json(req.at("delta"));
    auto d = decompose_discriminant(delta, S);
    double dn = abs_modified_norm_inf_q(delta, S).to_double();
    std::vector<double> As{1.0, 2.0, 10.0, std::sqrt(dn)};
    if (req.contains("A_list")) {
        As.clear();
        for (const auto& a : req.at("A_list")) As.push_back(a.get<double>());
    }
    json values = json::array();
    double maxdiff = 0;
    cplx first = 0;
    for (size_t i = 0; i < As.size(); ++i) {
        auto v = lfun_afe(cplx(1.0), d, S, As[i]);
        if (i == 0) first = v.value;
        maxdiff = std::max(maxdiff, std::abs(v.value - first));
        values.push_back(json{{"A", As[i]}, {"value", complex_json(v.value)},
                              {"error_estimate", v.error}});
    }
    return json{{"record", "afe_check"},
                {"delta", delta.str()},
                {"values", values},
                {"max_spread", maxdiff},
                {"method", "afe-at-1"},
                {"pass", maxdiff < 1e-6}};
}

json record_sigma_square(const RunConfig& cfg, const json& req) {
    RamificationSet S(cfg.s_primes);
    i64 n = req.at("n").get<long long>();
    int sign = req.value("sign", 1);
    std::vector<int> nu(S.size(), 0);
    if (req.contains("nu")) {
        nu.clear();
        for (const auto& x : req.at("nu")) nu.push_back(x.get<int>());
    }
    SquareTermInstance inst(n, nu, sign, S, WeightSpec::toy(S));
    std::string via = req.value("via", "both");
    json out{{"record", "sigma_square"}, {"n", n}, {"sign", sign}};
    if (via == "direct" || via == "both") {
        auto v = sigma_square_direct(inst);
        out["direct"] = json{{"value", complex_json(v.value)},
                             {"error_estimate", v.error},
                             {"method", "kf-double-sum"}};
    }
    if (via == "residue" || via == "both") {
        auto v = sigma_square_residue(inst);
        out["residue"] = json{{"value", complex_json(v.value)},
                              {"error_estimate", v.error},
                              {"method", "laurent-residue"}};
    }
    if (via == "both") {
        cplx a = cplx(out["direct"]["value"]["re"].get<double>(),
                      out["direct"]["value"]["im"].get<double>());
        cplx b = cplx(out["residue"]["value"]["re"].get<double>(),
                      out["residue"]["value"]["im"].get<double>());
        out["rel_diff"] = std::abs(a - b) / (1.0 + std::abs(b));
    }
    return out;
}

json record_padic(const RunConfig& cfg, const json& req) {
    std::string op = req.at("what").get<std::string>();
    i64 ell = req.at("ell").get<long long>();
    if (op == "norm") {
        Rat x = rat_from_json(req.at("x"));
        return json{{"record", "padic_norm"}, {"ell", ell}, {"x", x.str()},
                    {"value", modified_norm(x, ell).str()},
                    {"error_estimate", 0.0}, {"method", "exact"}};
    }
    if (op == "frac") {
        Rat x = rat_from_json(req.at("x"));
        return json{{"record", "padic_frac"}, {"ell", ell}, {"x", x.str()},
                    {"value", frac_part(x, ell).str()},
                    {"error_estimate", 0.0}, {"method", "exact"}};
    }
    if (op == "sqrt") {
        Rat N = rat_from_json(req.at("N"));
        auto root = sqrt_padic(N, ell, cfg.padic_digits);
        json out{{"record", "padic_sqrt"}, {"ell", ell}, {"N", N.str()},
                 {"method", "hensel"}, {"error_estimate", 0.0}};
        if (root) {
            out["exists"] = true;
            out["valuation"] = root->val();
            out["unit_mod_ell3"] = root->unit_mod(std::min(3, root->precision()));
            out["precision_digits"] = root->precision();
        } else {
            out["exists"] = false;
        }
        return out;
    }
    if (op == "omega") {
        Rat y = rat_from_json(req.at("y"));
        Rat N = rat_from_json(req.at("N"));
        return json{{"record", "padic_omega"}, {"ell", ell},
                    {"value", omega_ell(y, N, ell)},
                    {"error_estimate", 0.0}, {"method", "exact"}};
    }
    if (op == "jsingular") {
        LocalSingularParams p;
        p.ell = ell;
        p.s = cplx(req.value("s", 0.0), req.value("s_im", 0.0));
        p.eta = rat_from_json(req.at("eta"));
        p.N = rat_from_json(req.at("N"));
        p.epsilon = req.value("epsilon", 0);
        if (req.contains("L")) p.L = req.at("L").get<int>();
        auto jr = j_singular(p);
        double tail = 0;
        cplx ref = j_singular_reference(p, 8, &tail);
        json terms = json::array();
        for (const auto& t : jr.terms)
            terms.push_back(json{{"A", complex_json(t.A)}, {"B", t.B.str()},
                                 {"geometric", t.geometric}});
        return json{{"record", "padic_jsingular"},
                    {"ell", ell},
                    {"case", jr.case_id},
                    {"L", jr.L},
                    {"value", complex_json(jr.value)},
                    {"error_estimate", 1e-13 * (1.0 + std::abs(jr.value))},
                    {"method", "closed-shell-decomposition"},
                    {"terms", terms},
                    {"bound_constant", jr.bound_constant},
                    {"brute_force", json{{"value", complex_json(ref)},
                                         {"tail_bound", tail},
                                         {"method", "shell-riemann-sum"}}},
                    {"agrees", std::abs(jr.value - ref) <= tail + 1e-12}};
    }
    throw Error("padic: unknown sub-operation '" + op + "'");
}

} // namespace

extern "C" {

ztk_ctx* ztk_ctx_new(void) { return new (std::nothrow) ztk_ctx(); }

void ztk_ctx_free(ztk_ctx* ctx) { delete ctx; }

int ztk_ctx_set(ztk_ctx* ctx, const char* key, const char* value) {
    if (!ctx || !key || !value) return ZTK_EUSAGE;
    try {
        RunConfig staged = ctx->cfg; // commit only when valid
        staged.set(key, value);
        if (std::string(key) == "S") RamificationSet check(staged.s_primes);
        ctx->cfg = staged;
        return ZTK_OK;
    } catch (const std::exception& e) {
        ctx->last_error = e.what();
        return ZTK_EUSAGE;
    }
}

int ztk_eval(ztk_ctx* ctx, const char* request_json, char** response_json) {
    if (!ctx || !request_json || !response_json) return ZTK_EUSAGE;
    *response_json = nullptr;
    try {
        json req = json::parse(request_json);
        std::string op = req.at("op").get<std::string>();
        json record;
        if (op == "kl") record = record_kl(ctx->cfg, req);
        else if (op == "lfun") record = record_lfun(ctx->cfg, req);
        else if (op == "afe_check") record = record_afe_check(ctx->cfg, req);
        else if (op == "sigma_square") record = record_sigma_square(ctx->cfg, req);
        else if (op == "padic") record = record_padic(ctx->cfg, req);
        else throw Error("unknown op '" + op + "'");
        json resp{{"records", json::array({record})}};
        *response_json = dup_string(resp.dump());
        return ZTK_OK;
    } catch (const std::exception& e) {
        ctx->last_error = e.what();
        return ZTK_EUSAGE;
    }
}

int ztk_verify(ztk_ctx* ctx, const char* suite, char** report_json) {
    if (!ctx || !suite || !report_json) return ZTK_EUSAGE;
    *report_json = nullptr;
    try {
        SuiteResult r = run_suite(suite, ctx->cfg);
        json rep{{"suite", r.name},
                 {"pass", r.pass},
                 {"margin", r.margin},
                 {"seconds", r.seconds},
                 {"detail", r.lines}};
        *report_json = dup_string(rep.dump());
        return r.pass ? ZTK_OK : ZTK_EFAIL;
    } catch (const std::exception& e) {
        ctx->last_error = e.what();
        return ZTK_EUSAGE;
    }
}

const char* ztk_last_error(const ztk_ctx* ctx) {
    return ctx ? ctx->last_error.c_str() : "null context";
}

void ztk_free(char* str) { std::free(str); }

} // extern "C"
