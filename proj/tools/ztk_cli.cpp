// ztk command-line tool; talks to the core exclusively through the C API.
#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "ztk/ztk_c.h"

using json = nlohmann::ordered_json;

namespace {

struct CtxGuard {
    ztk_ctx* ctx = ztk_ctx_new();
    ~CtxGuard() { ztk_ctx_free(ctx); }
};

int usage_error(ztk_ctx* ctx, const std::string& where) {
    std::fprintf(stderr, "ztk %s: %s\n", where.c_str(), ztk_last_error(ctx));
    return ZTK_EUSAGE;
}

// flat "key = value" config file
int apply_config_file(ztk_ctx* ctx, const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        std::fprintf(stderr, "ztk: cannot open config file %s\n", path.c_str());
        return ZTK_EUSAGE;
    }
    std::string line;
    while (std::getline(in, line)) {
        auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        auto eq = line.find('=');
        if (eq == std::string::npos) continue;
        auto trim = [](std::string s) {
            size_t b = s.find_first_not_of(" \t");
            size_t e = s.find_last_not_of(" \t");
            return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
        };
        std::string key = trim(line.substr(0, eq)), value = trim(line.substr(eq + 1));
        if (key.empty()) continue;
        if (ztk_ctx_set(ctx, key.c_str(), value.c_str()) != ZTK_OK)
            return usage_error(ctx, "config");
    }
    return ZTK_OK;
}

// print each record of a response as one JSON line
void print_records(const char* response) {
    json resp = json::parse(response);
    for (const auto& rec : resp.at("records")) std::cout << rec.dump() << "\n";
}

int run_eval(ztk_ctx* ctx, const json& request) {
    char* response = nullptr;
    int rc = ztk_eval(ctx, request.dump().c_str(), &response);
    if (rc != ZTK_OK) return usage_error(ctx, request.value("op", "eval"));
    print_records(response);
    ztk_free(response);
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"computational kernel for partial Zagier L-functions, generalized "
                 "Kloosterman sums and l-adic singular integrals"};
    app.require_subcommand(1);

    CtxGuard guard;
    ztk_ctx* ctx = guard.ctx;

    std::string s_primes = "2", config_file;
    unsigned long long seed = 1;
    app.add_option("--S", s_primes, "ramified primes, comma separated (must contain 2)");
    app.add_option("--seed", seed, "RNG seed for sampled suites");
    app.add_option("--config", config_file, "flat key=value configuration file");

    // kl
    auto* kl = app.add_subcommand("kl", "generalized Kloosterman sum with CRT factors and bounds");
    long long kl_k = 1, kl_f = 1;
    std::string kl_xi = "0", kl_m = "0";
    kl->add_option("--k", kl_k)->required();
    kl->add_option("--f", kl_f)->required();
    kl->add_option("--xi", kl_xi, "xi in Z^S as integer or p/q")->required();
    kl->add_option("--m", kl_m, "m in Z^S as integer or p/q")->required();

    // lfun
    auto* lf = app.add_subcommand("lfun", "partial Zagier L-function value");
    std::string lf_delta = "5", lf_via = "auto";
    double lf_s = 1.0, lf_sim = 0.0, lf_A = 0.0;
    lf->add_option("--delta", lf_delta)->required();
    lf->add_option("--s", lf_s);
    lf->add_option("--s-im", lf_sim);
    lf->add_option("--via", lf_via, "series | afe | square | auto");
    lf->add_option("--A", lf_A, "AFE splitting parameter (default sqrt(|delta|'))");

    // afe-check
    auto* ac = app.add_subcommand("afe-check", "A-independence of the approximate functional equation");
    std::string ac_delta = "-3";
    std::vector<double> ac_As;
    ac->add_option("--delta", ac_delta)->required();
    ac->add_option("--A-list", ac_As, "splitting parameters to compare");

    // sigma-square
    auto* ss = app.add_subcommand("sigma-square", "square-discriminant term, both evaluation routes");
    long long ss_n = 3;
    int ss_sign = 1;
    std::string ss_via = "both";
    std::vector<int> ss_nu;
    ss->add_option("--n", ss_n)->required();
    ss->add_option("--sign", ss_sign, "+1 or -1");
    ss->add_option("--nu", ss_nu, "exponent vector over the finite places of S");
    ss->add_option("--via", ss_via, "direct | residue | both");

    // padic
    auto* pd = app.add_subcommand("padic", "l-adic primitives");
    std::string pd_what = "norm", pd_x = "1", pd_y = "0", pd_N = "1", pd_eta = "0";
    long long pd_ell = 3;
    double pd_s = 0.0, pd_sim = 0.0;
    int pd_eps = 0, pd_L = 0;
    pd->add_option("--what", pd_what, "norm | frac | sqrt | omega | jsingular")->required();
    pd->add_option("--ell", pd_ell)->required();
    pd->add_option("--x", pd_x);
    pd->add_option("--y", pd_y);
    pd->add_option("--N", pd_N);
    pd->add_option("--eta", pd_eta);
    pd->add_option("--s", pd_s);
    pd->add_option("--s-im", pd_sim);
    pd->add_option("--epsilon", pd_eps);
    pd->add_option("--L", pd_L, "shell cutoff (auto when omitted)");

    // verify
    auto* vf = app.add_subcommand("verify", "run a named invariant suite");
    std::string vf_suite;
    long long vf_nmax = 10000;
    vf->add_option("suite", vf_suite,
                   "crt | weil | kl-vanishing | mellin | afe | fe-involution | "
                   "sigma-square | local-integral | moebius | heights")
        ->required();
    vf->add_option("--nmax", vf_nmax, "range for the moebius suite");

    for (auto* sc : app.get_subcommands({})) sc->fallthrough();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return e.get_name() == "CallForHelp" ? 0 : ZTK_EUSAGE;
    }

    if (!config_file.empty()) {
        int rc = apply_config_file(ctx, config_file);
        if (rc != ZTK_OK) return rc;
    }
    if (app.count("--S") || config_file.empty()) {
        if (ztk_ctx_set(ctx, "S", s_primes.c_str()) != ZTK_OK) return usage_error(ctx, "--S");
    }
    if (app.count("--seed")) {
        if (ztk_ctx_set(ctx, "seed", std::to_string(seed).c_str()) != ZTK_OK)
            return usage_error(ctx, "--seed");
    }

    if (kl->parsed()) {
        return run_eval(ctx, json{{"op", "kl"}, {"k", kl_k}, {"f", kl_f},
                                  {"xi", kl_xi}, {"m", kl_m}});
    }
    if (lf->parsed()) {
        json req{{"op", "lfun"}, {"delta", lf_delta}, {"s", lf_s},
                 {"s_im", lf_sim}, {"via", lf_via}};
        if (lf_A > 0) req["A"] = lf_A;
        return run_eval(ctx, req);
    }
    if (ac->parsed()) {
        json req{{"op", "afe_check"}, {"delta", ac_delta}};
        if (!ac_As.empty()) req["A_list"] = ac_As;
        return run_eval(ctx, req);
    }
    if (ss->parsed()) {
        json req{{"op", "sigma_square"}, {"n", ss_n}, {"sign", ss_sign}, {"via", ss_via}};
        if (!ss_nu.empty()) req["nu"] = ss_nu;
        return run_eval(ctx, req);
    }
    if (pd->parsed()) {
        json req{{"op", "padic"}, {"what", pd_what}, {"ell", pd_ell},
                 {"x", pd_x}, {"y", pd_y}, {"N", pd_N}, {"eta", pd_eta},
                 {"s", pd_s}, {"s_im", pd_sim}, {"epsilon", pd_eps}};
        if (pd_L > 0) req["L"] = pd_L;
        return run_eval(ctx, req);
    }
    if (vf->parsed()) {
        if (ztk_ctx_set(ctx, "moebius_nmax", std::to_string(vf_nmax).c_str()) != ZTK_OK)
            return usage_error(ctx, "--nmax");
        char* report = nullptr;
        int rc = ztk_verify(ctx, vf_suite.c_str(), &report);
        if (rc == ZTK_EUSAGE) return usage_error(ctx, "verify");
        std::cout << report << "\n";
        ztk_free(report);
        return rc == ZTK_OK ? 0 : 1;
    }
    return ZTK_EUSAGE;
}
