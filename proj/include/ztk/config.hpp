#pragma once

#include <cstdlib>
#include <map>
#include <string>
#include <thread>
#include <vector>
#include "ztk/rational.hpp"

namespace ztk {

// Knobs shared by the CLI and the C API; seeded runs are byte-reproducible.
struct RunConfig {
    std::vector<i64> s_primes{2};
    int padic_digits = 32;
    double contour_height = 40.0;
    double contour_step = 0.05;
    double tolerance = 1e-9;
    i64 series_cutoff = 200000;
    i64 moebius_nmax = 10000;
    unsigned long long seed = 1;
    std::string format = "jsonl";

    void set(const std::string& key, const std::string& value) {
        if (key == "S") {
            s_primes.clear();
            size_t pos = 0;
            while (pos < value.size()) {
                size_t comma = value.find(',', pos);
                if (comma == std::string::npos) comma = value.size();
                s_primes.push_back(std::stoll(value.substr(pos, comma - pos)));
                pos = comma + 1;
            }
        } else if (key == "padic_digits") {
            padic_digits = std::stoi(value);
        } else if (key == "contour_height") {
            contour_height = std::stod(value);
        } else if (key == "contour_step") {
            contour_step = std::stod(value);
        } else if (key == "tolerance") {
            double t = std::stod(value);
            if (t <= 0) throw Error("RunConfig: tolerances must be positive");
            tolerance = t;
        } else if (key == "series_cutoff") {
            series_cutoff = std::stoll(value);
        } else if (key == "moebius_nmax") {
            moebius_nmax = std::stoll(value);
        } else if (key == "seed") {
            seed = std::stoull(value);
        } else if (key == "format") {
            format = value;
        } else {
            throw Error("RunConfig: unknown key '" + key + "'");
        }
    }
};

inline int thread_count() {
    if (const char* env = std::getenv("ZTK_THREADS")) {
        int n = std::atoi(env);
        if (n >= 1) return n;
    }
    return 1;
}

} // namespace ztk
