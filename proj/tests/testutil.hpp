#pragma once

#include <cstdlib>
#include <string>

#include "cvqkd/rng.hpp"

namespace testutil {

inline std::string catalog_dir() {
    const char* env = std::getenv("CVQKD_CATALOG_DIR");
    return env ? std::string(env) : std::string("codes");
}

inline std::string catalog_manifest() { return catalog_dir() + "/catalog.txt"; }

// Mean and (sample) variance of a container of doubles.
template <class C>
double mean_of(const C& v) {
    double s = 0;
    for (double x : v) s += x;
    return s / static_cast<double>(v.size());
}

template <class C>
double variance_of(const C& v) {
    const double m = mean_of(v);
    double s = 0;
    for (double x : v) s += (x - m) * (x - m);
    return s / static_cast<double>(v.size() - 1);
}

}  // namespace testutil
