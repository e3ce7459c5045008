#pragma once

#include <cmath>
#include <random>

namespace weylcap {

// mt19937_64 output mapped to doubles with fixed arithmetic, so seeded
// streams are bit-identical across platforms.

inline double uniform_unit(std::mt19937_64& g) {
    return static_cast<double>(g() >> 11) * 0x1.0p-53;  // [0, 1)
}

inline double exponential_unit(std::mt19937_64& g) {
    return -std::log(1.0 - uniform_unit(g));
}

}  // namespace weylcap
