#pragma once

#include <cmath>
#include <cstdint>
#include <string>

namespace mcbp {

// All times, loads, distances and costs are kept as 64-bit integers in
// milliunits. Instance and solution files carry plain decimals; conversion
// happens at the I/O boundary only, so every comparison inside the solver
// is bit-exact.
using Milli = std::int64_t;

constexpr Milli kMilliScale = 1000;

inline Milli to_milli(double v) { return static_cast<Milli>(std::llround(v * 1000.0)); }
inline double from_milli(Milli v) { return static_cast<double>(v) / 1000.0; }

// Fixed three-decimal rendering, avoids locale and float-formatting surprises
// when instance files must be byte-identical across runs.
inline std::string milli_to_string(Milli v) {
    bool neg = v < 0;
    unsigned long long a = neg ? static_cast<unsigned long long>(-(v + 1)) + 1ULL
                               : static_cast<unsigned long long>(v);
    unsigned long long whole = a / 1000, frac = a % 1000;
    std::string s = neg ? "-" : "";
    s += std::to_string(whole);
    if (frac != 0) {
        std::string f = std::to_string(frac);
        while (f.size() < 3) f.insert(f.begin(), '0');
        while (!f.empty() && f.back() == '0') f.pop_back();
        s += "." + f;
    }
    return s;
}

}  // namespace mcbp
