#pragma once

#include <stdexcept>
#include <string>

namespace fxinv {

/// Pricing measure a quantity is expressed under. FX quantities always carry
/// this tag so that domestic-measure and foreign-measure parameters cannot be
/// mixed up silently.
enum class Measure { domestic, foreign };

inline Measure flip(Measure m) {
    return m == Measure::domestic ? Measure::foreign : Measure::domestic;
}

inline std::string to_string(Measure m) {
    return m == Measure::domestic ? "domestic" : "foreign";
}

inline Measure measure_from_string(const std::string& s) {
    if (s == "domestic") return Measure::domestic;
    if (s == "foreign") return Measure::foreign;
    throw std::invalid_argument("unknown measure: " + s);
}

}  // namespace fxinv
