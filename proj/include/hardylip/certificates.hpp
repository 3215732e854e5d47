#pragma once

#include <map>
#include <string>

namespace hardylip {

// One verified inequality: measured side, bound side, the constant that
// produced the bound, and the sample parameters that identify the check.
struct Certificate {
    std::string bound_name;
    std::string regime;
    double lhs = 0.0;
    double rhs = 0.0;
    double constant_used = 0.0;
    bool pass = false;
    std::map<std::string, double> sample;  // named scalars (complex split re/im)
};

inline bool certificate_pass(double lhs, double rhs) {
    return lhs <= rhs * (1.0 + 1e-9);
}

}  // namespace hardylip
