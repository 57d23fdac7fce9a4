#pragma once

namespace plate {

// Pair of entire functions of x solving u'' = x u:
//   C(t) = cosh(sqrt(x) t),  S(t) = sinh(sqrt(x) t) / sqrt(x)
// (cos / sin / t for x <= 0). With shift > 0 and x > 0 both are multiplied
// by exp(-sqrt(x) shift) to keep large arguments finite.
struct EntireBasis {
    double x = 0.0;
    double shift = 0.0;

    // k-th derivative in t, 0 <= k <= 3
    double even(double t, int k = 0) const;
    double odd(double t, int k = 0) const;
};

}  // namespace plate
