#pragma once

#include <array>

namespace plate::test {

// Published first even eigenvalues at sigma = 0.2, ell = pi/150, m = 1..10
// (six significant figures).
struct Table1Row {
    double alpha, beta;
    std::array<double, 10> lambda;
};

inline constexpr std::array<Table1Row, 3> table1_reference{{
    {1.0, 1.0, {0.960009, 15.3610, 77.767, 245.798, 600.145, 1244.59, 2306.05, 3934.57, 6303.42, 9609.09}},
    {0.5, 1.5, {0.959999, 15.3599, 77.759, 245.755, 599.982, 1244.10, 2304.82, 3931.85, 6297.92, 9598.78}},
    {0.5, 20.0, {0.959982, 15.3589, 77.747, 245.688, 599.724, 1243.34, 2302.88, 3927.53, 6289.17, 9582.33}},
}};

}  // namespace plate::test
