#include "plate/entire_basis.hpp"

#include <cmath>

#include "plate/errors.hpp"

namespace plate {

namespace {

struct Pair {
    double c;
    double s;
};

Pair base(double x, double shift, double t)
{
    if (x > 0.0) {
        const double r = std::sqrt(x);
        if (shift > 0.0) {
            const double ep = std::exp(r * (t - shift));
            const double em = std::exp(-r * (t + shift));
            return {0.5 * (ep + em), 0.5 * (ep - em) / r};
        }
        return {std::cosh(r * t), std::sinh(r * t) / r};
    }
    if (x < 0.0) {
        const double r = std::sqrt(-x);
        return {std::cos(r * t), std::sin(r * t) / r};
    }
    return {1.0, t};
}

}  // namespace

// C' = x S, S' = C
double EntireBasis::even(double t, int k) const
{
    const Pair p = base(x, shift, t);
    switch (k) {
    case 0: return p.c;
    case 1: return x * p.s;
    case 2: return x * p.c;
    case 3: return x * x * p.s;
    default: throw InvalidArgument("derivative order must be 0..3");
    }
}

double EntireBasis::odd(double t, int k) const
{
    const Pair p = base(x, shift, t);
    switch (k) {
    case 0: return p.s;
    case 1: return p.c;
    case 2: return x * p.s;
    case 3: return x * p.c;
    default: throw InvalidArgument("derivative order must be 0..3");
    }
}

}  // namespace plate
