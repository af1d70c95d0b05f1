#pragma once

// Globally adaptive Gauss-Kronrod (7/15) quadrature on finite intervals.

#include <functional>

namespace cxhess::quad {

struct Result {
    double value = 0.0;
    double error = 0.0;   // estimated absolute error
    int intervals = 0;
};

struct Options {
    double abs_tol = 1e-10;
    double rel_tol = 1e-13;
    int max_intervals = 4000;
};

// Splits the interval with the largest error estimate until
// error <= max(abs_tol, rel_tol |value|). Throws QuadratureError when the
// interval budget runs out.
Result integrate(const std::function<double(double)>& f, double a, double b, const Options& options = {});

// Single 15-point Kronrod rule; error is |K15 - G7|.
Result kronrod15(const std::function<double(double)>& f, double a, double b);

} // namespace cxhess::quad
