#include "cxhess/quadrature.hpp"

#include <array>
#include <cmath>
#include <queue>
#include <vector>

#include "cxhess/errors.hpp"

namespace cxhess::quad {

namespace {

// Kronrod abscissae (positive half, descending); even indices 1, 3, 5 are the
// Gauss points.
constexpr std::array<double, 8> xk = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
constexpr std::array<double, 8> wk = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr std::array<double, 4> wg = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Piece {
    double a, b, value, error;
    bool operator<(const Piece& o) const { return error < o.error; }
};

} // namespace

Result kronrod15(const std::function<double(double)>& f, double a, double b) {
    const double c = 0.5 * (a + b);
    const double h = 0.5 * (b - a);
    const double fc = f(c);
    double k = fc * wk[7];
    double g = fc * wg[3];
    for (int j = 0; j < 7; ++j) {
        const double dx = h * xk[static_cast<std::size_t>(j)];
        const double s = f(c - dx) + f(c + dx);
        k += wk[static_cast<std::size_t>(j)] * s;
        if (j % 2 == 1) g += wg[static_cast<std::size_t>(j / 2)] * s;
    }
    Result r;
    r.value = k * h;
    r.error = std::abs((k - g) * h);
    r.intervals = 1;
    return r;
}

Result integrate(const std::function<double(double)>& f, double a, double b, const Options& options) {
    if (!std::isfinite(a) || !std::isfinite(b)) throw ArgumentError("integrate: infinite limits");
    if (a == b) return {};
    std::priority_queue<Piece> heap;
    const Result first = kronrod15(f, a, b);
    heap.push({a, b, first.value, first.error});
    double total = first.value;
    double error = first.error;
    int intervals = 1;
    auto done = [&] { return error <= std::max(options.abs_tol, options.rel_tol * std::abs(total)); };
    while (!done()) {
        if (intervals >= options.max_intervals) throw QuadratureError("integrate: interval budget exhausted", error);
        const Piece p = heap.top();
        heap.pop();
        const double mid = 0.5 * (p.a + p.b);
        if (!(mid > p.a && mid < p.b)) throw QuadratureError("integrate: interval cannot be split further", error);
        const Result left = kronrod15(f, p.a, mid);
        const Result right = kronrod15(f, mid, p.b);
        if (!std::isfinite(left.value) || !std::isfinite(right.value))
            throw QuadratureError("integrate: non-finite integrand", error);
        total += left.value + right.value - p.value;
        error += left.error + right.error - p.error;
        heap.push({p.a, mid, left.value, left.error});
        heap.push({mid, p.b, right.value, right.error});
        ++intervals;
    }
    // Re-sum to shed the drift of the running updates.
    double sum = 0.0, err = 0.0;
    while (!heap.empty()) {
        sum += heap.top().value;
        err += heap.top().error;
        heap.pop();
    }
    return {sum, err, intervals};
}

} // namespace cxhess::quad
