#include "phyred/golden.hpp"

#include <cmath>
#include <stdexcept>
#include <utility>

namespace phyred {

ScalarMinimum golden_section_minimize(const std::function<double(double)>& f, double lo, double hi, double tol) {
    if (!(tol > 0.0)) throw std::invalid_argument("golden section tolerance must be positive");
    if (lo > hi) std::swap(lo, hi);
    ScalarMinimum best{lo, f(lo), 1};
    auto consider = [&best](double x, double fx) {
        if (fx < best.value) {
            best.x = x;
            best.value = fx;
        }
    };
    if (hi == lo) return best;
    consider(hi, f(hi));
    ++best.evaluations;

    const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
    double a = lo, b = hi;
    double c = b - (b - a) * inv_phi;
    double d = a + (b - a) * inv_phi;
    double fc = f(c), fd = f(d);
    best.evaluations += 2;

    while (b - a > tol) {
        if (fc < fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - (b - a) * inv_phi;
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + (b - a) * inv_phi;
            fd = f(d);
        }
        ++best.evaluations;
    }
    consider(c, fc);
    consider(d, fd);
    const double mid = 0.5 * (a + b);
    consider(mid, f(mid));
    ++best.evaluations;
    return best;
}

}  // namespace phyred
