#include "gnv/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "gnv/errors.hpp"

namespace gnv {
namespace {

using Rule = boost::math::quadrature::gauss_kronrod<double, 31>;

constexpr std::size_t kMaxPieces = 4000;

struct Piece {
    double a;
    double b;
    double value;
    double error;
    double l1;
};

Piece evaluate(const Integrand& f, double a, double b) {
    Piece p{a, b, 0.0, 0.0, 0.0};
    // max_depth 0: a single 31-point Kronrod rule with its embedded Gauss error estimate
    p.value = Rule::integrate(f, a, b, 0, 0.0, &p.error, &p.l1);
    // without refinement Boost leaves the error estimate on the reference interval [-1, 1]
    p.error *= 0.5 * (b - a);
    if (!std::isfinite(p.value)) {
        throw IntegrationError("integrand produced a non-finite value", std::numeric_limits<double>::infinity());
    }
    return p;
}

}  // namespace

// Global adaptive bisection: always split the piece with the largest error estimate, stop once
// the summed estimate is below rel_tol * L1 or below what round-off allows.
QuadratureResult integrate_adaptive(const Integrand& f, double a, double b, double rel_tol) {
    if (a == b) {
        return {};
    }
    const auto by_error = [](const Piece& x, const Piece& y) { return x.error < y.error; };
    std::vector<Piece> heap{evaluate(f, a, b)};
    double value = heap.front().value, error = heap.front().error, l1 = heap.front().l1;
    const auto done = [&] {
        const double floor = 50.0 * std::numeric_limits<double>::epsilon() * l1;
        return error <= std::max(rel_tol * l1, floor);
    };
    while (!done()) {
        if (heap.size() >= kMaxPieces) {
            throw IntegrationError("adaptive quadrature did not converge", l1 > 0.0 ? error / l1 : error);
        }
        std::pop_heap(heap.begin(), heap.end(), by_error);
        const Piece worst = heap.back();
        heap.pop_back();
        const double mid = 0.5 * (worst.a + worst.b);
        if (!(mid > worst.a && mid < worst.b)) {
            throw IntegrationError("adaptive quadrature ran out of resolution", l1 > 0.0 ? error / l1 : error);
        }
        const Piece left = evaluate(f, worst.a, mid);
        const Piece right = evaluate(f, mid, worst.b);
        value += left.value + right.value - worst.value;
        error += left.error + right.error - worst.error;
        l1 += left.l1 + right.l1 - worst.l1;
        for (const Piece& p : {left, right}) {
            heap.push_back(p);
            std::push_heap(heap.begin(), heap.end(), by_error);
        }
    }
    // re-sum to drop the drift of the running updates
    value = 0.0;
    error = 0.0;
    for (const Piece& p : heap) {
        value += p.value;
        error += p.error;
    }
    return {value, error};
}

double integrate_left_singular(const Integrand& f, double alpha, double a, double b,
                               double rel_tol) {
    if (!(alpha > -1.0 && alpha <= 0.0)) {
        throw DomainError("left-singular exponent must lie in (-1, 0]");
    }
    if (b <= a) {
        return 0.0;
    }
    const double p = 1.0 / (1.0 + alpha);
    // (u - a)^alpha du = p dv
    const double upper = std::pow(b - a, 1.0 + alpha);
    const auto g = [&](double v) { return p * f(a + std::pow(v, p)); };
    return integrate_adaptive(g, 0.0, upper, rel_tol).value;
}

}  // namespace gnv
