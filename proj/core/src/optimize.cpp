#include "qkdrates/optimize.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "qkdrates/errors.hpp"
#include "qkdrates/keyrates.hpp"
#include "qkdrates/parallel.hpp"

namespace qkdrates {

namespace {

constexpr double kInvPhi = 0.61803398874989484820;

struct Golden {
    double x;
    double fx;
    int evaluations;
};

Golden golden_max(const std::function<double(double)>& f, double a, double b, double tol) {
    int evals = 0;
    double c = b - kInvPhi * (b - a);
    double d = a + kInvPhi * (b - a);
    double fc = f(c);
    double fd = f(d);
    evals += 2;
    while (b - a > tol) {
        if (fc >= fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - kInvPhi * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + kInvPhi * (b - a);
            fd = f(d);
        }
        ++evals;
    }
    return fc >= fd ? Golden{c, fc, evals} : Golden{d, fd, evals};
}

}  // namespace

OptResult maximize_q(const std::function<double(double)>& rate_fn, double tol) {
    constexpr int kSteps = 100;
    constexpr double kStep = 0.5 / kSteps;
    std::vector<double> values(kSteps + 1);
    parallel_for(values.size(), [&](std::size_t i) { values[i] = rate_fn(i * kStep); });
    const auto best = static_cast<int>(std::max_element(values.begin(), values.end()) - values.begin());
    OptResult r;
    r.q = best * kStep;
    r.best_value = values[best];
    r.evaluations = kSteps + 1;
    const double lo = std::max(0.0, (best - 1) * kStep);
    const double hi = std::min(0.5, (best + 1) * kStep);
    const Golden g = golden_max(rate_fn, lo, hi, tol);
    r.evaluations += g.evaluations;
    if (g.fx > r.best_value) {
        r.best_value = g.fx;
        r.q = g.x;
    }
    r.converged = true;
    return r;
}

OptResult maximize_qQ(const std::function<double(double, double)>& rate_fn, double tol) {
    constexpr int kSteps = 25;
    constexpr double kStep = 0.5 / kSteps;
    constexpr int kSide = kSteps + 1;
    std::vector<double> values(kSide * kSide);
    parallel_for(values.size(), [&](std::size_t i) { values[i] = rate_fn((i / kSide) * kStep, (i % kSide) * kStep); });
    const auto best = static_cast<int>(std::max_element(values.begin(), values.end()) - values.begin());
    OptResult r;
    r.q = (best / kSide) * kStep;
    r.Q = (best % kSide) * kStep;
    r.best_value = values[best];
    r.evaluations = kSide * kSide;
    for (int sweep = 0; sweep < 3; ++sweep) {
        const double Qfix = r.Q;
        Golden g = golden_max([&](double x) { return rate_fn(x, Qfix); }, std::max(0.0, r.q - kStep),
                              std::min(0.5, r.q + kStep), tol);
        r.evaluations += g.evaluations;
        if (g.fx > r.best_value) {
            r.best_value = g.fx;
            r.q = g.x;
        }
        const double qfix = r.q;
        g = golden_max([&](double x) { return rate_fn(qfix, x); }, std::max(0.0, r.Q - kStep),
                       std::min(0.5, r.Q + kStep), tol);
        r.evaluations += g.evaluations;
        if (g.fx > r.best_value) {
            r.best_value = g.fx;
            r.Q = g.x;
        }
    }
    r.converged = true;
    return r;
}

double bisect_threshold(const std::function<double(double)>& f, const BracketSpec& bracket, double tol) {
    double lo = bracket.lo;
    double hi = bracket.hi;
    double flo = f(lo);
    double fhi = f(hi);
    if ((flo > 0.0) == (fhi > 0.0) && bracket.hi_extended) {
        hi = *bracket.hi_extended;
        fhi = f(hi);
    }
    if ((flo > 0.0) == (fhi > 0.0)) throw BracketError("rate does not change sign inside the bracket");
    const bool positive_low = flo > 0.0;
    constexpr int kMaxIterations = 200;
    for (int it = 0; it < kMaxIterations && hi - lo > tol; ++it) {
        const double mid = 0.5 * (lo + hi);
        const double fm = f(mid);
        if ((fm > 0.0) == positive_low)
            lo = mid;
        else
            hi = mid;
    }
    if (hi - lo > tol) throw ConvergenceError("bisection did not reach the requested tolerance");
    return 0.5 * (lo + hi);
}

double protocol_rate(const PmaxQuery& qy, double p) {
    if (qy.iterated) {
        if (qy.kind != ProtocolKind::BB84) throw DomainError("iterated preprocessing is defined for BB84 only");
        auto f = [&](double q, double Q) { return bb84_iter_rate(qy.m1, qy.m2, p, q, Q).rate; };
        return qy.mode.optimize ? maximize_qQ(f).best_value : f(qy.mode.q, qy.mode.Q);
    }
    auto f = [&](double q) {
        return qy.kind == ProtocolKind::BB84 ? bb84_rate(qy.m, p, q).rate : sixstate_rate(qy.m, p, q).rate;
    };
    return qy.mode.optimize ? maximize_q(f).best_value : f(qy.mode.q);
}

double pmax_search(const PmaxQuery& query) {
    return bisect_threshold([&](double p) { return protocol_rate(query, p); }, query.bracket, query.tol_p);
}

}  // namespace qkdrates
