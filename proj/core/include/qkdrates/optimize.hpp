#pragma once

#include <functional>
#include <optional>

#include "qkdrates/channels.hpp"

namespace qkdrates {

struct OptResult {
    double best_value = 0.0;
    double q = 0.0;
    double Q = 0.0;
    int evaluations = 0;
    bool converged = false;
};

// Grid of step 0.005 on [0, 0.5], then golden-section search around the best
// grid point down to tol.
OptResult maximize_q(const std::function<double(double)>& rate_fn, double tol = 1e-6);

// Grid of step 0.02 on [0, 0.5]^2, then three rounds of coordinate-wise
// golden-section search.
OptResult maximize_qQ(const std::function<double(double, double)>& rate_fn, double tol = 1e-6);

struct BracketSpec {
    double lo = 1e-4;
    double hi = 0.2;
    std::optional<double> hi_extended;
};

// Point where f changes sign inside the bracket, by bisection to tol.
double bisect_threshold(const std::function<double(double)>& f, const BracketSpec& bracket, double tol = 1e-7);

struct QMode {
    bool optimize = false;
    double q = 0.0;
    double Q = 0.0;
};

struct PmaxQuery {
    ProtocolKind kind = ProtocolKind::BB84;
    bool iterated = false;
    int m = 1;
    int m1 = 1;
    int m2 = 1;
    QMode mode;
    double tol_p = 1e-7;
    BracketSpec bracket;
};

// Rate of the protocol described by the query at error rate p, with q (and
// Q) either fixed or maximized at this p.
double protocol_rate(const PmaxQuery& query, double p);

double pmax_search(const PmaxQuery& query);

}  // namespace qkdrates
