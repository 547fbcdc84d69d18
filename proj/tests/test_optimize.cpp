#include <doctest.h>

#include <atomic>
#include <cmath>

#include "qkdrates/capacity.hpp"
#include "qkdrates/errors.hpp"
#include "qkdrates/keyrates.hpp"
#include "qkdrates/optimize.hpp"
#include "qkdrates/parallel.hpp"

using namespace qkdrates;

TEST_CASE("one-dimensional maximizer") {
    const auto r = maximize_q([](double q) { return -(q - 0.3) * (q - 0.3); });
    CHECK(std::abs(r.q - 0.3) <= 1e-6);
    CHECK(r.converged);
    CHECK(r.evaluations > 101);
    const auto edge = maximize_q([](double q) { return q; });
    CHECK(std::abs(edge.q - 0.5) <= 1e-6);
}

TEST_CASE("maximizer never loses to its own grid") {
    auto f = [](double q) { return std::sin(40 * q) * std::exp(-q); };
    const auto r = maximize_q(f);
    for (int i = 0; i <= 100; ++i) CHECK(r.best_value >= f(i * 0.005));
    CHECK(r.best_value == f(r.q));
}

TEST_CASE("noisy preprocessing helps BB84 above the noiseless threshold") {
    auto f = [](double q) { return bb84_rate(1, 0.12, q).rate; };
    const auto r = maximize_q(f);
    CHECK(r.q > 0.0);
    CHECK(r.best_value > f(0.0));
    CHECK(std::abs(r.best_value - f(r.q)) <= 1e-12);
}

TEST_CASE("two-dimensional maximizer") {
    auto bowl = [](double q, double Q) { return -(q - 0.17) * (q - 0.17) - 2 * (Q - 0.33) * (Q - 0.33); };
    const auto r = maximize_qQ(bowl);
    CHECK(std::abs(r.q - 0.17) <= 1e-5);
    CHECK(std::abs(r.Q - 0.33) <= 1e-5);
    for (int i = 0; i <= 25; ++i)
        for (int j = 0; j <= 25; ++j) CHECK(r.best_value >= bowl(i * 0.02, j * 0.02));
    CHECK(r.best_value == bowl(r.q, r.Q));
}

TEST_CASE("iterated 3x3 optimum uses the same total noise as nine bits in one round") {
    const double p = 0.12;
    const auto it = maximize_qQ([&](double q, double Q) { return bb84_iter_rate(3, 3, p, q, Q).rate; });
    const auto single = maximize_q([&](double q) { return bb84_rate(9, p, q).rate; });
    const double q_tot = it.q * (1 - it.Q) + (1 - it.q) * it.Q;
    CHECK(std::abs(q_tot - single.q) <= 0.02);
    CHECK(it.best_value >= single.best_value - 1e-12);
}

TEST_CASE("bisection") {
    std::atomic<int> calls{0};
    auto f = [&](double p) {
        ++calls;
        return 0.123456789 - p;
    };
    const double root = bisect_threshold(f, BracketSpec{}, 1e-10);
    CHECK(std::abs(root - 0.123456789) < 1e-10);
    CHECK(calls.load() < 60);
    CHECK_THROWS_AS(bisect_threshold([](double) { return 1.0; }, BracketSpec{}), BracketError);
    BracketSpec ext;
    ext.hi_extended = 0.4;
    CHECK(std::abs(bisect_threshold([](double p) { return 0.3 - p; }, ext, 1e-9) - 0.3) < 1e-9);
}

TEST_CASE("threshold searches") {
    PmaxQuery bb;
    bb.m = 1;
    CHECK(std::abs(pmax_search(bb) - 0.110028) < 1e-5);
    bb.mode.q = 0.4999;
    for (int m : {1, 5, 20}) {
        bb.m = m;
        CHECK(std::abs(pmax_search(bb) - 0.124120) < 5e-5);
    }
    PmaxQuery six;
    six.kind = ProtocolKind::SixState;
    six.m = 1;
    six.mode.q = 0.4999;
    CHECK(std::abs(pmax_search(six) - 0.141119) < 5e-5);
}

TEST_CASE("optimizing q never lowers the threshold") {
    for (ProtocolKind kind : {ProtocolKind::BB84, ProtocolKind::SixState}) {
        PmaxQuery opt;
        opt.kind = kind;
        opt.m = 2;
        opt.mode.optimize = true;
        opt.tol_p = 1e-7;
        const double best = pmax_search(opt);
        for (double q : {0.0, 0.1, 0.2, 0.3, 0.45}) {
            PmaxQuery fixed = opt;
            fixed.mode.optimize = false;
            fixed.mode.q = q;
            CHECK(best >= pmax_search(fixed) - 1e-6);
        }
    }
}

TEST_CASE("iterated queries are BB84 only") {
    PmaxQuery q;
    q.kind = ProtocolKind::SixState;
    q.iterated = true;
    CHECK_THROWS_AS(protocol_rate(q, 0.1), DomainError);
}

TEST_CASE("results do not depend on the worker count") {
    const unsigned saved = thread_count();
    set_thread_count(1);
    const double a = sixstate_rate(60, 0.13, 0.27).rate;
    const double b = conc_rate({3, 12, depolarizing(0.19)});
    const double c = maximize_q([](double q) { return bb84_rate(4, 0.11, q).rate; }).best_value;
    set_thread_count(4);
    CHECK(sixstate_rate(60, 0.13, 0.27).rate == a);
    CHECK(conc_rate({3, 12, depolarizing(0.19)}) == b);
    CHECK(maximize_q([](double q) { return bb84_rate(4, 0.11, q).rate; }).best_value == c);
    set_thread_count(saved);
}

TEST_CASE("parallel loops propagate exceptions and sum deterministically") {
    CHECK_THROWS_AS(parallel_for(10, [](std::size_t i) {
                        if (i == 7) throw DomainError("boom");
                    }),
                    DomainError);
    std::vector<double> v(1000);
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = 1.0 / (1.0 + i);
    const double s1 = pairwise_sum(v);
    const double s2 = pairwise_sum(v);
    CHECK(s1 == s2);
    double naive = 0.0;
    for (double x : v) naive += x;
    CHECK(std::abs(s1 - naive) < 1e-12);
}
