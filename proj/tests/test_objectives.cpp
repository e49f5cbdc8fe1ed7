#include "goucb/objectives.hpp"

#include <doctest.h>

#include <algorithm>

using namespace goucb;

TEST_SUITE("objectives") {

TEST_CASE("f1 hand values and optimum") {
    Objective f1 = make_f1(10);
    CHECK(f1(Vector::Zero(10)) == doctest::Approx(4.6552930).epsilon(1e-6));
    CHECK(std::abs(f1(Vector::Constant(10, 5.0)) - 6.0) <= 1e-9);
    CHECK(f1.f_star() == f1(Vector::Constant(10, 5.0)));
    CHECK_THROWS_AS(f1(Vector::Constant(10, 5.1)), InputError);
}

TEST_CASE("f1 never decreases along positive coordinate bumps") {
    Objective f1 = make_f1(10);
    Rng rng(8);
    for (int trial = 0; trial < 200; ++trial) {
        Vector x(10);
        for (int i = 0; i < 10; ++i)
            x[i] = rng.uniform(-5.0, 5.0);
        int k = rng.uniform_int(10);
        Vector x2 = x;
        x2[k] = std::min(5.0, x2[k] + rng.uniform(0.0, 2.0));
        CHECK(f1(x2) >= f1(x) - 1e-12);
    }
}

TEST_CASE("f2 hand values") {
    Objective f2 = make_f2(10);
    CHECK(f2(Vector::Zero(10)) == doctest::Approx(0.0));
    CHECK(f2(Vector::Ones(10)) == doctest::Approx(50.0).epsilon(1e-12));
}

TEST_CASE("f2 optimum against an independent fine-grid quartic scan") {
    Objective f2 = make_f2(10);
    auto g = [](double v) { return -0.5 * (v * v * v * v - 16.0 * v * v + 5.0 * v); };
    double best = -1e300;
    for (int i = 0; i <= 1000000; ++i)
        best = std::max(best, g(-5.0 + 10.0 * i / 1000000.0));
    CHECK(f2.f_star() == doctest::Approx(10.0 * best).epsilon(1e-9));
    CHECK(std::abs(f2.f_star() - 391.662) <= 1e-3);
}

TEST_CASE("f3 hand values and optimum at the origin") {
    Objective f3 = make_f3(10);
    CHECK(f3(Vector::Zero(10)) == doctest::Approx(0.0));
    CHECK(f3.f_star() == 0.0);
    CHECK(f3(Vector::Constant(10, 0.5)) == doctest::Approx(-202.5).epsilon(1e-12));
    CHECK(f3(Vector::Ones(10)) == doctest::Approx(-10.0).epsilon(1e-12));

    Rng rng(4);
    for (int trial = 0; trial < 500; ++trial) {
        Vector x(10);
        for (int i = 0; i < 10; ++i)
            x[i] = rng.uniform(-5.0, 5.0);
        CHECK(f3(x) <= 1e-9);
    }
}

TEST_CASE("separable objectives are permutation invariant") {
    Objective f2 = make_f2(6);
    Objective f3 = make_f3(6);
    Rng rng(12);
    for (int trial = 0; trial < 100; ++trial) {
        Vector x(6);
        for (int i = 0; i < 6; ++i)
            x[i] = rng.uniform(-5.0, 5.0);
        Vector p = x;
        std::reverse(p.data(), p.data() + 6);
        CHECK(f2(p) == doctest::Approx(f2(x)).epsilon(1e-12));
        CHECK(f3(p) == doctest::Approx(f3(x)).epsilon(1e-12));
    }
}

TEST_CASE("noisy oracle honors sigma and seeding") {
    Objective f3 = make_f3(3);
    Vector x = Vector::Constant(3, 0.25);

    NoisyOracle clean(f3, 0.0, 5);
    CHECK(clean.observe(x) == f3(x));

    NoisyOracle noisy(f3, 0.5, 5);
    double mean = 0.0;
    const int draws = 10000;
    double first = noisy.observe(x);
    double second = noisy.observe(x);
    CHECK(first != second);
    mean += first + second;
    for (int i = 2; i < draws; ++i)
        mean += noisy.observe(x);
    mean /= draws;
    CHECK(std::abs(mean - f3(x)) <= 4.0 * 0.5 / 100.0);

    CHECK_THROWS_AS(NoisyOracle(f3, -0.1, 1), InputError);
}

TEST_CASE("regret recording") {
    Objective f1 = make_f1(4);
    RegretTrace trace;
    record(trace, Vector::Constant(4, 5.0), f1, Phase::optimistic);
    CHECK(trace.r.back() == 0.0);

    Rng rng(3);
    for (int i = 0; i < 50; ++i) {
        Vector x(4);
        for (int j = 0; j < 4; ++j)
            x[j] = rng.uniform(-5.0, 5.0);
        record(trace, x, f1, Phase::optimistic);
        CHECK(trace.r.back() >= -1e-9);
    }
    for (std::size_t i = 1; i < trace.R.size(); ++i)
        CHECK(trace.R[i] >= trace.R[i - 1] - 1e-12);

    // The stated optima dominate sampled values on all three built-ins.
    for (const Objective& obj : {make_f1(10), make_f2(10), make_f3(10)}) {
        RegretTrace t2;
        for (int i = 0; i < 100; ++i) {
            Vector x(10);
            for (int j = 0; j < 10; ++j)
                x[j] = rng.uniform(-5.0, 5.0);
            record(t2, x, obj, Phase::uniform);
            CHECK(t2.r.back() >= -1e-9);
        }
    }
}

TEST_CASE("regret sums across rounds") {
    Objective toy("toy", Box::cube(1, -5.0, 5.0), 2.0, "by construction",
                  [](const Vector& x) { return x[0]; });
    RegretTrace trace;
    record(trace, Vector::Constant(1, 1.0), toy, Phase::uniform);   // r = 1
    record(trace, Vector::Constant(1, 0.0), toy, Phase::optimistic); // r = 2
    CHECK(trace.total() == doctest::Approx(3.0));

    Objective unknown("u", Box::cube(1, 0.0, 1.0),
                      std::numeric_limits<double>::quiet_NaN(), "",
                      [](const Vector&) { return 0.0; });
    CHECK_THROWS_AS(record(trace, Vector::Zero(1), unknown, Phase::uniform),
                    ConfigError);
}

TEST_CASE("output selection takes the earliest maximum observation") {
    std::vector<Vector> xs = {Vector::Zero(1), Vector::Ones(1),
                              Vector::Constant(1, 2.0)};
    CHECK(select_output({Vector::Zero(1)}, {1.0}) == 0);
    CHECK(select_output(xs, {1.0, 3.0, 2.0}) == 1);
    CHECK(select_output(xs, {3.0, 3.0, 1.0}) == 0);
    CHECK_THROWS_AS(select_output({}, {}), InputError);
}

TEST_CASE("custom objectives are registrable by name") {
    register_objective("sphere", [](int dim) {
        return Objective("sphere", Box::cube(dim, -1.0, 1.0), 0.0, "origin",
                         [](const Vector& x) { return -x.squaredNorm(); });
    });
    Objective o = make_objective("sphere", 3);
    CHECK(o(Vector::Zero(3)) == 0.0);
    CHECK_THROWS_AS(make_objective("nope", 2), ConfigError);
}

} // TEST_SUITE

