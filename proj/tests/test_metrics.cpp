#include <doctest.h>

#include <random>

#include "specgraph/metrics.hpp"
#include "support/oracles.hpp"

using namespace specgraph;

TEST_CASE("perfect predictions score one") {
    ConfusionMatrix c(3);
    c.add(0, 0, 4);
    c.add(1, 1, 2);
    c.add(2, 2, 7);
    const auto r = precision_recall_f(c);
    for (const auto& s : r.per_class) {
        CHECK(s.precision == 1.0);
        CHECK(s.recall == 1.0);
        CHECK(s.f_measure == 1.0);
    }
    CHECK(r.macro_f == 1.0);
}

TEST_CASE("direct formula example") {
    ConfusionMatrix c(2);
    c.add(0, 0, 8);
    c.add(0, 1, 2);  // two misses of class 0
    c.add(1, 0, 2);  // two false alarms for class 0
    c.add(1, 1, 8);
    const auto r = precision_recall_f(c);
    CHECK(r.per_class[0].precision == doctest::Approx(0.8));
    CHECK(r.per_class[0].recall == doctest::Approx(0.8));
    CHECK(r.per_class[0].f_measure == doctest::Approx(0.8));
}

TEST_CASE("absent class scores zero") {
    ConfusionMatrix c(3);
    c.add(0, 0, 3);
    c.add(1, 1, 3);
    const auto r = precision_recall_f(c);
    CHECK(r.per_class[2].precision == 0.0);
    CHECK(r.per_class[2].recall == 0.0);
    CHECK(r.per_class[2].f_measure == 0.0);
    CHECK(r.macro_f == doctest::Approx(2.0 / 3.0));
}

TEST_CASE("precision, recall and F agree with a per-sample tally") {
    std::mt19937_64 rng(1);
    std::uniform_int_distribution<std::size_t> classes(2, 10), length(0, 60);
    for (int trial = 0; trial < 1000; ++trial) {
        const std::size_t k = classes(rng), n = length(rng);
        std::uniform_int_distribution<std::size_t> label(0, k - 1);
        std::uniform_real_distribution<double> coin(0.0, 1.0);
        std::vector<std::size_t> actual(n), predicted(n);
        for (std::size_t i = 0; i < n; ++i) {
            actual[i] = label(rng);
            predicted[i] = coin(rng) < 0.6 ? actual[i] : label(rng);
        }
        const auto r = precision_recall_f(confusion_matrix(actual, predicted, k));
        const auto t = oracle::tally_prf(actual, predicted, k);
        double mean_f = 0.0;
        for (std::size_t c = 0; c < k; ++c) {
            CHECK(r.per_class[c].precision == doctest::Approx(t.precision[c]).epsilon(1e-12));
            CHECK(r.per_class[c].recall == doctest::Approx(t.recall[c]).epsilon(1e-12));
            CHECK(r.per_class[c].f_measure == doctest::Approx(t.f[c]).epsilon(1e-12));
            mean_f += r.per_class[c].f_measure;
        }
        CHECK(r.macro_f == doctest::Approx(t.macro_f).epsilon(1e-12));
        CHECK(r.macro_f == doctest::Approx(mean_f / static_cast<double>(k)).epsilon(1e-12));
    }
}

TEST_CASE("mean and sample standard deviation") {
    const std::vector<double> one{0.7};
    CHECK(mean_std(one).mean == 0.7);
    CHECK(mean_std(one).std == 0.0);
    const std::vector<double> v{1.0, 2.0, 3.0, 4.0};
    CHECK(mean_std(v).mean == doctest::Approx(2.5));
    CHECK(mean_std(v).std == doctest::Approx(1.2909944487358056));
}
