#include "lscp/lscp.hpp"
#include "lscp/summation.hpp"
#include "oracles.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <sstream>

using namespace lscp;

namespace {

struct Instance {
    RawSeries raw;
    ParameterFunctional f;
    LiftedSeries y;
    PilotTrajectory pilot;
    EstimatorConfig cfg;
};

// Random instance with a guard-safe pilot: AR noise plus a level drift.
Instance make_instance(const ParameterFunctional& f, std::size_t n, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    auto z = oracle::normal_vector(n, seed);
    for (std::size_t t = 1; t < n; ++t) z[t] += 0.3 * z[t - 1];
    Instance in{RawSeries::from_values(z), f, {}, {}, {}};
    in.y = f.lift(in.raw);
    const std::size_t m = in.y.m();
    std::uniform_int_distribution<std::size_t> k_dist(10, m / 4);
    std::uniform_int_distribution<std::size_t> l_dist(1, 6);
    in.cfg.k = k_dist(rng);
    in.cfg.tau = in.cfg.k;
    in.cfg.lag = l_dist(rng);
    in.cfg.block = l_dist(rng);
    in.pilot = nw_pilot(in.y, in.cfg.k);
    return in;
}

}  // namespace

TEST(StepProcess, EvaluationAndSupremum) {
    const StepProcess p({0.0, 1.0, -3.0, 2.0, 0.5});
    EXPECT_EQ(p.n(), 4u);
    EXPECT_EQ(p.at(0.0), 0.0);
    EXPECT_EQ(p.at(0.26), 1.0);
    EXPECT_EQ(p.at(0.5), -3.0);
    EXPECT_EQ(p.at(1.0), 0.5);
    EXPECT_EQ(p.sup_abs_from(0.0), 3.0);
    EXPECT_EQ(p.sup_abs_from(0.5), 3.0);
    EXPECT_EQ(p.sup_abs_from(0.51), 2.0);
    EXPECT_EQ(grid_index_ceil(10, 0.3), 3u);  // 10 * 0.3 rounds above 3
}

TEST(StepProcess, CsvFormat) {
    const StepProcess p({0.0, 0.1, 0.25});
    std::ostringstream out;
    p.write_csv(out);
    EXPECT_EQ(out.str(), "u,value\n0,0\n0.5,0.10000000000000001\n1,0.25\n");
}

TEST(Config, DefaultsAndValidation) {
    const auto cfg = EstimatorConfig::from_lag_factor(1000, 0.1, 50);
    EXPECT_EQ(cfg.lag, static_cast<std::size_t>(std::ceil(0.1 * std::log(1000.0) * std::log(1000.0))));
    EXPECT_EQ(cfg.block, cfg.lag);
    EXPECT_EQ(cfg.tau, 50u);
    EXPECT_DOUBLE_EQ(cfg.start_offset(1000), static_cast<double>(50 + cfg.lag - 1) / 1000.0);
    EXPECT_EQ(EstimatorConfig::lag_from_factor(3, 0.1), 1u);
    EstimatorConfig bad = cfg;
    bad.tau = 990;
    try {
        bad.validate(1000);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::ConfigInfeasible);
    }
}

TEST(Oracle, CumulativeProcessesMatchResummation) {
    const std::vector<ParameterFunctional> fs{mean_functional(), variance_functional(),
                                              autocorrelation_functional(1), kurtosis_functional()};
    for (std::uint64_t seed = 0; seed < 50; ++seed) {
        const auto& f = fs[seed % fs.size()];
        const auto in = make_instance(f, 80 + seed * 2, 1000 + seed);
        const std::size_t m = in.y.m();

        const auto mn = linearized_integrated(in.y, f, in.pilot, in.cfg);
        const auto plug = plugin_integrated(in.y, f, in.pilot, in.cfg);
        const auto sums = block_sums(in.y, f, in.pilot, in.cfg);
        const auto qn = variance_process(in.y, f, in.pilot, in.cfg);

        const auto mn_ref = oracle::integrated(in.y.data, in.pilot.mu_hat, f, in.cfg);
        const auto plug_ref = oracle::plugin(in.pilot.mu_hat, f, in.cfg);
        const auto sums_ref = oracle::block_sums(in.y.data, in.pilot.mu_hat, f, in.cfg);
        const auto qn_ref = oracle::variance(sums_ref, m, in.cfg);

        EXPECT_LE(oracle::max_abs_diff(mn.values(), mn_ref), 1e-10) << seed;
        EXPECT_LE(oracle::max_abs_diff(plug.values(), plug_ref), 1e-10) << seed;
        EXPECT_LE(oracle::max_abs_diff(sums, sums_ref), 1e-10) << seed;
        EXPECT_LE(oracle::max_abs_diff(qn.values(), qn_ref), 1e-10) << seed;
    }
}

TEST(Oracle, PilotMatchesNaiveWindowMeans) {
    const auto in = make_instance(autocorrelation_functional(2), 150, 3);
    EXPECT_LE((in.pilot.mu_hat - oracle::pilot(in.y.data, in.cfg.k)).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(Mean, IntegratedIsPilotFree) {
    const auto f = mean_functional();
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        const auto in = make_instance(f, 200, seed);
        PilotTrajectory a = in.pilot;
        PilotTrajectory b = in.pilot;
        a.mu_hat.setRandom();
        b.mu_hat = Matrix::Random(b.mu_hat.rows(), 1) * 10.0;
        const auto ma = linearized_integrated(in.y, f, a, in.cfg).values();
        const auto mb = linearized_integrated(in.y, f, b, in.cfg).values();
        EXPECT_LE(oracle::max_abs_diff(ma, mb), 1e-12);
        // M_n(1) is the plain average of Y from tau + L.
        double s = 0.0;
        for (std::size_t t = in.cfg.tau + in.cfg.lag; t <= in.y.m(); ++t) s += in.y.data(t - 1, 0);
        EXPECT_NEAR(ma.back(), s / static_cast<double>(in.y.m()), 1e-12);
    }
}

TEST(Mean, ZeroBeforeStartIndex) {
    const auto in = make_instance(mean_functional(), 100, 4);
    const auto mn = linearized_integrated(in.y, in.f, in.pilot, in.cfg);
    for (std::size_t t = 0; t < in.cfg.tau + in.cfg.lag; ++t) EXPECT_EQ(mn[t], 0.0);
}

TEST(Plugin, FullWindowGivesValueAtSampleMean) {
    // With k = m the last pilot row is the full-sample mean, so the final
    // increment of the plug-in path is f(sample mean) / m.
    const auto f = variance_functional();
    const auto y = f.lift(RawSeries::from_values(oracle::normal_vector(400, 12)));
    const std::size_t m = y.m();
    const auto pilot = nw_pilot(y, m);
    EstimatorConfig cfg;
    cfg.k = m;
    cfg.tau = m - 5;
    const auto plug = plugin_integrated(y, f, pilot, cfg);
    const Vector mean = y.data.colwise().mean().transpose();
    EXPECT_NEAR((plug[m] - plug[m - 1]) * static_cast<double>(m), f.value(mean), 1e-10);
}

TEST(Plugin, AffineWithTruePilot) {
    const auto f = mean_functional();
    const std::size_t m = 100;
    LiftedSeries y;
    y.data = Matrix::Zero(m, 1);
    PilotTrajectory truth;
    truth.mu_hat.resize(m, 1);
    double expect = 0.0;
    for (std::size_t t = 1; t <= m; ++t) {
        truth.mu_hat(t - 1, 0) = std::sin(static_cast<double>(t) / m);
        if (t >= 10) expect += truth.mu_hat(t - 1, 0);
    }
    EstimatorConfig cfg;
    cfg.k = cfg.tau = 10;
    EXPECT_NEAR(plugin_integrated(y, f, truth, cfg).final_value(), expect / m, 1e-14);
}

TEST(Variance, MonotoneAndNonnegative) {
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        const auto in = make_instance(autocorrelation_functional(1), 300, 50 + seed);
        const auto& q = variance_process(in.y, in.f, in.pilot, in.cfg).values();
        EXPECT_GE(q.front(), 0.0);
        for (std::size_t t = 1; t < q.size(); ++t) EXPECT_GE(q[t], q[t - 1]);
    }
}

TEST(Variance, EqualsMeanSquareOfBlockSums) {
    const auto in = make_instance(variance_functional(), 250, 9);
    const auto sums = block_sums(in.y, in.f, in.pilot, in.cfg);
    const auto q = variance_process(in.y, in.f, in.pilot, in.cfg);
    CompensatedSum s;
    for (const double b : sums) s.add(b * b);
    EXPECT_EQ(q.final_value(), s.value() / static_cast<double>(in.y.m()));
}

TEST(Variance, ConstantSeriesGivesZero) {
    const auto f = mean_functional();
    const auto y = f.lift(RawSeries::from_values(std::vector<double>(60, 3.0)));
    const auto pilot = nw_pilot(y, 5);
    const auto cfg = EstimatorConfig::from_lag_factor(60, 0.1, 5);
    for (const double b : block_sums(y, f, pilot, cfg)) EXPECT_EQ(b, 0.0);
    EXPECT_EQ(variance_process(y, f, pilot, cfg).final_value(), 0.0);
}

TEST(Variance, BlockSumsOfToySeries) {
    const auto in = make_instance(autocorrelation_functional(1), 61, 77);
    const auto sums = block_sums(in.y, in.f, in.pilot, in.cfg);
    EXPECT_LE(oracle::max_abs_diff(sums, oracle::block_sums(in.y.data, in.pilot.mu_hat, in.f, in.cfg)), 1e-12);
}

TEST(Variance, IidNormalLongRunVariance) {
    // Q_n(1) sums B_t^2 over t = tau+L..m-b only, so it estimates the long-run
    // variance times the covered fraction (m - tau - L - b + 1) / m.
    const auto f = mean_functional();
    const std::size_t n = 5000;
    double total = 0.0;
    const int seeds = 20;
    for (int s = 0; s < seeds; ++s) {
        const auto y = f.lift(RawSeries::from_values(oracle::normal_vector(n, 300 + s)));
        const auto grid = default_bandwidth_grid(n);
        const auto cfg0 = EstimatorConfig::from_lag_factor(n, 0.1, 1);
        const std::size_t k = cv_bandwidth(y, cfg0.lag, grid);
        const auto cfg = EstimatorConfig::from_lag_factor(n, 0.1, k);
        const double q = variance_process(y, f, nw_pilot(y, k), cfg).final_value();
        const double covered = static_cast<double>(n - cfg.tau - cfg.lag - cfg.block + 1) / static_cast<double>(n);
        EXPECT_NEAR(q / covered, 1.0, 0.15) << s;
        total += q / covered;
    }
    EXPECT_NEAR(total / seeds, 1.0, 0.05);
}

TEST(Variance, ShiftInvarianceOfVarianceFunctional) {
    const auto f = variance_functional();
    const auto x = oracle::normal_vector(500, 21);
    auto shifted = x;
    for (auto& v : shifted) v += 4.0;
    const auto run = [&](const std::vector<double>& data) {
        const auto y = f.lift(RawSeries::from_values(data));
        const auto cfg = EstimatorConfig::from_lag_factor(y.m(), 0.1, 40);
        return linearized_integrated(y, f, nw_pilot(y, 40), cfg).values();
    };
    EXPECT_LE(oracle::max_abs_diff(run(x), run(shifted)), 1e-8);
}

TEST(Errors, GuardViolationNamesTheTimeIndex) {
    const auto f = variance_functional();
    auto x = oracle::normal_vector(100, 1);
    for (std::size_t t = 0; t < 30; ++t) x[t] = 1.0;  // flat start: zero pilot variance
    const auto y = f.lift(RawSeries::from_values(x));
    EstimatorConfig cfg;
    cfg.k = cfg.tau = 5;
    cfg.lag = cfg.block = 2;
    try {
        (void)linearized_integrated(y, f, nw_pilot(y, 5), cfg);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::DomainGuardViolation);
        ASSERT_TRUE(e.index().has_value());
        EXPECT_EQ(*e.index(), cfg.tau + cfg.lag);
    }
}

TEST(Errors, InfeasibleStart) {
    const auto in = make_instance(mean_functional(), 40, 2);
    EstimatorConfig cfg = in.cfg;
    cfg.tau = in.y.m();
    try {
        (void)linearized_integrated(in.y, in.f, in.pilot, cfg);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::ConfigInfeasible);
    }
}

TEST(Errors, ShapeMismatch) {
    const auto in = make_instance(mean_functional(), 40, 2);
    EXPECT_THROW((void)linearized_integrated(in.y, variance_functional(), in.pilot, in.cfg), Error);
}
