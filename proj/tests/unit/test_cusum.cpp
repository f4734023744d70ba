#include "lscp/lscp.hpp"
#include "oracles.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "json.hpp"

using namespace lscp;

namespace {

RawSeries ar1(std::size_t n, double a, std::uint64_t seed) {
    TvarSpec spec;
    spec.n = n;
    spec.a = [a](double) { return a; };
    spec.sigma = [](double) { return 1.0; };
    spec.alpha = [](double) { return 1.0; };
    spec.innovation = Innovation::Gaussian;
    return simulate_tvar(spec, seed);
}

TestOptions small_options() {
    TestOptions o;
    o.boot_m = 199;
    o.seed = 5;
    return o;
}

std::string read_file(const std::filesystem::path& p) {
    std::ifstream in(p);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace

TEST(CusumProcess, HandComputedExample) {
    const StepProcess m({0.0, 0.1, 0.3, 0.2, 0.6, 0.4});
    const auto t = cusum_process(m, 0.2);
    const std::vector<double> expected{0.0, 0.1, 0.2, 0.0, 0.3, 0.0};
    EXPECT_LE(oracle::max_abs_diff(t.values(), expected), 1e-15);
    EXPECT_DOUBLE_EQ(cusum_statistic(t, 0.2), 0.3);
    // Only indices t >= ceil(n u_n) count.
    EXPECT_DOUBLE_EQ(cusum_statistic(StepProcess({5.0, 0.1, 0.0}), 0.5), 0.1);
}

TEST(CusumProcess, EndsAtZeroAndKillsLinearDrift) {
    const auto noise = oracle::normal_vector(101, 2);
    const StepProcess random_walk(noise);
    EXPECT_EQ(cusum_process(random_walk, 0.3).final_value(), 0.0);
    // M linear on [u_n, 1] and zero before: T vanishes.
    const double u_n = 0.25;
    std::vector<double> linear(101);
    for (std::size_t t = 0; t <= 100; ++t) linear[t] = 3.0 * std::max(0.0, t / 100.0 - u_n);
    const auto t = cusum_process(StepProcess(linear), u_n);
    for (const double v : t.values()) EXPECT_NEAR(v, 0.0, 1e-14);
}

TEST(CusumProcess, RejectsBadOffset) {
    const StepProcess m({0.0, 1.0});
    for (const double u_n : {-0.1, 1.0, 1.5}) {
        try {
            (void)cusum_process(m, u_n);
            ADD_FAILURE();
        } catch (const Error& e) {
            EXPECT_EQ(e.code(), ErrorCode::InvalidOffset);
        }
    }
}

TEST(RunTest, StatisticIsBruteForceMaximum) {
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        const auto x = ar1(300, 0.3, seed);
        const auto r = run_test(x, "autocorr:1", small_options());
        const auto ref = oracle::cusum(r.integrated.values(), r.u_n);
        EXPECT_LE(oracle::max_abs_diff(r.cusum_path.values(), ref), 1e-12);
        EXPECT_NEAR(r.statistic, oracle::sup_abs_from(ref, r.u_n), 1e-12);
        EXPECT_NEAR(r.statistic, cusum_statistic(r.cusum_path, r.u_n), 1e-12);
        EXPECT_NEAR(r.scaled_statistic, std::sqrt(static_cast<double>(r.m)) * r.statistic, 1e-12);
    }
}

TEST(RunTest, MeanFunctionalIsClassicalCusum) {
    const auto v = oracle::normal_vector(400, 3);
    TestOptions o = small_options();
    o.bandwidth = 20;
    const auto r = run_test(RawSeries::from_values(v), "mean", o);
    const std::size_t m = r.m;
    const std::size_t first = r.config.tau + r.config.lag;
    double total = 0.0;
    for (std::size_t t = first; t <= m; ++t) total += v[t - 1];
    double partial = 0.0;
    double sup = 0.0;
    for (std::size_t t = 0; t <= m; ++t) {
        if (t >= first) partial += v[t - 1];
        const double u = static_cast<double>(t) / m;
        const double w = u > r.u_n ? (u - r.u_n) / (1.0 - r.u_n) : 0.0;
        const double tn = (partial - w * total) / m;
        EXPECT_NEAR(r.cusum_path[t], tn, 1e-13);
        if (static_cast<double>(t) >= r.u_n * m - 1e-9) sup = std::max(sup, std::abs(tn));
    }
    EXPECT_NEAR(r.statistic, sup, 1e-13);
}

TEST(RunTest, AutocorrelationIsScaleInvariant) {
    const auto x = ar1(500, 0.4, 11);
    const Matrix doubled = 2.0 * x.data();
    // The lift mixes first and second moments, so the CV criterion is not
    // scale-free; hold the bandwidth fixed.
    auto o = small_options();
    o.bandwidth = 40;
    const auto a = run_test(x, "autocorr:1", o);
    const auto b = run_test(RawSeries(doubled), "autocorr:1", o);
    EXPECT_LE(oracle::max_abs_diff(a.integrated.values(), b.integrated.values()), 1e-6 * std::abs(a.integrated_at_1));
    EXPECT_LT(std::abs(a.variance_at_1 - b.variance_at_1), 1e-6 * a.variance_at_1);
    EXPECT_LT(std::abs(a.statistic - b.statistic), 1e-6 * a.statistic);
    EXPECT_DOUBLE_EQ(a.p_value, b.p_value);
    for (const double level : a.levels) EXPECT_EQ(a.rejects(level), b.rejects(level));
}

TEST(RunTest, DeterministicForFixedSeed) {
    const auto x = ar1(300, 0.2, 4);
    const auto a = run_test(x, "autocorr:1", small_options());
    const auto b = run_test(x, "autocorr:1", small_options());
    EXPECT_EQ(report_to_json(a), report_to_json(b));
    auto other = small_options();
    other.seed = 6;
    EXPECT_EQ(run_test(x, "autocorr:1", other).statistic, a.statistic);
}

TEST(RunTest, CriticalValuesAndDecisionsAgree) {
    const auto x = ar1(400, 0.2, 8);
    auto o = small_options();
    o.levels = {0.01, 0.05, 0.10, 0.5};
    const auto r = run_test(x, "autocorr:1", o);
    double prev = INFINITY;
    for (const double level : o.levels) {
        const double c = r.critical_values.at(level);
        EXPECT_LE(c, prev);
        prev = c;
        // A rejection at level a means few draws reach the observed value.
        if (r.rejects(level)) EXPECT_LE(r.p_value, level + 1.0 / (o.boot_m + 1));
    }
    EXPECT_THROW((void)r.rejects(0.2), Error);
}

TEST(RunTest, ConstantSeriesViolatesGuard) {
    const std::vector<double> flat(200, 1.5);
    try {
        (void)run_test(RawSeries::from_values(flat), "autocorr:1", small_options());
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::DomainGuardViolation);
        EXPECT_TRUE(e.index().has_value());
    }
}

TEST(RunTest, RejectsBadLevelsAndTinySeries) {
    auto o = small_options();
    o.levels = {0.0};
    EXPECT_THROW((void)run_test(ar1(200, 0.2, 1), "autocorr:1", o), Error);
    try {
        (void)run_test(ar1(5, 0.2, 1), "autocorr:1", small_options());
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::ConfigInfeasible) << e.what();
    }
    EXPECT_THROW((void)run_test(ar1(200, 0.2, 1), "nonsense", small_options()), Error);
}

TEST(RunTest, ConstantMeanDataWarnsWhenVarianceVanishes) {
    const std::vector<double> flat(300, 2.0);
    auto o = small_options();
    o.bandwidth = 10;
    const auto r = run_test(RawSeries::from_values(flat), "mean", o);
    EXPECT_LT(r.variance_at_1, 1e-12);
    ASSERT_EQ(r.warnings.size(), 1u);
    EXPECT_LT(r.statistic, 1e-12);
}

TEST(Report, JsonFields) {
    const auto r = run_test(ar1(300, 0.2, 2), "autocorr:1", small_options());
    const auto j = nlohmann::json::parse(report_to_json(r));
    for (const char* key : {"functional", "statistic", "scaled_statistic", "p_value", "critical_values", "reject",
                            "integrated_at_1", "plugin_at_1", "variance_at_1", "standard_error", "config",
                            "warnings"}) {
        EXPECT_TRUE(j.contains(key)) << key;
    }
    EXPECT_EQ(j["config"]["m"].get<std::size_t>(), r.m);
    EXPECT_EQ(j["config"]["bandwidth"].get<std::size_t>(), r.config.k);
    EXPECT_EQ(j["critical_values"].size(), 2u);
    EXPECT_DOUBLE_EQ(j["statistic"].get<double>(), r.statistic);
    EXPECT_NEAR(j["standard_error"].get<double>(), std::sqrt(r.variance_at_1 / r.m), 1e-15);
}

TEST(Report, PathFilesRoundTrip) {
    const auto r = run_test(ar1(200, 0.2, 3), "autocorr:1", small_options());
    const auto dir = std::filesystem::temp_directory_path() / "lscp_cusum_paths";
    std::filesystem::create_directories(dir);
    const auto prefix = (dir / "run").string();
    write_report_paths(r, prefix);
    std::ifstream tn(prefix + "_Tn.csv");
    const auto table = parse_csv(tn);
    ASSERT_EQ(table.rows.size(), r.m + 1);
    const auto values = table.numeric_column(table.column_index("value"));
    EXPECT_EQ(values, r.cusum_path.values());
    const auto thresholds = read_file(prefix + "_thresholds.csv");
    EXPECT_EQ(thresholds.rfind("level,threshold\n0.05,", 0), 0u) << thresholds;
    EXPECT_TRUE(std::filesystem::exists(prefix + "_Mn.csv"));
    std::filesystem::remove_all(dir);
}
