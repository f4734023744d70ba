// Command line front end: simulate, test, mc, ingest.

#include "lscp/lscp.hpp"

#include "CLI11.hpp"

#include <charconv>
#include <chrono>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <numbers>
#include <sstream>

namespace {

using namespace lscp;

// Shortest text that reads back to the same double (0.1 rather than 0.10000000000000001).
std::string shortest(double v) {
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

std::vector<std::string> split(const std::string& text) {
    std::vector<std::string> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (!item.empty()) out.push_back(item);
    }
    return out;
}

std::vector<double> parse_levels(const std::string& text) {
    std::vector<double> out;
    for (const auto& s : split(text)) out.push_back(std::stod(s));
    if (out.empty()) throw Error(ErrorCode::InvalidLevel, "no levels given");
    return out;
}

std::vector<std::size_t> parse_sizes(const std::string& text) {
    std::vector<std::size_t> out;
    for (const auto& s : split(text)) out.push_back(std::stoul(s));
    if (out.empty()) throw Error(ErrorCode::InvalidArgument, "empty size list");
    return out;
}

BootstrapWeight parse_weight(const std::string& text) { return parse_bootstrap_weight(text); }

void write_series(const std::string& path, const std::vector<std::string>& header, const Matrix& data) {
    if (path == "-") {
        write_csv(std::cout, header, data);
    } else {
        write_csv(path, header, data);
    }
}

// ---- simulate ----

struct SimulateArgs {
    std::string model = "tvar";
    std::string scenario = "h0";
    std::size_t n = 1000;
    std::uint64_t seed = 1;
    std::string out = "-";
    double ar = 0.2;
    double sigma = 1.0;
    double shape = 1.0;
    bool gaussian = false;
};

TvarSpec custom_tvar(const SimulateArgs& a) {
    TvarSpec spec;
    spec.n = a.n;
    spec.a = [v = a.ar](double) { return v; };
    spec.sigma = [v = a.sigma](double) { return v; };
    spec.alpha = [v = a.shape](double) { return v; };
    spec.innovation = a.gaussian ? Innovation::Gaussian : Innovation::SymmetrizedGamma;
    return spec;
}

int run_simulate(const SimulateArgs& a) {
    const bool custom = a.scenario == "custom";
    if (a.model == "tvar") {
        TvarSpec spec = custom ? custom_tvar(a) : design::tvar(design::parse_hypothesis(a.scenario), a.n);
        write_series(a.out, {"x"}, simulate_tvar(spec, a.seed).data());
    } else if (a.model == "tvvar") {
        // Two components: the first follows the scenario coefficient and feeds
        // from the second; the second is a fixed AR(1).
        const TvarSpec base = custom ? custom_tvar(a) : design::tvar(design::parse_hypothesis(a.scenario), a.n);
        TvvarSpec spec;
        spec.n = a.n;
        spec.d = 2;
        spec.A = [ar = base.a](double u) {
            Eigen::MatrixXd m(2, 2);
            m << ar(u), 0.1, 0.0, 0.3;
            return m;
        };
        spec.B = [s = base.sigma](double u) { return Eigen::MatrixXd(s(u) * Eigen::MatrixXd::Identity(2, 2)); };
        spec.mu = [](double) { return Eigen::VectorXd(Eigen::VectorXd::Zero(2)); };
        spec.innovation = base.innovation;
        spec.alpha = base.alpha;
        write_series(a.out, {"x1", "x2"}, simulate_tvvar(spec, a.seed).data());
    } else if (a.model == "regression") {
        if (custom) throw Error(ErrorCode::InvalidArgument, "the regression model has no custom scenario");
        const auto sample = simulate_regression(design::regression(design::parse_hypothesis(a.scenario), a.n), a.seed);
        write_series(a.out, {"z", "w1", "w2"}, sample.combined().data());
    } else {
        throw Error(ErrorCode::InvalidArgument, "unknown model '" + a.model + "'");
    }
    return 0;
}

// ---- test ----

struct TestArgs {
    std::string in;
    std::string column = "0";
    std::string covariates;
    std::string functional = "autocorr:1";
    double c = 0.1;
    std::size_t boot_m = 1000;
    std::uint64_t seed = 1;
    std::string levels = "0.05,0.10";
    std::string weight = "adjusted";
    std::optional<std::size_t> bandwidth;
    std::optional<std::size_t> lag;
    std::string out_report;
    std::string out_paths;
};

int run_test_cmd(const TestArgs& a) {
    const CsvTable table = read_csv(a.in);
    std::vector<std::size_t> columns{table.column_index(a.column)};
    for (const auto& c : split(a.covariates)) columns.push_back(table.column_index(c));
    const RawSeries raw(table.numeric_columns(columns));

    TestOptions options;
    options.lag_factor = a.c;
    options.boot_m = a.boot_m;
    options.seed = a.seed;
    options.levels = parse_levels(a.levels);
    options.weight = parse_weight(a.weight);
    options.bandwidth = a.bandwidth;
    options.lag = a.lag;

    const TestReport report = run_test(raw, a.functional, options);
    const std::string json = report_to_json(report);
    if (a.out_report.empty() || a.out_report == "-") {
        std::cout << json << '\n';
    } else {
        std::ofstream out(a.out_report);
        if (!out) throw Error(ErrorCode::InvalidArgument, "cannot open '" + a.out_report + "' for writing");
        out << json << '\n';
    }
    if (!a.out_paths.empty()) write_report_paths(report, a.out_paths);
    for (const auto& w : report.warnings) std::cerr << "warning: " << w << '\n';
    return 0;
}

// ---- mc ----

struct McArgs {
    std::string table = "size-power";
    std::string n_list = "1000";
    std::size_t reps = 500;
    std::size_t boot_m = 200;
    double c = 0.1;
    std::uint64_t seed = 1;
    std::string out = "-";
    std::string hypotheses = "h0,h1,h2";
    std::size_t threads = 0;
    std::string levels = "0.05,0.10";
    std::string weight = "adjusted";
};

int run_mc(const McArgs& a) {
    std::ofstream file;
    if (a.out != "-") {
        file.open(a.out);
        if (!file) throw Error(ErrorCode::InvalidArgument, "cannot open '" + a.out + "' for writing");
    }
    std::ostream& out = a.out == "-" ? std::cout : file;
    out << std::setprecision(17);

    const auto sizes = parse_sizes(a.n_list);
    auto hyps = split(a.hypotheses);
    if (a.table == "pvalues") hyps = {"h0"};

    if (a.table == "size-power" || a.table == "ols") {
        out << "scenario,n,c,level,rate,runtime_seconds\n";
    } else if (a.table == "estimator-error") {
        out << "scenario,n,c,estimator,target,mae,bias\n";
    } else if (a.table == "pvalues") {
        out << "scenario,n,c,rep,p_value,ks_distance\n";
    } else {
        throw Error(ErrorCode::InvalidArgument, "unknown table '" + a.table + "'");
    }

    for (const std::size_t n : sizes) {
        for (const auto& h : hyps) {
            McScenario s;
            s.model = a.table == "ols" ? McModel::RegressionCoef : McModel::TvarAutocorr;
            s.hypothesis = design::parse_hypothesis(h);
            s.n = n;
            s.reps = a.reps;
            s.boot_m = a.boot_m;
            s.c = a.c;
            s.master_seed = a.seed;
            s.threads = a.threads;
            s.levels = parse_levels(a.levels);
            s.weight = parse_weight(a.weight);
            const auto start = std::chrono::steady_clock::now();
            std::cerr << "[mc] " << a.table << ' ' << s.name() << " n=" << n << " reps=" << a.reps << " ..."
                      << std::flush;

            if (a.table == "size-power" || a.table == "ols") {
                const auto cell = size_power_cell(s);
                for (const auto& [level, rate] : cell.rejection_rate) {
                    out << s.name() << ',' << n << ',' << shortest(a.c) << ',' << shortest(level) << ',' << rate << ','
                        << cell.mean_runtime_seconds << '\n';
                }
            } else if (a.table == "estimator-error") {
                const auto cell = estimator_error_cell(s);
                out << s.name() << ',' << n << ',' << shortest(a.c) << ",linearized," << shortest(cell.target) << ','
                    << cell.linearized.mae << ',' << cell.linearized.bias << '\n';
                out << s.name() << ',' << n << ',' << shortest(a.c) << ",plugin," << shortest(cell.target) << ',' << cell.plugin.mae
                    << ',' << cell.plugin.bias << '\n';
            } else {
                const auto hist = pvalue_histogram(s);
                for (std::size_t r = 0; r < hist.p_values.size(); ++r) {
                    out << s.name() << ',' << n << ',' << shortest(a.c) << ',' << r << ',' << hist.p_values[r] << ','
                        << hist.ks_distance << '\n';
                }
            }
            const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
            std::cerr << " done in " << std::fixed << std::setprecision(1) << secs << " s\n"
                      << std::defaultfloat;
        }
    }
    return 0;
}

// ---- ingest ----

struct IngestArgs {
    std::string in;
    std::string price_col = "0";
    bool log_returns = false;
    std::string gamma = "none";
    std::string out = "-";
};

int run_ingest(const IngestArgs& a) {
    const PriceSeries prices = read_prices(a.in, a.price_col);
    RawSeries series = a.log_returns ? log_returns(prices) : RawSeries::from_values(prices.prices);
    if (a.gamma != "none") {
        double gamma = 0.0;
        try {
            gamma = std::stod(a.gamma);
        } catch (const std::exception&) {
            throw Error(ErrorCode::InvalidGamma, "cannot parse gamma '" + a.gamma + "'");
        }
        series = arctan_transform(series, gamma);
    }
    write_series(a.out, {a.log_returns ? "d" : "p"}, series.data());
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Change-point tests for integrated parameters of locally stationary time series"};
    app.require_subcommand(1);

    SimulateArgs sim;
    auto* simulate = app.add_subcommand("simulate", "Simulate a series from a built-in design");
    simulate->add_option("--model", sim.model, "tvar | tvvar | regression")
        ->check(CLI::IsMember({"tvar", "tvvar", "regression"}));
    simulate->add_option("--scenario", sim.scenario, "h0 | h1 | h2 | custom")
        ->check(CLI::IsMember({"h0", "h1", "h2", "custom"}));
    simulate->add_option("--n", sim.n, "Sample size")->check(CLI::PositiveNumber);
    simulate->add_option("--seed", sim.seed, "Seed");
    simulate->add_option("--out", sim.out, "Output CSV, '-' for stdout");
    simulate->add_option("--ar", sim.ar, "Constant AR coefficient (custom)");
    simulate->add_option("--sigma", sim.sigma, "Constant innovation scale (custom)");
    simulate->add_option("--shape", sim.shape, "Constant Gamma shape (custom)");
    simulate->add_flag("--gaussian", sim.gaussian, "Gaussian innovations (custom)");

    TestArgs test;
    auto* testcmd = app.add_subcommand("test", "Bootstrap CUSUM test for a constant parameter");
    testcmd->add_option("--in", test.in, "Input CSV")->required();
    testcmd->add_option("--column", test.column, "Series column (name or index)");
    testcmd->add_option("--covariates", test.covariates, "Comma-separated covariate columns (regression)");
    testcmd->add_option("--functional", test.functional,
                        "mean | variance | autocorr:h | kurtosis | skewness | cv | regression:j");
    testcmd->add_option("--c", test.c, "Lag factor c in L = ceil(c log(m)^2)");
    testcmd->add_option("--boot-m", test.boot_m, "Bootstrap draws")->check(CLI::PositiveNumber);
    testcmd->add_option("--seed", test.seed, "Bootstrap seed");
    testcmd->add_option("--levels", test.levels, "Comma-separated test levels");
    testcmd->add_option("--bootstrap-weight", test.weight, "adjusted | literal")
        ->check(CLI::IsMember({"adjusted", "literal"}));
    testcmd->add_option("--bandwidth", test.bandwidth, "Fixed pilot bandwidth (default: cross-validation)");
    testcmd->add_option("--lag", test.lag, "Fixed lag L");
    testcmd->add_option("--out-report", test.out_report, "Report JSON path ('-' or empty for stdout)");
    testcmd->add_option("--out-paths", test.out_paths, "Prefix for M_n, T_n and threshold CSVs");

    McArgs mc;
    auto* mccmd = app.add_subcommand("mc", "Monte Carlo tables");
    mccmd->add_option("--table", mc.table, "size-power | estimator-error | pvalues | ols")
        ->check(CLI::IsMember({"size-power", "estimator-error", "pvalues", "ols"}));
    mccmd->add_option("--n-list", mc.n_list, "Comma-separated sample sizes");
    mccmd->add_option("--reps", mc.reps, "Replicates per cell")->check(CLI::PositiveNumber);
    mccmd->add_option("--boot-m", mc.boot_m, "Bootstrap draws per replicate")->check(CLI::PositiveNumber);
    mccmd->add_option("--c", mc.c, "Lag factor");
    mccmd->add_option("--seed", mc.seed, "Master seed");
    mccmd->add_option("--out", mc.out, "Output CSV, '-' for stdout");
    mccmd->add_option("--hypotheses", mc.hypotheses, "Comma-separated subset of h0,h1,h2");
    mccmd->add_option("--threads", mc.threads, "Worker threads, 0 for all cores");
    mccmd->add_option("--levels", mc.levels, "Comma-separated test levels");
    mccmd->add_option("--bootstrap-weight", mc.weight, "adjusted | literal")
        ->check(CLI::IsMember({"adjusted", "literal"}));

    IngestArgs ing;
    auto* ingest = app.add_subcommand("ingest", "Prices to (transformed) log returns");
    ingest->add_option("--in", ing.in, "Price CSV")->required();
    ingest->add_option("--price-col", ing.price_col, "Price column (name or index)");
    ingest->add_flag("--log-returns", ing.log_returns, "Convert prices to log returns");
    ingest->add_option("--arctan-gamma", ing.gamma, "Arctan scale gamma, or 'none'");
    ingest->add_option("--out", ing.out, "Output CSV, '-' for stdout");

    CLI11_PARSE(app, argc, argv);

    try {
        if (*simulate) return run_simulate(sim);
        if (*testcmd) return run_test_cmd(test);
        if (*mccmd) return run_mc(mc);
        if (*ingest) return run_ingest(ing);
    } catch (const lscp::Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
    return 1;
}
