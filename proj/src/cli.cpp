#include "crhyp/cli.hpp"

#include <algorithm>
#include <cstdio>
#include <exception>
#include <fstream>
#include <iostream>
#include <map>
#include <variant>

#include "CLI11.hpp"
#include "crhyp/distance.hpp"
#include "crhyp/special.hpp"
#include "crhyp/subelliptic.hpp"
#include "crhyp/verification.hpp"
#include "json.hpp"

namespace crhyp::cli {

namespace {

using Cell = std::variant<double, long long, std::string>;
using Row = std::vector<Cell>;

std::string fmt17(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

class RowWriter {
public:
    RowWriter(std::ostream& os, Format f, std::vector<std::string> header)
        : os_(os), format_(f), header_(std::move(header)) {
        if (format_ == Format::Csv) {
            for (std::size_t i = 0; i < header_.size(); ++i) os_ << (i ? "," : "") << header_[i];
            os_ << '\n';
        }
    }

    void write(const Row& row) {
        ++rows_;
        if (format_ == Format::Csv) {
            for (std::size_t i = 0; i < row.size(); ++i) {
                if (i) os_ << ',';
                std::visit(
                    [&](const auto& v) {
                        using V = std::decay_t<decltype(v)>;
                        if constexpr (std::is_same_v<V, double>)
                            os_ << fmt17(v);
                        else
                            os_ << v;
                    },
                    row[i]);
            }
            os_ << '\n';
            return;
        }
        nlohmann::ordered_json j;
        for (std::size_t i = 0; i < row.size(); ++i)
            std::visit([&](const auto& v) { j[header_[i]] = v; }, row[i]);
        os_ << j.dump() << '\n';
    }

    std::size_t rows() const { return rows_; }

private:
    std::ostream& os_;
    Format format_;
    std::vector<std::string> header_;
    std::size_t rows_ = 0;
};

struct Summary {
    std::string command;
    std::size_t rows = 0;
    std::size_t failures = 0;
    std::map<std::string, double> metrics;

    std::string json() const {
        nlohmann::ordered_json j;
        j["command"] = command;
        j["rows"] = rows;
        j["failures"] = failures;
        for (const auto& [k, v] : metrics) j[k] = v;
        return j.dump();
    }
};

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::vector<double> linspace(double a, double b, std::size_t n) {
    std::vector<double> v(n);
    for (std::size_t i = 0; i < n; ++i) v[i] = n == 1 ? a : a + (b - a) * double(i) / double(n - 1);
    return v;
}

// Evaluates rows in parallel; output order follows the task order.
template <class F>
std::vector<Row> evaluate_rows(std::size_t count, F&& f, std::size_t& failures) {
    std::vector<Row> rows(count);
    std::vector<char> failed(count, 0);
    std::exception_ptr usage;
    const long nc = static_cast<long>(count);
#pragma omp parallel for schedule(dynamic, 1)
    for (long i = 0; i < nc; ++i) {
        try {
            bool ok = true;
            rows[i] = f(static_cast<std::size_t>(i), ok);
            failed[i] = !ok;
        } catch (const ConvergenceError&) {
            failed[i] = 1;
#pragma omp critical(crhyp_cli_rows)
            if (!usage) usage = std::current_exception();
        } catch (...) {
#pragma omp critical(crhyp_cli_rows)
            if (!usage) usage = std::current_exception();
        }
    }
    if (usage) std::rethrow_exception(usage);
    failures += static_cast<std::size_t>(std::count(failed.begin(), failed.end(), 1));
    return rows;
}

struct Point3 {
    double t, r, theta;
};

std::vector<Point3> product(const std::vector<double>& ts, const std::vector<double>& rs,
                            const std::vector<double>& ths) {
    std::vector<Point3> v;
    for (double t : ts)
        for (double r : rs)
            for (double th : ths) v.push_back({t, r, th});
    return v;
}

Row kernel_row(const RunConfig& c, const Point3& p, bool& ok) {
    EvalResult e;
    try {
        e = p_kernel(c.ctx, HeatTime(p.t), CylPoint(p.r, p.theta), c.spec, c.wrap);
    } catch (const ConvergenceError& ce) {
        e = ce.best();
        e.flags |= kTruncated;
    }
    ok = !e.has(kTruncated);
    return {(long long)c.ctx.n, p.t, p.r, p.theta, e.value, e.abs_err, flags_to_string(e.flags)};
}

int dispatch(const RunConfig& c, std::ostream& rows_out, Summary& sum) {
    const int n = c.ctx.n;
    switch (c.command) {
        case Command::Kernel: {
            sum.command = "kernel";
            RowWriter w(rows_out, c.format, {"n", "t", "r", "theta", "p", "abs_err", "flags"});
            auto pts = product(c.t, c.r, c.theta);
            auto rows = evaluate_rows(
                pts.size(), [&](std::size_t i, bool& ok) { return kernel_row(c, pts[i], ok); }, sum.failures);
            double max_err = 0;
            for (const Row& r : rows) {
                w.write(r);
                max_err = std::max(max_err, std::get<double>(r[5]));
            }
            sum.rows = w.rows();
            sum.metrics["max_abs_err"] = max_err;
            break;
        }
        case Command::Table: {
            sum.command = "table";
            RowWriter w(rows_out, c.format, {"n", "t", "r", "theta", "p", "abs_err", "d2", "flags"});
            auto rs = c.r_count ? linspace(0.0, c.r_max, c.r_count) : c.r;
            auto ths = c.theta_count ? linspace(-c.theta_max, c.theta_max, c.theta_count) : c.theta;
            auto pts = product(c.t, rs, ths);
            auto rows = evaluate_rows(
                pts.size(),
                [&](std::size_t i, bool& ok) {
                    Row k = kernel_row(c, pts[i], ok);
                    double d2 = sr_distance(c.ctx, CylPoint(pts[i].r, pts[i].theta)).d2;
                    return Row{k[0], k[1], k[2], k[3], k[4], k[5], d2, k[6]};
                },
                sum.failures);
            for (const Row& r : rows) w.write(r);
            sum.rows = w.rows();
            break;
        }
        case Command::Distance: {
            sum.command = "distance";
            RowWriter w(rows_out, c.format, {"n", "r", "theta", "d2", "d", "regime"});
            for (double r : c.r)
                for (double th : c.theta) {
                    DistanceValue d = sr_distance(c.ctx, CylPoint(r, th));
                    w.write({(long long)n, r, th, d.d2, d.d, std::string(regime_name(d.regime))});
                }
            sum.rows = w.rows();
            break;
        }
        case Command::Asympt: {
            sum.command = "asympt";
            RowWriter w(rows_out, c.format, {"n", "t", "r", "theta", "regime", "value"});
            for (const Point3& p : product(c.t, c.r, c.theta)) {
                HeatTime t(p.t);
                EvalResult e;
                if (c.regime == "diagonal")
                    e = asym_diagonal(c.ctx, t);
                else if (c.regime == "vertical")
                    e = asym_vertical(c.ctx, t, p.theta);
                else if (c.regime == "axis")
                    e = asym_axis(c.ctx, t, p.r);
                else
                    e = asym_general(c.ctx, t, CylPoint(p.r, p.theta));
                w.write({(long long)n, p.t, p.r, p.theta, c.regime, e.value});
            }
            sum.rows = w.rows();
            break;
        }
        case Command::Verify: {
            sum.command = "verify-" + c.check;
            if (c.check == "pde") {
                RowWriter w(rows_out, c.format,
                            {"n", "t", "r", "theta", "h", "dt_estimate", "Lp_estimate", "rel_residual", "halving_ratio"});
                double worst = 0;
                for (const Point3& p : product(c.t, c.r, c.theta)) {
                    FdSteps s{c.h, c.h, c.h};
                    auto a = pde_residual(c.ctx, HeatTime(p.t), CylPoint(p.r, p.theta), s, c.spec);
                    auto b = pde_residual(c.ctx, HeatTime(p.t), CylPoint(p.r, p.theta), s.scaled(0.5), c.spec);
                    double ratio = a.rel_residual / std::max(b.rel_residual, 1e-300);
                    if (a.rel_residual > 1e-3 || ratio < 3.0) ++sum.failures;
                    worst = std::max(worst, a.rel_residual);
                    w.write({(long long)n, p.t, p.r, p.theta, c.h, a.dt_estimate, a.Lp_estimate, a.rel_residual, ratio});
                }
                sum.rows = w.rows();
                sum.metrics["max_rel_residual"] = worst;
            } else if (c.check == "mass") {
                RowWriter w(rows_out, c.format, {"n", "t", "space", "mass", "abs_err"});
                double worst = 0;
                for (double t : c.t) {
                    EvalResult m = normalization_check(c.ctx, HeatTime(t), c.spec);
                    if (std::abs(m.value - 1.0) > 1e-3) ++sum.failures;
                    worst = std::max(worst, std::abs(m.value - 1.0));
                    w.write({(long long)n, t,
                             std::string(c.ctx.space == Space::CompactCircleBundle ? "compact" : "cover"), m.value,
                             m.abs_err});
                }
                sum.rows = w.rows();
                sum.metrics["max_mass_deviation"] = worst;
            } else {
                RowWriter w(rows_out, c.format,
                            {"n", "t", "paths", "dt", "seed", "qualifying", "within_3sigma", "fraction_within",
                             "predicted_total", "aborted"});
                for (double t : c.t) {
                    McConfig mc;
                    mc.paths = c.paths;
                    mc.dt = c.dt;
                    mc.seed = c.seed;
                    McSamples s = mc_simulate(c.ctx, HeatTime(t), mc);
                    double tm = c.ctx.space == Space::CompactCircleBundle ? kPi : c.theta_max;
                    McReport rep = mc_compare(s, c.ctx, HeatTime(t),
                                              uniform_grid(c.ctx, c.r_max, c.r_bins, tm, c.theta_bins), c.spec);
                    if (rep.fraction_within < 0.95) ++sum.failures;
                    w.write({(long long)n, t, (long long)c.paths, c.dt, (long long)c.seed, (long long)rep.qualifying,
                             (long long)rep.within_3sigma, rep.fraction_within, rep.predicted_total,
                             (long long)rep.aborted});
                    sum.metrics["fraction_within"] = rep.fraction_within;
                }
                sum.rows = w.rows();
            }
            break;
        }
        case Command::Mc: {
            sum.command = "mc";
            RowWriter w(rows_out, c.format, {"r_lo", "r_hi", "theta_lo", "theta_hi", "count", "predicted", "z"});
            McConfig mc;
            mc.paths = c.paths;
            mc.dt = c.dt;
            mc.seed = c.seed;
            const double t = c.t.front();
            McSamples s = mc_simulate(c.ctx, HeatTime(t), mc);
            double tm = c.ctx.space == Space::CompactCircleBundle ? kPi : c.theta_max;
            McReport rep =
                mc_compare(s, c.ctx, HeatTime(t), uniform_grid(c.ctx, c.r_max, c.r_bins, tm, c.theta_bins), c.spec);
            const HistogramGrid& g = rep.grid;
            for (std::size_t i = 0; i < g.nr(); ++i)
                for (std::size_t j = 0; j < g.ntheta(); ++j) {
                    std::size_t b = g.index(i, j);
                    w.write({g.r_edges[i], g.r_edges[i + 1], g.theta_edges[j], g.theta_edges[j + 1],
                             (long long)g.counts[b], rep.predicted[b] * double(rep.used), rep.z[b]});
                }
            sum.rows = w.rows();
            sum.metrics["fraction_within"] = rep.fraction_within;
            sum.metrics["qualifying"] = double(rep.qualifying);
            sum.metrics["aborted"] = double(rep.aborted);
            sum.metrics["outside"] = double(rep.outside);
            if (rep.fraction_within < 0.95) ++sum.failures;
            break;
        }
    }
    return sum.failures ? kExitNumeric : kExitOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Subelliptic heat kernel on the CR hyperbolic space and its universal cover", "crhyp"};
    app.set_config("--config", "", "key = value file merged under explicit flags");
    app.require_subcommand(1);

    RunConfig c;
    int n = 1;
    std::string space = "cover", format = "csv";
    int kmax = 0;

    app.add_option("--n", n, "complex dimension index")->check(CLI::Range(1, kMaxDimension));
    app.add_option("--t", c.t, "heat time(s)")->check(CLI::PositiveNumber)->delimiter(',');
    app.add_option("--r", c.r, "radial coordinate(s)")->check(CLI::NonNegativeNumber)->delimiter(',');
    app.add_option("--theta", c.theta, "fiber coordinate(s)")->delimiter(',');
    app.add_option("--space", space, "compact or cover")->check(CLI::IsMember({"compact", "cover"}));
    app.add_option("--rel-tol", c.spec.rel_tol, "relative tolerance")->check(CLI::PositiveNumber);
    app.add_option("--abs-tol", c.spec.abs_tol, "absolute tolerance")->check(CLI::PositiveNumber);
    app.add_option("--kmax", kmax, "periodization truncation")->check(CLI::PositiveNumber);
    app.add_option("--seed", c.seed, "Monte Carlo seed");
    app.add_option("--paths", c.paths, "Monte Carlo paths")->check(CLI::Range(std::size_t(1000), std::size_t(1) << 40));
    app.add_option("--dt", c.dt, "Euler-Maruyama step")->check(CLI::PositiveNumber);
    app.add_option("--out", c.output_path, "output file (rows); summary goes to stdout");
    app.add_option("--format", format, "csv or jsonl")->check(CLI::IsMember({"csv", "jsonl"}));
    app.add_option("--fd-step", c.h, "finite-difference step")->check(CLI::PositiveNumber);
    app.add_option("--r-max", c.r_max, "grid extent in r")->check(CLI::PositiveNumber);
    app.add_option("--theta-max", c.theta_max, "grid half-extent in theta")->check(CLI::PositiveNumber);
    app.add_option("--r-bins", c.r_bins, "histogram bins in r")->check(CLI::PositiveNumber);
    app.add_option("--theta-bins", c.theta_bins, "histogram bins in theta")->check(CLI::PositiveNumber);
    app.add_option("--r-count", c.r_count, "table grid points in r");
    app.add_option("--theta-count", c.theta_count, "table grid points in theta");

    auto* kernel = app.add_subcommand("kernel", "evaluate p_t at points");
    auto* distance = app.add_subcommand("distance", "sub-Riemannian distance");
    auto* asympt = app.add_subcommand("asympt", "small-time asymptotics");
    asympt->add_option("--regime", c.regime, "diagonal, vertical, axis or general")
        ->check(CLI::IsMember({"diagonal", "vertical", "axis", "general"}));
    auto* verify = app.add_subcommand("verify", "run a verification check");
    verify->add_option("--check", c.check, "pde, mass or mc")->check(CLI::IsMember({"pde", "mass", "mc"}));
    auto* mc = app.add_subcommand("mc", "Monte Carlo histogram against the kernel");
    auto* table = app.add_subcommand("table", "kernel and distance over an (r, theta) grid");
    for (auto* s : {kernel, distance, asympt, verify, mc, table}) s->fallthrough();

    try {
        std::vector<std::string> rev(args.rbegin(), args.rend());
        app.parse(rev);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitUsage;
    }

    try {
        c.ctx = EvalContext(n, space == "compact" ? Space::CompactCircleBundle : Space::UniversalCover);
        c.wrap.k_max = kmax;
        c.format = format == "jsonl" ? Format::Jsonl : Format::Csv;
        if (kernel->parsed()) c.command = Command::Kernel;
        if (distance->parsed()) c.command = Command::Distance;
        if (asympt->parsed()) c.command = Command::Asympt;
        if (verify->parsed()) c.command = Command::Verify;
        if (mc->parsed()) c.command = Command::Mc;
        if (table->parsed()) c.command = Command::Table;
        if (c.t.empty() || c.r.empty() || c.theta.empty()) throw UsageError("empty --t, --r or --theta list");
        c.spec.validate();
    } catch (const std::exception& e) {
        err << "crhyp: " << e.what() << '\n';
        return kExitUsage;
    }

    std::ofstream file;
    if (!c.output_path.empty()) {
        file.open(c.output_path);
        if (!file) {
            err << "crhyp: cannot write " << c.output_path << '\n';
            return kExitUsage;
        }
    }
    std::ostream& rows_out = file.is_open() ? static_cast<std::ostream&>(file) : out;
    std::ostream& summary_out = file.is_open() ? out : err;

    Summary sum;
    int code;
    try {
        code = dispatch(c, rows_out, sum);
    } catch (const ConvergenceError& e) {
        err << "crhyp: " << e.what() << '\n';
        return kExitNumeric;
    } catch (const RegimeError& e) {
        err << "crhyp: " << e.what() << '\n';
        return kExitUsage;
    } catch (const DomainError& e) {
        err << "crhyp: " << e.what() << '\n';
        return kExitUsage;
    } catch (const std::exception& e) {
        err << "crhyp: " << e.what() << '\n';
        return kExitNumeric;
    }
    summary_out << sum.json() << '\n';
    return code;
}

}  // namespace crhyp::cli
