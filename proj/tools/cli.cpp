#include "cli.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <map>
#include <sstream>
#include <stdexcept>

#include <CLI11.hpp>

#include "critlab/covariance/closed_forms.hpp"
#include "critlab/covariance/series.hpp"
#include "critlab/ensemble/ensemble.hpp"
#include "critlab/exactseries/series_json.hpp"
#include "critlab/kacrice/kacrice.hpp"
#include "critlab/spectra/spectra.hpp"
#include "critlab/verify/verify_series.hpp"

#ifndef CRITLAB_BUILD_ID
#define CRITLAB_BUILD_ID "critlab-dev"
#endif

namespace critlab::cli {

namespace {

using json = nlohmann::json;

const double kJ0 = 2.0 / (3.0 * M_PI * M_PI);
const double kK1 = 5.0 / (3.0 * M_PI);

class UsageError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct Result {
    std::string text;
    int code = ok;
};

std::string num(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12g", x);
    return buf;
}

std::string header(const RunConfig& c) {
    return "# config " + c.to_json().dump() + "\n# build " CRITLAB_BUILD_ID "\n";
}

void write_text(const std::string& path, const std::string& text, std::ostream& out) {
    if (path.empty() || path == "-") {
        out << text;
        return;
    }
    std::ofstream f(path, std::ios::binary);
    if (!f) throw IoError("cannot open " + path + " for writing");
    f << text;
    if (!f) throw IoError("write to " + path + " failed");
}

std::string read_text(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw IoError("cannot open " + path);
    std::ostringstream s;
    s << f.rdbuf();
    return s.str();
}

std::int64_t parse_count(const std::string& text, const char* what) {
    double v = 0;
    std::size_t used = 0;
    try {
        v = std::stod(text, &used);
    } catch (const std::exception&) {
        throw UsageError(std::string(what) + ": not a number: " + text);
    }
    if (used != text.size() || !(v >= 1) || v > 9e15 || v != std::floor(v))
        throw UsageError(std::string(what) + ": expected a positive integer, got " + text);
    return static_cast<std::int64_t>(v);
}

RandomSectionModel model_of(const RunConfig& c) {
    return c.model == "bf" ? RandomSectionModel::bargmann_fock(c.degree) : RandomSectionModel::su2(c.degree);
}

double window_of(const RunConfig& c) {
    if (c.window > 0) return c.window;
    const auto m = model_of(c);
    return c.model == "bf" ? max_window(m) : std::min(4.0, 0.5 * max_window(m));
}

// ---- commands

Result cmd_verify_series(const RunConfig& c) {
    VerifyOptions opt;
    opt.order = c.order;
    if (!c.perturb_y.empty()) opt.perturb = YPerturbation{c.perturb_y[0] - 1, c.perturb_y[1] - 1, c.perturb_y[2], 1};
    const auto rep = verify_series(opt);

    std::ostringstream s;
    s << header(c);
    auto row = [&](const std::string& a, const std::string& b, const std::string& d, const std::string& e) {
        s << std::left << std::setw(26) << a << ' ' << std::setw(28) << b << ' ' << std::setw(28) << d << ' ' << e
          << '\n';
    };
    row("check", "expected", "computed", "status");
    for (const auto& ch : rep.checks) row(ch.name, ch.expected, ch.computed, to_string(ch.status));
    s << "# certified lambda precision:";
    for (int p : rep.lambda_precision) s << " O(t^" << p << ")";
    s << "\n# symmetric residual orders:";
    for (int p : rep.symmetric) s << ' ' << p;
    s << "\n# " << rep.checks.size() << " checks: " << rep.count(CheckStatus::pass) << " pass, "
      << rep.count(CheckStatus::fail) << " fail, " << rep.count(CheckStatus::skipped) << " skipped\n";
    for (const auto& ch : rep.checks)
        if (ch.status == CheckStatus::fail) s << "# FAILED " << ch.name << '\n';
    return {s.str(), rep.all_pass() ? ok : numeric};
}

Result cmd_eigen(const RunConfig& c) {
    const auto Y = y_series(y_precision_for(c.order));
    const auto es = eigensystem(Y);
    if (c.emit == "json") {
        json j;
        j["config"] = c.to_json();
        j["build"] = CRITLAB_BUILD_ID;
        j["lambda"] = json::array();
        for (const auto& l : es.lambda) j["lambda"].push_back(to_json(l));
        j["U"] = to_json(es.U);
        return {j.dump(1) + "\n"};
    }
    std::ostringstream s;
    s << header(c) << "kind,i,j,precision,power,value\n";
    auto series_rows = [&](const char* kind, int i, int jj, const TruncatedSeries& x) {
        const std::string p = x.precision() ? std::to_string(*x.precision()) : "exact";
        if (x.is_zero()) return;
        for (std::size_t k = 0; k < x.coeffs().size(); ++k)
            if (!x.coeffs()[k].is_zero())
                s << kind << ',' << i << ',' << jj << ',' << p << ',' << x.valuation() + int(k) << ','
                  << x.coeffs()[k].to_string() << '\n';
    };
    for (int i = 0; i < 4; ++i) series_rows("lambda", i + 1, 0, es.lambda[i]);
    for (int i = 0; i < 4; ++i)
        for (int jj = 0; jj < 4; ++jj) series_rows("U", i + 1, jj + 1, es.U(i, jj));
    return {s.str()};
}

template <class M>
json complex_matrix(const M& m) {
    json rows = json::array();
    for (int i = 0; i < m.rows(); ++i) {
        json row = json::array();
        for (int k = 0; k < m.cols(); ++k) row.push_back({m(i, k).real(), m(i, k).imag()});
        rows.push_back(row);
    }
    return rows;
}

Result cmd_dump_blocks(const RunConfig& c) {
    const auto b = blocks_at<double>(c.r);
    const auto lam = lambda_of(b);
    json j;
    j["config"] = c.to_json();
    j["build"] = CRITLAB_BUILD_ID;
    j["r"] = c.r;
    j["t"] = c.r * c.r;
    j["A"] = complex_matrix(b.A);
    j["B"] = complex_matrix(b.B);
    j["C"] = complex_matrix(b.C);
    j["Lambda"] = complex_matrix(lam.entries);
    if (c.series_precision > 0) {
        j["Lambda_series"] = to_json(lambda_series(c.series_precision));
        j["detA_series"] = to_json(detA_series(c.series_precision));
    }
    return {j.dump(1) + "\n"};
}

Result cmd_kacrice(const RunConfig& c) {
    const auto src = c.source == "blocks" ? LambdaSource::blocks : LambdaSource::closed_form;
    std::ostringstream s;
    s << header(c) << "t,r,J,stderr,n,seed\n";
    for (double t : c.t_grid) {
        const auto e = two_point_J(t, c.samples, c.seed, c.workers, src);
        s << num(t) << ',' << num(std::sqrt(t)) << ',' << num(e.value) << ',' << num(e.std_error) << ','
          << e.n_samples << ',' << e.seed << '\n';
    }
    return {s.str()};
}

Result cmd_simulate(const RunConfig& c, const std::string& catalog_path, std::ostream& out) {
    const auto model = model_of(c);
    const WindowSpec window{window_of(c), {c.center[0], c.center[1]}};
    FinderOptions opt;
    opt.grid_density = c.grid_density;
    opt.tol = c.tol;
    const auto edges = parse_bins(c.bins);
    const auto cats = simulate_catalogs(model, c.sections, c.seed, window, opt, c.workers);
    const auto dens = estimate_density(cats);
    const auto h = estimate_pair_correlation(
        cats, edges, c.edge == "per-bin" ? EdgeCorrection::border_per_bin : EdgeCorrection::border);
    int n_deg = 0;
    for (const auto& cat : cats) n_deg += cat.degenerate;

    std::ostringstream s;
    s << header(c);
    s << "# window " << num(window.radius) << '\n';
    s << "# density " << num(dens.density) << " stderr " << num(dens.std_error) << " points " << dens.n_points
      << " sections " << cats.size() << " degenerate " << n_deg << '\n';
    s << "r_lo,r_hi,k2_hat,stderr,n_pairs\n";
    for (std::size_t b = 0; b + 1 < h.edges.size(); ++b)
        s << num(h.edges[b]) << ',' << num(h.edges[b + 1]) << ',' << num(h.k2_hat[b]) << ',' << num(h.std_error[b])
          << ',' << h.counts[b] << '\n';

    if (!catalog_path.empty()) {
        std::ostringstream cs;
        cs << json{{"config", c.to_json()}, {"build", CRITLAB_BUILD_ID}}.dump() << '\n';
        write_catalog_jsonl(cs, cats);
        write_text(catalog_path, cs.str(), out);
    }
    return {s.str()};
}

struct CsvTable {
    std::vector<std::string> comments;  // '#' lines without the marker
    std::map<std::string, std::size_t> column;
    std::vector<std::vector<double>> rows;

    double at(std::size_t r, const std::string& name) const {
        auto it = column.find(name);
        if (it == column.end()) throw UsageError("missing column " + name);
        return rows[r][it->second];
    }
};

CsvTable read_csv(const std::string& path) {
    std::istringstream in(read_text(path));
    CsvTable t;
    std::string line;
    bool have_header = false;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        if (line[0] == '#') {
            t.comments.push_back(line.substr(std::min<std::size_t>(2, line.size())));
            continue;
        }
        std::vector<std::string> cells;
        std::stringstream ls(line);
        for (std::string cell; std::getline(ls, cell, ',');) cells.push_back(cell);
        if (!have_header) {
            for (std::size_t k = 0; k < cells.size(); ++k) t.column[cells[k]] = k;
            have_header = true;
            continue;
        }
        std::vector<double> v;
        for (const auto& cell : cells) {
            try {
                v.push_back(std::stod(cell));
            } catch (const std::exception&) {
                throw UsageError(path + ": bad number " + cell);
            }
        }
        if (v.size() != t.column.size()) throw UsageError(path + ": ragged row");
        t.rows.push_back(std::move(v));
    }
    if (!have_header) throw UsageError(path + ": no header row");
    return t;
}

Result cmd_report(const RunConfig& c) {
    const auto jc = read_csv(c.j_curve);
    const auto pc = read_csv(c.pairs);

    std::vector<CorrelationEstimate> pts;
    for (std::size_t r = 0; r < jc.rows.size(); ++r) {
        CorrelationEstimate e;
        e.t = jc.at(r, "t");
        e.value = jc.at(r, "J");
        e.std_error = jc.at(r, "stderr");
        pts.push_back(e);
    }
    if (pts.size() < 2) throw UsageError(c.j_curve + ": need at least two t values to extrapolate");

    double dens = kK1, dens_se = 0;
    bool measured = false;
    for (const auto& line : pc.comments) {
        std::istringstream ls(line);
        std::string key, se_key;
        if (ls >> key && key == "density" && ls >> dens >> se_key >> dens_se) measured = true;
    }

    const auto x = extrapolate_to_zero(pts);
    const double rel = x.intercept / kJ0 - 1;
    const bool pass = std::abs(rel) <= 0.01;

    std::ostringstream s;
    s << header(c);
    s << "# pair ratios divide by the " << (measured ? "measured" : "analytic") << " one-point density squared\n";
    s << "quantity,x,value,stderr,reference,ratio,status\n";
    auto row = [&](const std::string& q, const std::string& xx, double v, const std::string& se, const std::string& ref,
                   const std::string& ratio, const std::string& st) {
        s << q << ',' << xx << ',' << num(v) << ',' << se << ',' << ref << ',' << ratio << ',' << st << '\n';
    };
    row("ref_J0", "", kJ0, "", "", num(kJ0 / (kK1 * kK1)), "");
    row("ref_K1_squared", "", kK1 * kK1, "", "", "1", "");
    for (const auto& p : pts) row("J", num(p.t), p.value, num(p.std_error), num(kJ0), num(p.value / kJ0), "");
    row("J0_extrapolated", "0", x.intercept, num(x.std_error), num(kJ0), num(x.intercept / kJ0), pass ? "PASS" : "FAIL");
    if (measured) row("K1", "", dens, num(dens_se), num(kK1), num(dens / kK1), "");
    for (std::size_t r = 0; r < pc.rows.size(); ++r) {
        const double mid = 0.5 * (pc.at(r, "r_lo") + pc.at(r, "r_hi"));
        const double k2 = pc.at(r, "k2_hat");
        row("K2_hat", num(mid), k2, num(pc.at(r, "stderr")), num(dens * dens), num(k2 / (dens * dens)), "");
    }
    return {s.str(), pass ? ok : numeric};
}

Result dispatch(const RunConfig& c, const std::string& catalog_path, std::ostream& out) {
    if (c.command == "verify-series") return cmd_verify_series(c);
    if (c.command == "eigen") return cmd_eigen(c);
    if (c.command == "dump-blocks") return cmd_dump_blocks(c);
    if (c.command == "kacrice") return cmd_kacrice(c);
    if (c.command == "simulate") return cmd_simulate(c, catalog_path, out);
    if (c.command == "report") return cmd_report(c);
    throw UsageError("unknown command " + c.command);
}

}  // namespace

// ---- RunConfig

json RunConfig::to_json() const {
    json j;
    j["command"] = command;
    j["seed"] = seed;
    j["workers"] = workers;
    if (command == "verify-series") {
        j["order"] = order;
        if (!perturb_y.empty()) j["perturb_y"] = perturb_y;
    } else if (command == "eigen") {
        j["order"] = order;
        j["emit"] = emit;
    } else if (command == "dump-blocks") {
        j["r"] = r;
        j["series_precision"] = series_precision;
    } else if (command == "kacrice") {
        j["t_grid"] = t_grid;
        j["samples"] = samples;
        j["source"] = source;
    } else if (command == "simulate") {
        j["model"] = model;
        j["degree"] = degree;
        j["sections"] = sections;
        j["bins"] = bins;
        j["window"] = window;
        j["center"] = center;
        j["edge"] = edge;
        j["grid_density"] = grid_density;
        j["tol"] = tol;
    } else if (command == "report") {
        j["j_curve"] = j_curve;
        j["pairs"] = pairs;
    }
    return j;
}

RunConfig RunConfig::from_json(const json& j) {
    RunConfig c;
    try {
        c.command = j.at("command").get<std::string>();
        c.seed = j.value("seed", c.seed);
        c.workers = j.value("workers", c.workers);
        c.order = j.value("order", c.order);
        c.perturb_y = j.value("perturb_y", c.perturb_y);
        c.emit = j.value("emit", c.emit);
        c.r = j.value("r", c.r);
        c.series_precision = j.value("series_precision", c.series_precision);
        c.t_grid = j.value("t_grid", c.t_grid);
        c.samples = j.value("samples", c.samples);
        c.source = j.value("source", c.source);
        c.model = j.value("model", c.model);
        c.degree = j.value("degree", c.degree);
        c.sections = j.value("sections", c.sections);
        c.bins = j.value("bins", c.bins);
        c.window = j.value("window", c.window);
        c.center = j.value("center", c.center);
        c.edge = j.value("edge", c.edge);
        c.grid_density = j.value("grid_density", c.grid_density);
        c.tol = j.value("tol", c.tol);
        c.j_curve = j.value("j_curve", c.j_curve);
        c.pairs = j.value("pairs", c.pairs);
    } catch (const json::exception& e) {
        throw UsageError(std::string("bad config: ") + e.what());
    }
    return c;
}

void RunConfig::validate() const {
    auto need = [](bool ok_, const std::string& msg) {
        if (!ok_) throw UsageError(msg);
    };
    need(workers >= 1 && workers <= 1024, "workers must be in [1, 1024]");
    if (command == "verify-series" || command == "eigen") {
        need(order >= 8 && order <= 60, "order must be in [8, 60]");
        need(perturb_y.empty() || perturb_y.size() == 3, "perturb-y takes i,j,power");
        if (perturb_y.size() == 3)
            need(perturb_y[0] >= 1 && perturb_y[0] <= 4 && perturb_y[1] >= 1 && perturb_y[1] <= 4 && perturb_y[2] >= 0,
                 "perturb-y indices out of range");
        need(emit == "json" || emit == "csv", "emit must be json or csv");
    } else if (command == "dump-blocks") {
        need(std::isfinite(r) && r > 0, "r must be positive");
        need(series_precision >= 0 && series_precision <= 60, "series precision must be in [0, 60]");
    } else if (command == "kacrice") {
        need(!t_grid.empty(), "t-grid is empty");
        for (double t : t_grid)
            need(std::isfinite(t) && t >= kMinT, "every t must be >= " + num(kMinT) + ", got " + num(t));
        need(samples >= 1, "samples must be positive");
        need(source == "closed" || source == "blocks", "source must be closed or blocks");
    } else if (command == "simulate") {
        need(model == "bf" || model == "su2", "model must be bf or su2");
        need(model == "su2" ? degree >= 2 : degree >= 8, "degree too small for the model");
        need(sections >= 1, "sections must be positive");
        need(center.size() == 2 && std::isfinite(center[0]) && std::isfinite(center[1]), "center takes re,im");
        need(model == "su2" || (center[0] == 0 && center[1] == 0), "center applies to su2 only");
        need(window >= 0 && std::isfinite(window), "window must be >= 0");
        need(edge == "border" || edge == "per-bin", "edge must be border or per-bin");
        need(grid_density > 0 && tol > 0, "grid density and tol must be positive");
        std::vector<double> e;
        try {
            e = parse_bins(bins);
        } catch (const std::exception& ex) {
            throw UsageError(ex.what());
        }
        const double w = window_of(*this);
        need(model != "bf" || w <= max_window(model_of(*this)) + 1e-12, "window exceeds sqrt(K) - 3");
        need(e.back() < w, "largest bin edge must be below the window radius " + num(w));
    } else if (command == "report") {
        need(!j_curve.empty() && !pairs.empty(), "report needs --j-curve and --pairs");
    } else {
        throw UsageError("unknown command '" + command + "'");
    }
}

RunConfig load_config(const std::string& path) {
    const std::string text = read_text(path);
    const auto first = text.find_first_not_of(" \t\r\n");
    if (first != std::string::npos && text[first] == '{') {
        json j;
        try {
            j = json::parse(text);
        } catch (const json::exception& e) {
            throw UsageError(path + ": " + e.what());
        }
        return RunConfig::from_json(j.contains("config") ? j["config"] : j);
    }
    std::istringstream in(text);
    for (std::string line; std::getline(in, line);) {
        const std::string key = "# config ";
        if (line.rfind(key, 0) == 0) {
            try {
                return RunConfig::from_json(json::parse(line.substr(key.size())));
            } catch (const json::exception& e) {
                throw UsageError(path + ": " + e.what());
            }
        }
    }
    throw UsageError(path + ": no embedded config");
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    RunConfig c;
    std::string out_path, catalog_path, config_path, samples_text = "1e6";
    CLI::App app{"Two-point correlation of critical points: exact series, Kac-Rice Monte Carlo, ensembles"};
    app.fallthrough();
    app.require_subcommand(0, 1);

    auto* o_seed = app.add_option("--seed", c.seed, "Random seed");
    auto* o_workers = app.add_option("--workers", c.workers, "Worker threads (env CRITLAB_WORKERS)");
    app.add_option("--out", out_path, "Output file (default stdout)");
    auto* o_order = app.add_option("--order", c.order, "Series order to certify")->capture_default_str();
    app.add_option("--config", config_path, "Rerun from the config embedded in a previous output");

    auto* verify = app.add_subcommand("verify-series", "Check every exact coefficient against the displayed values");
    verify->add_option("--perturb-y", c.perturb_y, "Add 1 to a coefficient of Y (i,j,power)")
        ->delimiter(',')
        ->expected(3)
        ->group("");

    auto* eigen = app.add_subcommand("eigen", "Dump eigenvalue and eigenvector series");
    eigen->add_option("--emit", c.emit, "json or csv")->check(CLI::IsMember({"json", "csv"}));

    auto* dump = app.add_subcommand("dump-blocks", "Covariance blocks A, B, C, Lambda at separation r");
    dump->add_option("--r", c.r, "Separation")->required();
    dump->add_option("--series-precision", c.series_precision, "Also dump exact series to this precision");

    auto* kac = app.add_subcommand("kacrice", "Monte Carlo estimate of J(t)");
    kac->add_option("--t-grid", c.t_grid, "Comma-separated t = r^2 values")->delimiter(',')->required();
    kac->add_option("--samples", samples_text, "Samples per grid point")->capture_default_str();
    kac->add_option("--source", c.source, "closed or blocks")->check(CLI::IsMember({"closed", "blocks"}));

    auto* sim = app.add_subcommand("simulate", "Critical points of sampled sections and their pair correlation");
    sim->add_option("--model", c.model, "bf or su2")->check(CLI::IsMember({"bf", "su2"}));
    auto* o_K = sim->add_option("--K", c.degree, "Bargmann-Fock truncation degree");
    auto* o_N = sim->add_option("--N", c.degree, "SU(2) polynomial degree");
    o_K->excludes(o_N);
    sim->add_option("--sections", c.sections, "Number of sections");
    sim->add_option("--bins", c.bins, "Histogram edges a:h:b")->capture_default_str();
    sim->add_option("--window", c.window, "Window radius in scaled units (default per model)");
    sim->add_option("--center", c.center, "SU(2) window centre re,im")->delimiter(',')->expected(2);
    sim->add_option("--edge", c.edge, "border or per-bin")->check(CLI::IsMember({"border", "per-bin"}));
    sim->add_option("--grid-density", c.grid_density, "Newton start grid density");
    sim->add_option("--tol", c.tol, "Newton residual tolerance");
    sim->add_option("--catalog", catalog_path, "Also write the point catalogs as JSON lines");

    auto* rep = app.add_subcommand("report", "Merge a J curve and a pair histogram into one table");
    rep->add_option("--j-curve", c.j_curve, "CSV from kacrice")->required();
    rep->add_option("--pairs", c.pairs, "CSV from simulate")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? ok : usage;
    }

    try {
        if (!config_path.empty()) {
            if (!app.get_subcommands().empty() || o_seed->count() || o_workers->count() || o_order->count())
                throw UsageError("--config takes only --out besides itself");
            c = load_config(config_path);
        } else {
            if (app.get_subcommands().empty()) throw UsageError("a command is required (see --help)");
            c.command = app.get_subcommands().front()->get_name();
            if (!o_workers->count())
                if (const char* w = std::getenv("CRITLAB_WORKERS")) {
                    try {
                        c.workers = std::stoi(w);
                    } catch (const std::exception&) {
                        throw UsageError(std::string("CRITLAB_WORKERS is not an integer: ") + w);
                    }
                }
            if (c.command == "kacrice") c.samples = parse_count(samples_text, "--samples");
        }
        c.validate();
        const Result r = dispatch(c, catalog_path, out);
        write_text(out_path, r.text, out);
        if (r.code != ok) err << "critlab: " << c.command << " reported failures\n";
        return r.code;
    } catch (const UsageError& e) {
        err << "critlab: " << e.what() << '\n';
        return usage;
    } catch (const IoError& e) {
        err << "critlab: " << e.what() << '\n';
        return io;
    } catch (const std::exception& e) {
        err << "critlab: " << e.what() << '\n';
        return numeric;
    }
}

}  // namespace critlab::cli
