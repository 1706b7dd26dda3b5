/*
   Copyright 2026 The toomcook Authors

   Licensed under the Apache License, Version 2.0 (the "License");
   you may not use this file except in compliance with the License.
   You may obtain a copy of the License at

       http://www.apache.org/licenses/LICENSE-2.0

   Unless required by applicable law or agreed to in writing, software
   distributed under the License is distributed on an "AS IS" BASIS,
   WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
   See the License for the specific language governing permissions and
   limitations under the License.
*/
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "toomcook/toomcook.hpp"

namespace fs = std::filesystem;
using namespace toomcook;

namespace {

enum ExitCode { kOk = 0, kGeneric = 1, kValidation = 2, kIo = 3, kNumerical = 4 };

struct Common {
    std::uint64_t seed = 0;
    int trials = 5000;
    int threads = 0;
    std::string precision = "fp32";
    std::string dot_order = "huffman";
    std::string channel_sum = "linear";
    std::string format = "text";
    std::string out;

    [[nodiscard]] ConvConfig config() const {
        return {parse_precision(precision), parse_dot_order(dot_order), parse_channel_sum(channel_sum)};
    }
    [[nodiscard]] MeasureOptions measure(int channels = 1) const {
        if (trials < 1)
            throw ValidationError("--trials must be >= 1");
        MeasureOptions o;
        o.trials = trials;
        o.seed = seed;
        o.threads = threads;
        o.channels = channels;
        return o;
    }
};

void add_common(CLI::App& cmd, Common& c) {
    cmd.add_option("--seed", c.seed, "RNG seed; equal seeds give identical output")->capture_default_str();
    cmd.add_option("--trials", c.trials, "random trials per measurement")->capture_default_str();
    cmd.add_option("--threads", c.threads, "worker threads, 0 = hardware concurrency")->capture_default_str();
    cmd.add_option("--precision", c.precision, "fp32 | fp64 | mixed")
        ->check(CLI::IsMember({"fp32", "fp64", "mixed"}))
        ->capture_default_str();
    cmd.add_option("--dot-order", c.dot_order, "linear | huffman")
        ->check(CLI::IsMember({"linear", "huffman"}))
        ->capture_default_str();
    cmd.add_option("--channel-sum", c.channel_sum, "linear | pairwise")
        ->check(CLI::IsMember({"linear", "pairwise"}))
        ->capture_default_str();
    cmd.add_option("--format", c.format, "text | json | csv")
        ->check(CLI::IsMember({"text", "json", "csv"}))
        ->capture_default_str();
    cmd.add_option("--out", c.out, "output file (relative paths resolve under $TOOMCOOK_OUT_DIR); stdout if omitted");
}

fs::path output_path(const std::string& out) {
    fs::path p(out);
    if (p.is_relative()) {
        if (const char* dir = std::getenv("TOOMCOOK_OUT_DIR"); dir && *dir)
            p = fs::path(dir) / p;
    }
    return p;
}

void emit(const Common& c, const std::string& content) {
    if (c.out.empty())
        std::cout << content;
    else
        write_file_atomic(output_path(c.out), content);
}

std::string dump(const Json& j) { return j.dump(2) + "\n"; }

std::string sci(double v) {
    std::ostringstream os;
    os.precision(6);
    os << std::scientific << v;
    return os.str();
}

// --- gen -------------------------------------------------------------------

struct GenArgs {
    int n_h = 3;
    std::optional<int> n_o;
    std::string points;
    std::optional<int> chebyshev;
    bool chebyshev_infinity = false;
    std::string modified = "auto";
};

void run_gen(const Common& c, const GenArgs& a) {
    if (a.points.empty() == !a.chebyshev.has_value())
        throw ValidationError("give exactly one of --points or --chebyshev");
    std::vector<Point> points;
    if (a.chebyshev) {
        if (*a.chebyshev < 1)
            throw ValidationError("--chebyshev needs N >= 1");
        points = a.chebyshev_infinity ? chebyshev_set(*a.chebyshev, ChebyshevLayout::with_infinity)
                                      : chebyshev_points(*a.chebyshev);
    } else {
        points = parse_points(a.points);
    }
    require_distinct(points);
    const int n = static_cast<int>(points.size());
    const int n_o = a.n_o.value_or(n - a.n_h + 1);
    const bool has_inf = std::any_of(points.begin(), points.end(), [](const Point& p) { return p.is_infinity(); });
    if (a.modified == "yes" && !has_inf)
        throw ValidationError("--modified yes needs an inf point");
    if (a.modified == "no" && has_inf)
        throw ValidationError("--modified no cannot use an inf point");
    const auto ts = build_transform_set(a.n_h, n_o, points);
    if (c.format == "csv")
        throw ValidationError("gen writes json or text");
    if (!c.out.empty()) {
        // the matrix file is always JSON so other commands can load it
        write_file_atomic(output_path(c.out), dump(to_json(ts)));
        if (c.format == "text")
            std::cout << format_text(ts);
        return;
    }
    std::cout << (c.format == "json" ? dump(to_json(ts)) : format_text(ts));
}

// --- convolve ----------------------------------------------------------------

struct ConvolveArgs {
    std::string matrix;
    std::string kernel;
    std::string input;
    bool running_error = false;
};

void run_convolve(const Common& c, const ConvolveArgs& a) {
    const auto cfg = c.config();
    const auto h = load_tensor(a.kernel);
    const auto x = load_tensor(a.input);
    if (h.dims != x.dims)
        throw ValidationError("kernel and input dims differ");
    Tensor y;
    std::vector<double> bounds;
    if (a.matrix.empty()) {
        if (a.running_error)
            throw ValidationError("--running-error needs --matrix");
        y = conv_direct(h, x, cfg.precision, cfg.channel_sum);
    } else {
        const auto ts = load_transform_set(a.matrix);
        if (a.running_error) {
            if (h.dims != 1)
                throw ValidationError("--running-error supports 1D only");
            auto r = running_error_1d(ts, h, x, cfg);
            y = std::move(r.output);
            bounds = std::move(r.bounds);
        } else {
            y = h.dims == 1 ? conv_1d(ts, h, x, cfg) : conv_2d(ts, h, x, cfg);
        }
    }
    if (c.format == "csv") {
        auto text = tensor_to_csv(y);
        if (!bounds.empty()) {
            text += "running_error\n";
            for (std::size_t i = 0; i < bounds.size(); ++i)
                text += sci(bounds[i]) + (i + 1 == bounds.size() ? "\n" : ",");
        }
        emit(c, text);
    } else if (c.format == "json") {
        auto j = to_json(y);
        if (!bounds.empty())
            j["running_error"] = bounds;
        emit(c, dump(j));
    } else {
        std::ostringstream os;
        os.precision(9);
        for (int ch = 0; ch < y.channels; ++ch) {
            const auto v = y.channel(ch);
            for (std::size_t i = 0; i < v.size(); ++i)
                os << v[i] << ((i + 1) % static_cast<std::size_t>(y.size) == 0 ? '\n' : ' ');
        }
        if (!bounds.empty()) {
            os << "running error bounds:";
            for (double b : bounds)
                os << ' ' << sci(b);
            os << '\n';
        }
        emit(c, os.str());
    }
}

// --- measure -----------------------------------------------------------------

struct MeasureArgs {
    std::string matrix;
    std::string points;
    int n_h = 3;
    bool direct = false;
    int dims = 1;
    int channels = 1;
    bool per_trial = false;
};

void run_measure(const Common& c, const MeasureArgs& a) {
    const int sources = !a.matrix.empty() + !a.points.empty() + a.direct;
    if (sources != 1)
        throw ValidationError("give exactly one of --matrix, --points or --direct");
    if (a.channels < 1)
        throw ValidationError("--channels must be >= 1");
    const auto cfg = c.config();
    auto opt = c.measure(a.channels);
    opt.keep_trials = a.per_trial;
    ErrorReport r;
    if (a.direct) {
        r = measure_direct(a.n_h, a.dims, cfg, opt);
    } else {
        TransformSet ts;
        if (!a.matrix.empty()) {
            ts = load_transform_set(a.matrix);
        } else {
            const auto pts = parse_points(a.points);
            ts = build_transform_set(a.n_h, static_cast<int>(pts.size()) - a.n_h + 1, pts);
        }
        r = measure_error(ts, a.dims, cfg, opt);
    }
    if (c.format == "json") {
        emit(c, dump(to_json(r, a.per_trial)));
    } else if (c.format == "csv") {
        std::ostringstream os;
        os << "points,n_o,dims,channels,precision,dot_order,channel_sum,trials,seed,total_l1_mean,per_point_l1_mean\n"
           << '"' << (r.is_direct() ? "direct" : r.points) << "\"," << r.output_size << ',' << r.dims << ','
           << r.channels << ',' << to_string(cfg.precision) << ',' << to_string(cfg.dot_order) << ','
           << to_string(cfg.channel_sum) << ',' << r.trials << ',' << r.seed << ',' << sci(r.total_l1_mean) << ','
           << sci(r.per_point_l1_mean) << '\n';
        emit(c, os.str());
    } else {
        std::ostringstream os;
        os << "points            " << (r.is_direct() ? "direct" : r.points) << '\n'
           << "outputs           " << r.outputs() << " (" << r.dims << "D, " << r.channels << " channel"
           << (r.channels == 1 ? "" : "s") << ")\n"
           << "config            " << to_string(cfg.precision) << ", " << to_string(cfg.dot_order) << ", "
           << to_string(cfg.channel_sum) << '\n'
           << "trials / seed     " << r.trials << " / " << r.seed << '\n'
           << "total L1 mean     " << sci(r.total_l1_mean) << '\n'
           << "per-point L1 mean " << sci(r.per_point_l1_mean) << '\n';
        emit(c, os.str());
    }
}

// --- search ------------------------------------------------------------------

struct SearchArgs {
    int n = 5;
    int dims = 1;
    int n_h = 3;
    int top = 10;
};

void run_search(const Common& c, const SearchArgs& a) {
    if (a.n < 4)
        throw ValidationError("--n must be >= 4");
    const auto cfg = c.config();
    auto opt = c.measure();
    SearchState state;
    std::vector<SearchCandidate> ranked;
    // greedy chain: each size grows from the previous size's winner
    for (int n = a.n == 4 ? 4 : 5; n <= a.n; ++n) {
        ranked = search_points(n, a.dims, state, cfg, opt, a.n_h);
        if (n < a.n)
            std::cerr << "n = " << n << ": best " << format_points(ranked.front().points) << '\n';
    }
    if (a.top > 0 && static_cast<int>(ranked.size()) > a.top)
        ranked.resize(static_cast<std::size_t>(a.top));
    if (c.format == "json") {
        emit(c, dump(Json{{"n", a.n}, {"dims", a.dims}, {"config", to_json(cfg)}, {"trials", c.trials},
                          {"seed", c.seed}, {"candidates", to_json(ranked)}}));
        return;
    }
    std::ostringstream os;
    if (c.format == "csv")
        os << "rank,points,per_point_l1_mean,ratio_to_best,ci_low,ci_high,tied\n";
    for (std::size_t i = 0; i < ranked.size(); ++i) {
        const auto& k = ranked[i];
        if (c.format == "csv") {
            os << i + 1 << ",\"" << format_points(k.points) << "\"," << sci(k.report.per_point_l1_mean) << ','
               << k.versus_best.ratio << ',' << k.versus_best.ci_low << ',' << k.versus_best.ci_high << ','
               << (k.tied_with_best ? "yes" : "no") << '\n';
        } else {
            os << i + 1 << ". " << format_points(k.points) << "  " << sci(k.report.per_point_l1_mean) << "  x"
               << k.versus_best.ratio << " [" << k.versus_best.ci_low << ", " << k.versus_best.ci_high << "]"
               << (k.tied_with_best ? "  tie" : "") << '\n';
        }
    }
    emit(c, os.str());
}

// --- bounds ------------------------------------------------------------------

struct BoundsArgs {
    std::string matrix;
    int channels = 1;
    int dims = 1;
    std::string kernel;
    std::string input;
    bool condition = false;
};

void run_bounds(const Common& c, const BoundsArgs& a) {
    if (a.matrix.empty())
        throw ValidationError("--matrix is required");
    if (a.kernel.empty() != a.input.empty())
        throw ValidationError("--kernel and --input go together");
    const auto cfg = c.config();
    const auto ts = load_transform_set(a.matrix);
    const ConvPlan plan(ts);
    const auto k = constants_for(ts, plan, cfg.dot_order, cfg.precision);
    const double eps = unit_roundoff(cfg.precision);
    BoundReport b;
    std::optional<ConditionReport> cond;
    if (!a.kernel.empty()) {
        const auto h = load_tensor(a.kernel);
        const auto x = load_tensor(a.input);
        b = h.dims == 1 ? bound_1d(ts, h, x, k, eps, cfg.channel_sum) : bound_2d(ts, h, x, k, eps, cfg.channel_sum);
        if (a.condition && h.dims == 1 && h.channels == 1)
            cond = condition_bound(ts, h.channel(0), x.channel(0));
    } else {
        b = bound_multichannel(ts, a.channels, a.dims, cfg.channel_sum, k, eps);
    }
    if (a.condition && !cond) {
        ConditionReport r;
        r.kappa = conditioning_kappa(ts);
        r.singular = std::isinf(r.kappa);
        cond = r;
    }
    if (cond && cond->singular)
        throw NumericalError("A^T (B^T kr G) is singular; condition number is infinite");
    if (c.format == "json") {
        auto j = to_json(b);
        if (cond)
            j["conditioning"] = to_json(*cond);
        emit(c, dump(j));
    } else if (c.format == "csv") {
        std::ostringstream os;
        os << "dims,channels,epsilon,alpha,beta,gamma,lambda,factor,normwise_bound,A_T_one,A_one,G_frobenius,"
              "B_T_frobenius"
           << (cond ? ",kappa" : "") << '\n'
           << b.dims << ',' << b.channels << ',' << sci(b.epsilon) << ',' << b.constants.alpha << ','
           << b.constants.beta << ',' << b.constants.gamma << ',' << b.lambda << ',' << b.factor << ','
           << sci(b.normwise_bound) << ',' << b.at_one_norm << ',' << b.a_one_norm << ',' << b.g_frobenius << ','
           << b.bt_frobenius;
        if (cond)
            os << ',' << sci(cond->kappa);
        os << '\n';
        emit(c, os.str());
    } else {
        std::ostringstream os;
        os << "constants         alpha " << b.constants.alpha << ", beta " << b.constants.beta << ", gamma "
           << b.constants.gamma << " (" << to_string(b.constants.method) << ", "
           << to_string(b.constants.element_class) << ")\n"
           << "channels          " << b.channels << ", lambda " << b.lambda << '\n'
           << "factor            " << b.factor << '\n'
           << "epsilon           " << sci(b.epsilon) << '\n'
           << "norms             |A^T|_1 " << b.at_one_norm << ", |A|_1 " << b.a_one_norm << ", |G|_F "
           << b.g_frobenius << ", |B^T|_F " << b.bt_frobenius << '\n'
           << "normwise bound    " << sci(b.normwise_bound) << '\n';
        if (!b.componentwise_bounds.empty()) {
            os << "componentwise    ";
            for (double v : b.componentwise_bounds)
                os << ' ' << sci(v);
            os << '\n';
        }
        if (cond)
            os << "kappa_2           " << sci(cond->kappa) << '\n';
        emit(c, os.str());
    }
}

// --- table -------------------------------------------------------------------

void run_table(const Common& c, const std::string& which) {
    const auto& ids = table_ids();
    if (std::find(ids.begin(), ids.end(), which) == ids.end())
        throw ValidationError("unknown table '" + which + "'; expected one of 1-8 or D");
    TableOptions opt;
    opt.measure = c.measure();
    opt.dot_order = parse_dot_order(c.dot_order);
    const auto csv = reproduce_table(which, opt);
    if (c.format != "json") {
        emit(c, csv);
        return;
    }
    // JSON: one object per CSV row, cells kept as the CSV strings
    std::istringstream in(csv);
    std::string line;
    auto split = [](const std::string& s) {
        std::vector<std::string> cells;
        std::string cell;
        bool quoted = false;
        for (char ch : s) {
            if (ch == '"')
                quoted = !quoted;
            else if (ch == ',' && !quoted)
                cells.push_back(std::exchange(cell, {}));
            else
                cell += ch;
        }
        cells.push_back(cell);
        return cells;
    };
    std::getline(in, line);
    const auto header = split(line);
    Json rows = Json::array();
    while (std::getline(in, line)) {
        const auto cells = split(line);
        Json row;
        for (std::size_t i = 0; i < header.size() && i < cells.size(); ++i)
            row[header[i]] = cells[i];
        rows.push_back(std::move(row));
    }
    emit(c, dump(Json{{"table", which}, {"rows", rows}}));
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Toom-Cook convolution: transform generation, error measurement and bounds"};
    app.require_subcommand(1);

    Common common;
    GenArgs gen;
    ConvolveArgs conv;
    MeasureArgs meas;
    SearchArgs search;
    BoundsArgs bounds;
    std::string table_id;

    auto* g = app.add_subcommand("gen", "build A^T, G, B^T for a point set");
    g->add_option("--nh", gen.n_h, "kernel size")->capture_default_str();
    g->add_option("--no", gen.n_o, "output block size (default: points - nh + 1)");
    g->add_option("--points", gen.points, "comma-separated points, e.g. \"0,-1,1,1/2,inf\"");
    g->add_option("--chebyshev", gen.chebyshev, "use N Chebyshev nodes");
    g->add_flag("--with-infinity", gen.chebyshev_infinity, "with --chebyshev: N-1 nodes plus inf");
    g->add_option("--modified", gen.modified, "auto | yes | no; auto uses the modified algorithm when inf is present")
        ->check(CLI::IsMember({"auto", "yes", "no"}))
        ->capture_default_str();

    auto* cv = app.add_subcommand("convolve", "convolve a kernel and input tensor (JSON or .csv)");
    cv->add_option("--matrix", conv.matrix, "transform set JSON; direct convolution if omitted");
    cv->add_option("--kernel", conv.kernel, "kernel tensor file")->required();
    cv->add_option("--input", conv.input, "input tensor file")->required();
    cv->add_flag("--running-error", conv.running_error, "also report per-output running error bounds (1D)");

    auto* m = app.add_subcommand("measure", "mean L1 error against fp64 direct convolution");
    m->add_option("--matrix", meas.matrix, "transform set JSON");
    m->add_option("--points", meas.points, "build the transform set from these points instead");
    m->add_flag("--direct", meas.direct, "measure direct convolution");
    m->add_option("--nh", meas.n_h, "kernel size for --points and --direct")->capture_default_str();
    m->add_option("--dims", meas.dims, "1 or 2")->check(CLI::IsMember({1, 2}))->capture_default_str();
    m->add_option("--channels", meas.channels, "channels summed per output")->capture_default_str();
    m->add_flag("--per-trial", meas.per_trial, "include per-trial errors in JSON output");

    auto* s = app.add_subcommand("search", "greedy point search from {0,-1,1,inf}");
    s->add_option("--n", search.n, "target number of points")->capture_default_str();
    s->add_option("--dims", search.dims, "1 or 2")->check(CLI::IsMember({1, 2}))->capture_default_str();
    s->add_option("--nh", search.n_h, "kernel size")->capture_default_str();
    s->add_option("--top", search.top, "candidates to print, 0 = all")->capture_default_str();

    auto* b = app.add_subcommand("bounds", "analytic error bounds for a transform set");
    b->add_option("--matrix", bounds.matrix, "transform set JSON")->required();
    b->add_option("--channels", bounds.channels, "channels for the unit-norm bound")->capture_default_str();
    b->add_option("--dims", bounds.dims, "1 or 2")->check(CLI::IsMember({1, 2}))->capture_default_str();
    b->add_option("--kernel", bounds.kernel, "kernel tensor for input-specific bounds");
    b->add_option("--input", bounds.input, "input tensor for input-specific bounds");
    b->add_flag("--condition", bounds.condition, "also compute kappa_2 of A^T (B^T kr G)");

    auto* t = app.add_subcommand("table", "reproduce a results table as CSV");
    t->add_option("--which", table_id, "1-8 or D")->required();

    for (auto* cmd : {g, cv, m, s, b, t})
        add_common(*cmd, common);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kValidation;
    }

    try {
        if (*g)
            run_gen(common, gen);
        else if (*cv)
            run_convolve(common, conv);
        else if (*m)
            run_measure(common, meas);
        else if (*s)
            run_search(common, search);
        else if (*b)
            run_bounds(common, bounds);
        else if (*t)
            run_table(common, table_id);
        return kOk;
    } catch (const ValidationError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kValidation;
    } catch (const IoError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kIo;
    } catch (const NumericalError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kNumerical;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kGeneric;
    }
}
