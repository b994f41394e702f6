#include "conric/cli.hpp"

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <ctime>
#include <fstream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "conric/bounds.hpp"
#include "conric/conditions.hpp"
#include "conric/io.hpp"
#include "conric/solver.hpp"

namespace conric::cli {

namespace {

using Json = nlohmann::ordered_json;

constexpr const char* kSchemaId = "conric-report/1";
constexpr double kOrderTol = 1e-9;

struct Options {
    std::string command;
    std::string input;
    std::string q_path;
    bool minimal = false;
    std::size_t depth = 6;
    std::optional<double> tol;
    std::optional<std::size_t> max_iter;
    std::string format;
    std::string out_path;
    bool no_meta = false;
};

struct Status {
    int exit_code = exit_ok;
    std::string classification = "ok";
    std::string message;
};

int exit_code_for(ErrorCode code) {
    switch (code) {
        case ErrorCode::no_solution_evidence:
        case ErrorCode::ladder_breakdown:
            return exit_no_solution;
        case ErrorCode::max_iterations:
            return exit_max_iterations;
        case ErrorCode::input_error:
        case ErrorCode::q_not_pd:
        case ErrorCode::invalid_argument:
        case ErrorCode::dimension_mismatch:
        case ErrorCode::not_square:
        case ErrorCode::non_finite:
            return exit_input_error;
        default:
            return exit_internal;
    }
}

Status status_from(const Error& e) {
    return Status{exit_code_for(e.code()), to_string(e.code()), e.what()};
}

std::string fmt17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string utc_timestamp() {
    const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

Json matrix_json(const CMatrix& m) {
    Json re = Json::array();
    Json im = Json::array();
    for (std::size_t i = 0; i < m.rows(); ++i) {
        Json rr = Json::array();
        Json ri = Json::array();
        for (std::size_t j = 0; j < m.cols(); ++j) {
            rr.push_back(m(i, j).real());
            ri.push_back(m(i, j).imag());
        }
        re.push_back(std::move(rr));
        im.push_back(std::move(ri));
    }
    return Json{{"re", std::move(re)}, {"im", std::move(im)}};
}

// Row k holds ‖W_{k+1} − W_k‖.
Json trace_json(const std::vector<double>& trace) {
    Json rows = Json::array();
    for (std::size_t k = 0; k < trace.size(); ++k) {
        rows.push_back(Json::array({k, trace[k]}));
    }
    return rows;
}

Json tolerances_json(const Tolerances& t) {
    return Json{{"pd_floor", t.pd_floor},
                {"stop_rel", t.stop_rel},
                {"residual_tol", t.residual_tol},
                {"max_iter", t.max_iter},
                {"omega_grid", t.omega_grid},
                {"omega_refine_tol", t.omega_refine_tol},
                {"gelfand_squarings", t.gelfand_squarings}};
}

Json condition_json(const Condition& c) {
    return Json{{"name", c.name}, {"holds", c.holds}, {"margin", c.margin}, {"in_band", c.in_band}};
}

Json existence_json(const ExistenceReport& r) {
    Json necessary = Json::array();
    for (const Condition& c : r.necessary) {
        necessary.push_back(condition_json(c));
    }
    return Json{{"necessary", std::move(necessary)},
                {"sufficient_norm_half", condition_json(r.sufficient_norm_half)},
                {"exact_invertible",
                 r.exact_invertible ? condition_json(*r.exact_invertible) : Json(nullptr)},
                {"verdict", to_string(r.verdict)},
                {"decided_by", r.decided_by}};
}

Json outcome_json(const SolveOutcome& o, const std::optional<ExtremalityResult>& ext) {
    Json j{{"kind", to_string(o.kind)},
           {"solution", matrix_json(o.solution)},
           {"iterations", o.iterations},
           {"residual", o.residual},
           {"structure_drift", o.structure_drift},
           {"path_disagreement", o.path_disagreement}};
    if (o.rate_certificate) {
        j["rate_certificate"] = Json{{"value", o.rate_certificate->value},
                                     {"linear_rate_guaranteed",
                                      o.rate_certificate->linear_rate_guaranteed}};
    } else {
        j["rate_certificate"] = nullptr;
    }
    if (ext) {
        j["extremality"] = Json{{"holds", ext->holds},
                                {"rho", ext->rho},
                                {"ordering", to_string(ext->ordering)}};
    } else {
        j["extremality"] = nullptr;
    }
    j["trace_truncated"] = o.trace_truncated;
    j["trace"] = trace_json(o.trace);
    return j;
}

Json ladder_json(const BoundsLadder& l) {
    Json matrices = Json::array();
    for (const CMatrix& m : l.matrices) {
        matrices.push_back(matrix_json(m));
    }
    Json sizes = Json::array();
    for (const CMatrix& b : l.ladder_blocks) {
        sizes.push_back(b.rows());
    }
    return Json{{"side", to_string(l.side)},
                {"requested_depth", l.requested_depth},
                {"depth", l.depth},
                {"truncated", l.truncated},
                {"matrices", std::move(matrices)},
                {"monotone_gaps", l.monotone_gaps},
                {"pivot_margins", l.pivot_margins},
                {"ladder_block_sizes", std::move(sizes)}};
}

Json status_json(const Status& s) {
    return Json{{"exit_code", s.exit_code},
                {"classification", s.classification},
                {"message", s.message}};
}

Tolerances resolve_tolerances(const Options& opt) {
    const char* env = std::getenv("CONRIC_TOL_PROFILE");
    Tolerances t = Tolerances::from_profile(env && *env ? env : "default");
    if (opt.tol) {
        t.residual_tol = *opt.tol;
    }
    if (opt.max_iter) {
        t.max_iter = *opt.max_iter;
    }
    t.validate();
    return t;
}

struct Loaded {
    io::MatrixFile file;
    Tolerances tol;
};

Loaded load(const Options& opt) {
    Loaded l{io::read_file(opt.input), resolve_tolerances(opt)};
    if (!opt.q_path.empty()) {
        const io::MatrixFile qf = io::read_file(opt.q_path);
        if (!is_hermitian(qf.a)) {
            throw Error(ErrorCode::input_error, "Q is not Hermitian");
        }
        l.file.q = qf.a;
    }
    return l;
}

Json base_report(const Options& opt, const std::vector<std::string>& args, const Tolerances& tol,
                 std::size_t n) {
    Json r;
    r["schema"] = kSchemaId;
    r["command"] = opt.command;
    r["args"] = std::vector<std::string>(args.begin() + 1, args.end());
    r["input"] = opt.input;
    r["n"] = n;
    r["tolerances"] = tolerances_json(tol);
    if (!opt.no_meta) {
        r["meta"] = Json{{"timestamp", utc_timestamp()}, {"tool", "conric"}};
    }
    return r;
}

void append_matrix_text(std::ostringstream& os, const char* label, const CMatrix& m) {
    os << label << ":\n" << io::to_text(m);
}

std::string text_summary(const Json& r) {
    std::ostringstream os;
    os << "command: " << r["command"].get<std::string>() << "\n";
    os << "status: " << r["status"]["classification"].get<std::string>() << " (exit "
       << r["status"]["exit_code"].get<int>() << ")\n";
    if (!r["status"]["message"].get<std::string>().empty()) {
        os << "message: " << r["status"]["message"].get<std::string>() << "\n";
    }
    if (r.contains("existence")) {
        const Json& e = r["existence"];
        os << "verdict: " << e["verdict"].get<std::string>();
        if (!e["decided_by"].get<std::string>().empty()) {
            os << " (" << e["decided_by"].get<std::string>() << ")";
        }
        os << "\n";
        for (const Json& c : e["necessary"]) {
            os << "necessary " << c["name"].get<std::string>() << ": "
               << (c["holds"].get<bool>() ? "holds" : "fails") << " margin "
               << fmt17(c["margin"].get<double>()) << "\n";
        }
        os << "sufficient norm_half: "
           << (e["sufficient_norm_half"]["holds"].get<bool>() ? "holds" : "fails") << " margin "
           << fmt17(e["sufficient_norm_half"]["margin"].get<double>()) << "\n";
        if (!e["exact_invertible"].is_null()) {
            os << "exact omega_lozenge_half: "
               << (e["exact_invertible"]["holds"].get<bool>() ? "holds" : "fails") << " margin "
               << fmt17(e["exact_invertible"]["margin"].get<double>()) << "\n";
        }
    }
    auto outcome = [&os](const char* label, const Json& o) {
        os << label << " iterations " << o["iterations"].get<std::size_t>() << " residual "
           << fmt17(o["residual"].get<double>()) << "\n";
        if (!o["rate_certificate"].is_null()) {
            os << label << " rate_certificate " << fmt17(o["rate_certificate"]["value"].get<double>())
               << (o["rate_certificate"]["linear_rate_guaranteed"].get<bool>() ? " linear" : "")
               << "\n";
        }
        const Json& s = o["solution"];
        const std::size_t n = s["re"].size();
        CMatrix m(n, n);
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = 0; j < n; ++j) {
                m(i, j) = Complex(s["re"][i][j].get<double>(), s["im"][i][j].get<double>());
            }
        }
        append_matrix_text(os, label, m);
    };
    if (r.contains("x_plus") && !r["x_plus"].is_null()) {
        outcome("x_plus", r["x_plus"]);
    }
    if (r.contains("x_minus") && !r["x_minus"].is_null()) {
        outcome("x_minus", r["x_minus"]);
    }
    if (r.contains("bounds")) {
        const Json& b = r["bounds"];
        for (const char* side : {"lower", "upper"}) {
            if (b.contains(side) && !b[side].is_null()) {
                os << side << " depth " << b[side]["depth"].get<std::size_t>() << " gaps";
                for (const Json& g : b[side]["monotone_gaps"]) {
                    os << " " << fmt17(g.get<double>());
                }
                os << "\n";
            }
        }
        if (b.contains("lower_gap") && !b["lower_gap"].is_null()) {
            os << "lower_gap " << fmt17(b["lower_gap"].get<double>()) << "\n";
        }
        if (b.contains("upper_gap") && !b["upper_gap"].is_null()) {
            os << "upper_gap " << fmt17(b["upper_gap"].get<double>()) << "\n";
        }
    }
    return os.str();
}

std::string trace_lines(const std::vector<double>& trace) {
    std::string out;
    for (std::size_t k = 0; k < trace.size(); ++k) {
        out += std::to_string(k) + " " + fmt17(trace[k]) + "\n";
    }
    return out;
}

void run_solve(const Options& opt, const ProblemInstance& p, Json& report, Status& status) {
    const Normalization norm = normalize_q(p);
    const ExistenceReport existence = check_existence(norm.a_q, p.tol());
    report["existence"] = existence_json(existence);
    report["x_plus"] = nullptr;
    report["x_minus"] = nullptr;
    std::optional<SolveOutcome> plus;
    try {
        plus = solve_maximal(p);
        report["x_plus"] = outcome_json(*plus, extremality_check(plus->solution, p,
                                                                 SolutionKind::maximal));
    } catch (const IterationError& e) {
        status = status_from(e);
        if (existence.verdict == Verdict::not_exists) {
            status.message += "; condition " + existence.decided_by + " fails";
        }
        report["partial_trace"] = trace_json(e.trace());
        report["partial_iterations"] = e.iterations();
        return;
    } catch (const Error& e) {
        status = status_from(e);
        return;
    }
    if (!opt.minimal) {
        return;
    }
    try {
        const SolveOutcome minus = solve_minimal(p);
        report["x_minus"] = outcome_json(minus, extremality_check(minus.solution, p,
                                                                  SolutionKind::minimal));
        const double gap = min_eigenvalue(hermitian_part(plus->solution - minus.solution));
        report["order_gap"] = gap;
        if (gap < -kOrderTol) {
            status = Status{exit_internal, to_string(ErrorCode::internal_inconsistency),
                            "X₋ ≤ X₊ violated"};
        }
    } catch (const Error& e) {
        if (e.code() == ErrorCode::singular_a) {
            report["minimal_skipped"] = e.what();
        } else {
            status = status_from(e);
        }
    }
}

void run_check(const ProblemInstance& p, Json& report, Status& status) {
    const Normalization norm = normalize_q(p);
    const ExistenceReport e = check_existence(norm.a_q, p.tol());
    report["existence"] = existence_json(e);
    const Certified cn = is_con_normal(norm.a_q);
    report["con_normal"] = Json{{"holds", cn.holds}, {"margin", cn.margin}};
    if (e.verdict == Verdict::not_exists) {
        status = Status{exit_no_solution, "no-solution-evidence",
                        "necessary or exact condition fails: " + e.decided_by};
    }
}

void run_bounds(const Options& opt, const ProblemInstance& p, Json& report, Status& status) {
    if (!p.unit_q()) {
        throw Error(ErrorCode::input_error, "bounds are defined for Q = I only");
    }
    Json b{{"lower", nullptr}, {"upper", nullptr}, {"lower_gap", nullptr},
           {"upper_gap", nullptr}, {"lower_trend", Json::array()}, {"upper_refused", false}};
    try {
        const SandwichReport s = sandwich_report(p.a(), opt.depth, p.tol());
        b["lower"] = ladder_json(s.lower);
        if (s.upper) {
            b["upper"] = ladder_json(*s.upper);
        }
        b["lower_gap"] = s.lower_gap;
        if (s.upper_gap) {
            b["upper_gap"] = *s.upper_gap;
        }
        b["lower_trend"] = s.lower_trend;
        b["upper_refused"] = s.upper_refused;
        b["lower_gap_reference"] = s.minimal ? "x_minus" : "x_plus";
    } catch (const Error& e) {
        status = status_from(e);
        // Ladders on their own remain informative when the solver fails.
        try {
            b["lower"] = ladder_json(build_ladder(p.a(), BoundSide::lower, opt.depth, p.tol()));
        } catch (const Error&) {
        }
    }
    report["bounds"] = std::move(b);
}

int emit(const Options& opt, const std::string& payload, std::ostream& out, std::ostream& err) {
    if (opt.out_path.empty()) {
        out << payload;
        return 0;
    }
    std::ofstream f(opt.out_path, std::ios::binary);
    if (!f || !(f << payload)) {
        err << "conric: cannot write " << opt.out_path << "\n";
        return exit_input_error;
    }
    return 0;
}

int execute(const Options& opt, const std::vector<std::string>& args, std::ostream& out,
            std::ostream& err) {
    Loaded loaded;
    std::optional<ProblemInstance> instance;
    try {
        loaded = load(opt);
        instance.emplace(loaded.file.a, loaded.file.q, loaded.tol);
    } catch (const Error& e) {
        // No instance: the report carries the echo and the status only.
        Json report;
        report["schema"] = kSchemaId;
        report["command"] = opt.command;
        report["args"] = std::vector<std::string>(args.begin() + 1, args.end());
        report["input"] = opt.input;
        report["status"] = status_json(Status{exit_input_error, to_string(e.code()), e.what()});
        err << "conric: " << e.what() << "\n";
        const std::string payload =
            opt.format == "text" ? text_summary(report) : report.dump(2) + "\n";
        const int io_status = emit(opt, payload, out, err);
        return io_status != 0 ? io_status : exit_input_error;
    }
    const ProblemInstance& p = *instance;
    Json report = base_report(opt, args, p.tol(), p.n());
    Status status;
    std::string payload;
    try {
        if (opt.command == "solve") {
            run_solve(opt, p, report, status);
        } else if (opt.command == "check") {
            run_check(p, report, status);
        } else if (opt.command == "bounds") {
            run_bounds(opt, p, report, status);
        } else {
            std::vector<double> trace;
            try {
                const SolveOutcome o = solve_maximal(p);
                trace = o.trace;
                report["x_plus"] = outcome_json(o, std::nullopt);
                if (o.rate_certificate) {
                    report["rate_certificate"] = o.rate_certificate->value;
                }
            } catch (const IterationError& e) {
                status = status_from(e);
                trace = e.trace();
            } catch (const Error& e) {
                status = status_from(e);
            }
            if (opt.format != "json") {
                payload = trace_lines(trace);
                if (status.exit_code != exit_ok) {
                    err << "conric: " << status.message << "\n";
                }
            }
            report["trace"] = trace_json(trace);
        }
    } catch (const Error& e) {
        status = status_from(e);
    }
    report["status"] = status_json(status);
    if (payload.empty()) {
        const bool text = opt.format == "text" || (opt.command == "trace" && opt.format.empty());
        payload = text ? text_summary(report) : report.dump(2) + "\n";
    }
    if (status.exit_code != exit_ok && opt.command != "trace") {
        err << "conric: " << status.message << "\n";
    }
    const int io_status = emit(opt, payload, out, err);
    return io_status != 0 ? io_status : status.exit_code;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Positive definite solutions of X + A* conj(X)^-1 A = Q", "conric"};
    app.require_subcommand(1);
    Options opt;

    auto add_common = [&opt](CLI::App* sub) {
        sub->add_option("input", opt.input, "matrix file (JSON or text)")->required();
        sub->add_option("--q", opt.q_path, "file holding Q (default: identity or q_re/q_im)");
        sub->add_option("--tol", opt.tol, "residual acceptance tolerance");
        sub->add_option("--max-iter", opt.max_iter, "iteration cap");
        sub->add_option("--format", opt.format, "report format")
            ->check(CLI::IsMember({"json", "text"}));
        sub->add_option("--out", opt.out_path, "write the report to a file");
        sub->add_flag("--no-meta", opt.no_meta, "omit the timestamp block");
    };
    CLI::App* solve = app.add_subcommand("solve", "maximal (and minimal) solution");
    add_common(solve);
    solve->add_flag("--minimal", opt.minimal, "also compute the minimal solution");
    CLI::App* check = app.add_subcommand("check", "existence conditions");
    add_common(check);
    CLI::App* bounds = app.add_subcommand("bounds", "Schur-complement bound ladders");
    add_common(bounds);
    bounds->add_option("--depth", opt.depth, "ladder depth K")->check(CLI::PositiveNumber);
    CLI::App* trace = app.add_subcommand("trace", "convergence trace of the embedded iteration");
    add_common(trace);

    std::vector<const char*> argv;
    argv.reserve(args.size());
    for (const std::string& a : args) {
        argv.push_back(a.c_str());
    }
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? exit_ok : exit_input_error;
    }
    for (CLI::App* sub : {solve, check, bounds, trace}) {
        if (sub->parsed()) {
            opt.command = sub->get_name();
        }
    }
    return execute(opt, args, out, err);
}

}  // namespace conric::cli
