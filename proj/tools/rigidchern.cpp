// rigidchern: compute Chern classes and run the verification suites.
//
// Exit codes: 0 success, 1 failed verification, 2 input error.

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "rigidchern/rigidchern.hpp"

namespace {

using namespace rigidchern;

constexpr int kExitFailed = 1;
constexpr int kExitInput = 2;

struct Options {
    u64 p = 5;
    int precision = 8;
    int window = ChartedSpace::kDefaultWindow;
    u64 seed = 1;
    int cases = 0;
    std::string space = "P2";
    std::string base;
    std::string verify_space;
    std::vector<int> twists;
    int twist = 1;
    int level = 2;
    bool perturb = false;
    std::string suite = "all";
    std::string out;
    std::string cocycle;
};

struct InputError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

int base_dimension(const std::string& name) {
    if (name == "P1") return 1;
    if (name == "P2") return 2;
    throw InputError("unknown space '" + name + "' (expected P1 or P2)");
}

PAdicContext make_ctx(const Options& o) {
    PAdicContext ctx{o.p, o.precision};
    ctx.validate();
    return ctx;
}

json header(const Options& o) { return {{"p", o.p}, {"N", o.precision}, {"D", o.window}, {"seed", o.seed}}; }

void emit(const Options& o, const json& report) {
    const std::string text = report.dump(2) + "\n";
    if (o.out.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream f(o.out);
    if (!f) throw InputError("cannot write '" + o.out + "'");
    f << text;
}

int cmd_c1(const Options& o) {
    const PAdicContext ctx = make_ctx(o);
    const ChartedSpace X(SpaceDescriptor::projective(base_dimension(o.space), ctx), o.window);
    LiftedUnitCocycle U;
    if (!o.cocycle.empty()) {
        std::ifstream f(o.cocycle);
        if (!f) throw InputError("cannot read '" + o.cocycle + "'");
        json j;
        try {
            f >> j;
        } catch (const json::exception& e) {
            throw InputError(std::string("malformed cocycle JSON: ") + e.what());
        }
        U = cocycle_from_json(X, j);
    } else {
        U = line_bundle(X, o.twist);
    }
    if (o.perturb) {
        Rng rng(o.seed);
        U = perturb_lifts(X, U, rng);
    }
    TotalCochain z = c1_cocycle(X, U);
    const bool closed = total_diff(X, z).is_zero();
    PAdicElem c = class_coeff(X, z);
    json r = header(o);
    r["space"] = o.space;
    if (o.cocycle.empty()) r["twist"] = o.twist;
    r["perturbed"] = o.perturb;
    r["class"] = c.signed_lift();
    r["precision"] = c.prec();
    r["closed"] = closed;
    emit(o, r);
    return closed ? 0 : kExitFailed;
}

int cmd_chern(const Options& o) {
    const PAdicContext ctx = make_ctx(o);
    const std::string base = o.base.empty() ? o.space : o.base;
    const int n = base_dimension(base);
    if (o.twists.empty()) throw InputError("--twists is required");
    ChernVector cv = chern_classes(n, o.twists, ctx, o.window);
    // elementary symmetric oracle, truncated at the base dimension
    std::vector<i64> e(o.twists.size() + 1, 0);
    e[0] = 1;
    for (int a : o.twists)
        for (std::size_t i = e.size() - 1; i >= 1; --i) e[i] += e[i - 1] * a;
    bool agrees = true;
    json c = json::array();
    for (std::size_t i = 0; i < cv.c.size(); ++i) {
        i64 expect = static_cast<int>(i) <= n ? e[i] : 0;
        agrees = agrees && cv.c[i].equals(PAdicElem::from_int(ctx, expect, cv.c[i].prec()));
        c.push_back(signed_value(cv.c[i]));
    }
    json r = header(o);
    r["base"] = cv.base;
    r["twists"] = cv.twists;
    r["c"] = c;
    r["precision"] = cv.precision();
    r["oracle"] = agrees;
    emit(o, r);
    return agrees ? 0 : kExitFailed;
}

int cmd_verify(const Options& o) {
    VerifyConfig cfg;
    cfg.ctx = make_ctx(o);
    cfg.window = o.window;
    cfg.seed = o.seed;
    cfg.cases = o.cases;
    cfg.level = o.level;
    if (!o.verify_space.empty()) {
        const int n = base_dimension(o.verify_space);
        cfg.space = o.twists.empty() ? SpaceDescriptor::projective(n, cfg.ctx) : SpaceDescriptor::bundle(n, o.twists, cfg.ctx);
        ChartedSpace check(*cfg.space, o.window);  // surfaces unsupported spaces as input errors
    }
    std::vector<std::string> suites;
    if (o.suite == "all") {
        suites = suite_names();
    } else {
        suites = {o.suite};
        if (std::find(suite_names().begin(), suite_names().end(), o.suite) == suite_names().end()) throw InputError("unknown suite '" + o.suite + "'");
    }
    json r = header(o);
    json reports = json::array();
    bool pass = true;
    int precision = o.precision;
    for (const auto& s : suites) {
        VerifyConfig c = cfg;
        // bundle spaces only make sense for the rank suite
        if (c.space && c.space->kind == SpaceKind::ProjBundle && s != "ranks") c.space = SpaceDescriptor::projective(c.space->n, c.ctx);
        SuiteReport rep = run_suite(s, c);
        pass = pass && rep.pass();
        precision = std::min(precision, rep.precision());
        reports.push_back(to_json(rep, c));
    }
    r["suite"] = o.suite;
    r["pass"] = pass;
    r["precision"] = precision;
    r["reports"] = reports;
    emit(o, r);
    return pass ? 0 : kExitFailed;
}

void add_common(CLI::App* app, Options& o) {
    app->add_option("--p", o.p, "prime")->capture_default_str();
    app->add_option("--precision", o.precision, "absolute precision N in digits")->capture_default_str();
    app->add_option("--window", o.window, "weight window D for rank enumeration")->capture_default_str();
    app->add_option("--seed", o.seed, "seed for randomized runs")->capture_default_str();
    app->add_option("--out", o.out, "write the JSON report here instead of stdout");
}

} // namespace

int main(int argc, char** argv) {
    Options o;
    CLI::App app{"Chern classes from Čech–de Rham cocycles over truncated p-adic coefficients"};
    app.require_subcommand(1);

    auto* c1 = app.add_subcommand("c1", "first Chern class of a line bundle on P^n");
    add_common(c1, o);
    c1->add_option("--space", o.space, "P1 or P2")->capture_default_str();
    c1->add_option("--twist", o.twist, "d for O(d)")->capture_default_str();
    c1->add_option("--cocycle", o.cocycle, "unit-cocycle JSON file (overrides --twist)");
    c1->add_flag("--perturb", o.perturb, "multiply the lifts by random 1-units");

    auto* chern = app.add_subcommand("chern", "Chern classes of O(a_1) + ... + O(a_r)");
    add_common(chern, o);
    chern->add_option("--base,--space", o.base, "P1 or P2")->default_str("P2");
    chern->add_option("--twists", o.twists, "a_1,...,a_r")->delimiter(',')->required();

    auto* verify = app.add_subcommand("verify", "run property suites");
    add_common(verify, o);
    verify->add_option("--suite", o.suite, "closure, gauge, whitney, frobenius, mpd, ranks or all")->capture_default_str();
    verify->add_option("--cases", o.cases, "cases per randomized suite (0: suite default)");
    verify->add_option("--space", o.verify_space, "P1 or P2; with --twists the bundle over it (default: suite choice)");
    verify->add_option("--twists", o.twists, "twists of a split bundle")->delimiter(',');
    verify->add_option("--level", o.level, "level m for the mpd suite")->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitInput;
    }

    try {
        if (*c1) return cmd_c1(o);
        if (*chern) return cmd_chern(o);
        return cmd_verify(o);
    } catch (const InputError& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return kExitInput;
    } catch (const InvalidArgument& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return kExitInput;
    } catch (const UnsupportedSpace& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return kExitInput;
    } catch (const NotAUnit& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return kExitInput;
    } catch (const ValuationError& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return kExitInput;
    } catch (const std::exception& e) {
        std::cerr << "verification failed: " << e.what() << "\n";
        return kExitFailed;
    }
}
