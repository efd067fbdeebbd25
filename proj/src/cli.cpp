#include "jetphase/cli.hpp"

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <optional>

#include <CLI11.hpp>

#include "jetphase/errors.hpp"
#include "jetphase/io.hpp"

namespace jetphase::cli {

namespace {

using io::Json;

struct Options {
    int order = 4;
    std::string grading = "nu";
    std::vector<std::string> ops;
    std::vector<std::string> jets;
    std::string pair;
    std::string distribution;
    std::string amplitude;
    std::string pi;
    std::string star;
    std::string vector_field;
    std::string diffeo;
    std::string split;
    std::string output;
    bool assert_verdict = false;
    bool order_given = false;
    std::vector<CLI::Option*> order_flags;
};

/// A command body returns its JSON result and, for predicates, the verdict.
struct Outcome {
    Json result;
    std::optional<bool> verdict;
};

using Body = std::function<Outcome(const Options&)>;

GradingContext grading_of(const Options& o) {
    if (o.grading == "nu") return GradingContext::nu();
    if (o.grading == "standard") return GradingContext::standard();
    throw InputShapeError("unknown grading \"" + o.grading + "\" (expected nu or standard)");
}

TruncationSpec trunc_of(const Options& o) { return {grading_of(o), o.order}; }

FiltrationSpec filtration_of(const Options& o) { return {grading_of(o), 1}; }

const std::string& require(const std::string& path, const char* flag) {
    if (path.empty()) throw ParseError(std::string("missing required option ") + flag);
    return path;
}

FormalOperator op_arg(const Options& o, std::size_t i) {
    if (o.ops.size() <= i) throw ParseError("expected at least " + std::to_string(i + 1) + " --op inputs");
    return io::operator_from_json(io::read_file(o.ops[i]));
}

Jet jet_arg(const Options& o, std::size_t i) {
    if (o.jets.size() <= i) throw ParseError("expected at least " + std::to_string(i + 1) + " --jet inputs");
    return io::jet_from_json(io::read_file(o.jets[i]));
}

StarProduct star_arg(const Options& o) {
    if (!o.star.empty()) return io::star_from_json(io::read_file(o.star), o.order);
    if (!o.pi.empty()) return moyal_star(io::matrix_from_json(io::read_file(o.pi)), o.order);
    throw ParseError("missing required option --star or --pi");
}

PhaseDensityPair pair_arg(const Options& o) { return io::pair_from_json(io::read_file(require(o.pair, "--pair"))); }

PointDistribution distribution_arg(const Options& o) {
    return io::distribution_from_json(io::read_file(require(o.distribution, "--distribution")));
}

Jet amplitude_arg(const Options& o, int n) {
    if (o.amplitude.empty()) return Jet::constant(n, Scalar(1));
    return io::jet_from_json(io::read_file(o.amplitude));
}

/// The distribution to test against a pair: --distribution when given, otherwise the pair's own.
PointDistribution tested_distribution(const Options& o, const PhaseDensityPair& pair) {
    return o.distribution.empty() ? foi_distribution(pair, o.order) : distribution_arg(o);
}

SplitSpec split_of(const Options& o) {
    if (o.split == "ab") return {SplitKind::mult_vs_annih};
    if (o.split == "bc") return {SplitKind::deltaker_vs_const};
    if (o.split == "ef") return {SplitKind::div_vs_mult};
    throw InputShapeError("unknown split \"" + o.split + "\" (expected ab, bc or ef)");
}

Json defect_json(const Defect& d) {
    Json out;
    out["defect"] = io::to_json(d.value);
    out["exact_through"] = d.exact_through;
    out["vanishes"] = d.vanishes();
    return out;
}

void add_order(CLI::App* app, Options& o) {
    o.order_flags.push_back(
        app->add_option("-N,--order", o.order, "truncation order N")->check(CLI::NonNegativeNumber));
}
void add_grading(CLI::App* app, Options& o) {
    app->add_option("--grading", o.grading, "truncation grading: nu or standard")
        ->check(CLI::IsMember({"nu", "standard"}));
}
void add_assert(CLI::App* app, Options& o) {
    app->add_flag("--assert", o.assert_verdict, "exit with status 1 when the verdict is false");
}

struct Registry {
    CLI::App& root;
    Options& opts;
    std::vector<std::pair<CLI::App*, Body>> bodies;

    CLI::App* leaf(CLI::App* parent, const std::string& name, const std::string& about, Body body) {
        CLI::App* app = parent->add_subcommand(name, about);
        app->add_option("--output", opts.output, "write the result to this file instead of stdout");
        bodies.emplace_back(app, std::move(body));
        return app;
    }
};

void register_op(Registry& reg) {
    Options& o = reg.opts;
    CLI::App* op = reg.root.add_subcommand("op", "Weyl-algebra operators")->require_subcommand(1);

    auto* compose = reg.leaf(op, "compose", "normal-ordered product of the --op operators (exact unless --order)", [](const Options& o) {
        FormalOperator acc = op_arg(o, 0);
        const bool truncate = o.order_given;
        for (std::size_t i = 1; i < o.ops.size(); ++i)
            acc = truncate ? op_compose(acc, op_arg(o, i), trunc_of(o)) : op_compose(acc, op_arg(o, i));
        return Outcome{io::to_json(truncate ? acc.truncated(trunc_of(o)) : reorder(acc, Ordering::normal)), {}};
    });
    compose->add_option("--op", o.ops, "operator JSON file (repeatable)")->required();
    add_order(compose, o);
    add_grading(compose, o);

    auto* exp = reg.leaf(op, "exp", "exponential of an operator of positive filtration degree",
                         [](const Options& o) {
                             return Outcome{io::to_json(op_exp(op_arg(o, 0), filtration_of(o), trunc_of(o))), {}};
                         });
    exp->add_option("--op", o.ops, "operator JSON file")->required();
    add_order(exp, o);
    add_grading(exp, o);

    auto* log = reg.leaf(op, "log", "logarithm of 1 plus positive filtration degree", [](const Options& o) {
        return Outcome{io::to_json(op_log(op_arg(o, 0), filtration_of(o), trunc_of(o))), {}};
    });
    log->add_option("--op", o.ops, "operator JSON file")->required();
    add_order(log, o);
    add_grading(log, o);

    auto* symbol = reg.leaf(op, "symbol", "full symbol as a jet in x and xi",
                            [](const Options& o) { return Outcome{io::to_json(full_symbol(op_arg(o, 0))), {}}; });
    symbol->add_option("--op", o.ops, "operator JSON file")->required();

    auto* natural = reg.leaf(op, "natural", "naturalness and filtration report", [](const Options& o) {
        const OperatorClassReport r = classify(op_arg(o, 0));
        Json out;
        out["natural"] = r.is_natural;
        out["in_g_nu"] = r.in_g_nu;
        out["standard_degree"] = r.standard_degree ? Json(*r.standard_degree) : Json(nullptr);
        return Outcome{out, r.is_natural};
    });
    natural->add_option("--op", o.ops, "operator JSON file")->required();
    add_assert(natural, o);
}

void register_factor(Registry& reg) {
    Options& o = reg.opts;
    CLI::App* factor = reg.leaf(&reg.root, "factor", "unique factorization g = a b along a split",
                                [](const Options& o) {
                                    return Outcome{io::to_json(factorize(op_arg(o, 0), split_of(o), filtration_of(o),
                                                                         trunc_of(o))),
                                                   {}};
                                });
    factor->add_option("--op", o.ops, "operator JSON file for g")->required();
    factor->add_option("--split", o.split, "ab (multiplication | annihilating), bc (killed by delta | constant "
                                           "coefficients), ef (divergence | multiplication)")
        ->required()
        ->check(CLI::IsMember({"ab", "bc", "ef"}));
    add_order(factor, o);
    add_grading(factor, o);
}

void register_osc(Registry& reg) {
    Options& o = reg.opts;
    CLI::App* osc = reg.root.add_subcommand("osc", "point-supported distributions")->require_subcommand(1);

    auto* check = reg.leaf(osc, "check", "oscillatory test", [](const Options& o) {
        const OscillatoryVerdict v = is_oscillatory(distribution_arg(o), o.order);
        Json out;
        out["oscillatory"] = v.oscillatory;
        out["X"] = v.x ? io::to_json(*v.x) : Json(nullptr);
        return Outcome{out, v.oscillatory};
    });
    check->add_option("--distribution", o.distribution, "distribution JSON file")->required();
    add_order(check, o);
    add_assert(check, o);

    auto* beta = reg.leaf(osc, "beta", "bilinear form b^ij = L_1(x^i x^j)", [](const Options& o) {
        const ScalarMatrix b = beta_form(distribution_arg(o));
        Json out;
        out["beta"] = io::to_json(b);
        out["nondegenerate"] = !b.determinant().is_zero();
        return Outcome{out, !b.determinant().is_zero()};
    });
    beta->add_option("--distribution", o.distribution, "distribution JSON file")->required();
    add_assert(beta, o);

    auto* push = reg.leaf(osc, "push", "pushforward along a formal diffeomorphism", [](const Options& o) {
        const PointDistribution l = distribution_arg(o);
        const std::vector<Jet> phi = io::components_from_json(io::read_file(require(o.diffeo, "--diffeo")));
        return Outcome{io::to_json(pushforward_diffeo(l, phi, TruncationSpec::nu(o.order))), {}};
    });
    push->add_option("--distribution", o.distribution, "distribution JSON file")->required();
    push->add_option("--diffeo", o.diffeo, "diffeomorphism components JSON file")->required();
    add_order(push, o);
}

void register_foi(Registry& reg) {
    Options& o = reg.opts;
    CLI::App* foi = reg.root.add_subcommand("foi", "formal oscillatory integrals")->require_subcommand(1);

    auto* eval = reg.leaf(foi, "eval", "evaluate the integral on an amplitude", [](const Options& o) {
        const PhaseDensityPair pair = pair_arg(o);
        return Outcome{io::to_json(foi_eval(pair, amplitude_arg(o, pair.num_vars()), o.order)), {}};
    });
    eval->add_option("--pair", o.pair, "phase-density pair JSON file")->required();
    eval->add_option("--amplitude", o.amplitude, "amplitude jet JSON file (default 1)");
    add_order(eval, o);

    auto* dist = reg.leaf(foi, "distribution", "the integral as a point distribution", [](const Options& o) {
        return Outcome{io::to_json(foi_distribution(pair_arg(o), o.order)), {}};
    });
    dist->add_option("--pair", o.pair, "phase-density pair JSON file")->required();
    add_order(dist, o);

    auto* recover = reg.leaf(foi, "recover", "phase recovery from a nondegenerate oscillatory distribution",
                             [](const Options& o) {
                                 return Outcome{io::to_json(recover_phase(distribution_arg(o), o.order)), {}};
                             });
    recover->add_option("--distribution", o.distribution, "distribution JSON file")->required();
    add_order(recover, o);

    auto* axiom = reg.leaf(foi, "check-axiom", "defect of L(vf + (v phi + div v) f)", [](const Options& o) {
        const PhaseDensityPair pair = pair_arg(o);
        const VectorField v = io::components_from_json(io::read_file(require(o.vector_field, "--vector-field")));
        const Defect d =
            check_foi_axiom(tested_distribution(o, pair), pair, v, amplitude_arg(o, pair.num_vars()), o.order);
        return Outcome{defect_json(d), d.vanishes()};
    });
    axiom->add_option("--pair", o.pair, "phase-density pair JSON file")->required();
    axiom->add_option("--distribution", o.distribution, "distribution to test (default: the pair's own)");
    axiom->add_option("--vector-field", o.vector_field, "vector field components JSON file")->required();
    axiom->add_option("--amplitude", o.amplitude, "test function jet JSON file (default 1)");
    add_order(axiom, o);
    add_assert(axiom, o);

    auto* strong = reg.leaf(foi, "check-strong", "defect of the nu-derivative identity", [](const Options& o) {
        const PhaseDensityPair pair = pair_arg(o);
        const Defect d = check_strong(tested_distribution(o, pair), pair, amplitude_arg(o, pair.num_vars()), o.order);
        return Outcome{defect_json(d), d.vanishes()};
    });
    strong->add_option("--pair", o.pair, "phase-density pair JSON file")->required();
    strong->add_option("--distribution", o.distribution, "distribution to test (default: the pair's own)");
    strong->add_option("--amplitude", o.amplitude, "test function jet JSON file (default 1)");
    add_order(strong, o);
    add_assert(strong, o);
}

void add_star_source(CLI::App* app, Options& o) {
    app->add_option("--star", o.star, "star product JSON file");
    app->add_option("--pi", o.pi, "Poisson matrix JSON file (Moyal product)");
}

void register_star(Registry& reg) {
    Options& o = reg.opts;
    CLI::App* star = reg.root.add_subcommand("star", "star products")->require_subcommand(1);

    auto* moyal = reg.leaf(star, "moyal", "Moyal product of a constant matrix", [](const Options& o) {
        return Outcome{io::to_json(moyal_star(io::matrix_from_json(io::read_file(require(o.pi, "--pi"))), o.order)),
                       {}};
    });
    moyal->add_option("--pi", o.pi, "Poisson matrix JSON file")->required();
    add_order(moyal, o);

    auto* mul = reg.leaf(star, "mul", "star product of the --jet inputs", [](const Options& o) {
        const StarProduct s = star_arg(o);
        Jet acc = jet_arg(o, 0);
        for (std::size_t i = 1; i < o.jets.size(); ++i) acc = star_multiply(s, acc, jet_arg(o, i), o.order);
        return Outcome{io::to_json(acc), {}};
    });
    add_star_source(mul, o);
    mul->add_option("--jet", o.jets, "jet JSON file (repeatable)")->required();
    add_order(mul, o);

    auto* natural = reg.leaf(star, "natural", "naturalness of the star product", [](const Options& o) {
        const bool natural = is_natural_star(star_arg(o), o.order);
        Json out;
        out["natural"] = natural;
        return Outcome{out, natural};
    });
    add_star_source(natural, o);
    add_order(natural, o);
    add_assert(natural, o);

    auto* two_point = reg.leaf(star, "two-point", "two-point distribution at the origin", [](const Options& o) {
        return Outcome{io::to_json(two_point_distribution(star_arg(o), o.order)), {}};
    });
    add_star_source(two_point, o);
    add_order(two_point, o);

    auto* exp = reg.leaf(star, "exp", "star exponential, truncated in the aux degree", [](const Options& o) {
        return Outcome{io::to_json(star_exponential(star_arg(o), jet_arg(o, 0), TruncationSpec::aux(o.order))), {}};
    });
    add_star_source(exp, o);
    exp->add_option("--jet", o.jets, "jet JSON file")->required();
    add_order(exp, o);

    auto* symbol = reg.leaf(star, "symbol", "full symbol of left star multiplication", [](const Options& o) {
        return Outcome{io::to_json(left_mult_symbol(star_arg(o), jet_arg(o, 0), o.order)), {}};
    });
    add_star_source(symbol, o);
    symbol->add_option("--jet", o.jets, "jet JSON file")->required();
    add_order(symbol, o);
}

void report(std::ostream& err, const std::string& kind, const std::string& detail) {
    Json e;
    e["error"]["kind"] = kind;
    e["error"]["detail"] = detail;
    err << e.dump() << '\n';
}

void apply_degree_cap(Options& o, std::ostream& err) {
    const char* cap = std::getenv("JETPHASE_MAX_DEGREE");
    if (cap == nullptr || *cap == '\0') return;
    char* end = nullptr;
    const long limit = std::strtol(cap, &end, 10);
    if (*end != '\0' || limit < 0) throw ParseError("JETPHASE_MAX_DEGREE must be a nonnegative integer");
    if (o.order > limit) {
        err << "warning: order " << o.order << " capped to JETPHASE_MAX_DEGREE=" << limit << '\n';
        o.order = static_cast<int>(limit);
    }
}

} // namespace

int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App root{"jetphase: exact formal oscillatory calculus", "jetphase"};
    root.require_subcommand(1);
    Options opts;
    Registry reg{root, opts, {}};
    register_op(reg);
    register_factor(reg);
    register_osc(reg);
    register_foi(reg);
    register_star(reg);

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        root.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << root.help();
        return 0;
    } catch (const CLI::CallForAllHelp&) {
        out << root.help("", CLI::AppFormatMode::All);
        return 0;
    } catch (const CLI::ParseError& e) {
        report(err, "UsageError", e.what());
        return 2;
    }

    opts.order_given = std::any_of(opts.order_flags.begin(), opts.order_flags.end(),
                                   [](const CLI::Option* flag) { return flag->count() > 0; });
    try {
        apply_degree_cap(opts, err);
        for (const auto& [app, body] : reg.bodies) {
            if (!app->parsed()) continue;
            const Outcome outcome = body(opts);
            const std::string text = outcome.result.dump(2) + "\n";
            if (opts.output.empty()) {
                out << text;
            } else {
                std::ofstream file(opts.output);
                if (!file) throw ParseError("cannot write " + opts.output);
                file << text;
            }
            return opts.assert_verdict && outcome.verdict && !*outcome.verdict ? 1 : 0;
        }
        report(err, "UsageError", "no command given");
        return 2;
    } catch (const Error& e) {
        report(err, e.kind(), e.what());
        return 2;
    } catch (const nlohmann::json::exception& e) {
        report(err, "ParseError", e.what());
        return 2;
    }
}

} // namespace jetphase::cli
