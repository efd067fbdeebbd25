#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <unistd.h>

#include "generators.hpp"
#include "jetphase/cli.hpp"
#include "jetphase/io.hpp"

using namespace jetphase;
using io::Json;

namespace {

namespace fs = std::filesystem;

struct Run {
    int code;
    std::string out;
    std::string err;
};

Run run(const std::vector<std::string>& args) {
    std::ostringstream out, err;
    const int code = cli::dispatch(args, out, err);
    return {code, out.str(), err.str()};
}

/// Scratch directory removed at scope exit.
class TempDir {
public:
    TempDir() : path_(fs::temp_directory_path() / ("jetphase-cli-" + std::to_string(::getpid()) + "-" +
                                                   std::to_string(counter_++))) {
        fs::create_directories(path_);
    }
    ~TempDir() {
        std::error_code ec;
        fs::remove_all(path_, ec);
    }
    std::string write(const std::string& name, const Json& j) const {
        const fs::path p = path_ / name;
        std::ofstream(p) << j.dump();
        return p.string();
    }
    std::string write_text(const std::string& name, const std::string& text) const {
        const fs::path p = path_ / name;
        std::ofstream(p) << text;
        return p.string();
    }
    std::string file(const std::string& name) const { return (path_ / name).string(); }

private:
    static inline int counter_ = 0;
    fs::path path_;
};

Json gaussian_pair() {
    return Json::parse(R"({"num_vars": 1, "phase": {"num_vars": 1, "terms": [{"nu": -1, "x": [2], "c": "1/2"}]}})");
}

Json term(int nu, std::vector<int> dx, const std::string& c) {
    Json t;
    t["nu"] = nu;
    t["dx"] = dx;
    t["c"] = c;
    return t;
}

/// Restores JETPHASE_MAX_DEGREE on scope exit.
struct CapGuard {
    explicit CapGuard(const char* value) { ::setenv("JETPHASE_MAX_DEGREE", value, 1); }
    ~CapGuard() { ::unsetenv("JETPHASE_MAX_DEGREE"); }
};

} // namespace

TEST_SUITE("cli") {

TEST_CASE("foi distribution of the Gaussian pair") {
    TempDir dir;
    const auto r = run({"foi", "distribution", "--pair", dir.write("gaussian.json", gaussian_pair()), "--order", "2"});
    REQUIRE(r.code == 0);
    const Json j = Json::parse(r.out);
    CHECK(j["num_vars"] == 1);
    const Json expected = Json::array({term(0, {0}, "1"), term(1, {2}, "-1/2"), term(2, {4}, "1/8")});
    CHECK(j["terms"] == expected);
}

TEST_CASE("osc check asserts") {
    TempDir dir;
    const Json bad = Json::parse(R"({"num_vars": 1, "terms": [{"nu": 0, "dx": [0], "c": "1"},
                                      {"nu": 1, "dx": [3], "c": "1"}, {"nu": 2, "dx": [6], "c": "1/2"}]})");
    const std::string path = dir.write("d.json", bad);
    auto r = run({"osc", "check", "--distribution", path, "--order", "3", "--assert"});
    CHECK(r.code == 1);
    CHECK(Json::parse(r.out)["oscillatory"] == false);
    r = run({"osc", "check", "--distribution", path, "--order", "3"});
    CHECK(r.code == 0);

    const Json good = Json::parse(R"({"num_vars": 1, "terms": [{"nu": 0, "dx": [0], "c": "1"},
                                       {"nu": 1, "dx": [2], "c": "-1/2"}, {"nu": 2, "dx": [4], "c": "1/8"}]})");
    r = run({"osc", "check", "--distribution", dir.write("g.json", good), "--order", "2", "--assert"});
    CHECK(r.code == 0);
    const Json verdict = Json::parse(r.out);
    CHECK(verdict["oscillatory"] == true);
    CHECK(verdict["X"]["terms"].size() == 1);
}

TEST_CASE("Moyal product through the command line") {
    TempDir dir;
    const std::string pi = dir.write("pi.json", Json::parse(R"([["0", "1"], ["-1", "0"]])"));
    auto r = run({"star", "moyal", "--pi", pi, "--order", "2", "--output", dir.file("star.json")});
    REQUIRE(r.code == 0);
    CHECK(r.out.empty());
    const std::string x1 = dir.write("x1.json", Json::parse(R"({"num_vars": 2, "terms": [{"x": [1, 0], "c": "1"}]})"));
    const std::string x2 = dir.write("x2.json", Json::parse(R"({"num_vars": 2, "terms": [{"x": [0, 1], "c": "1"}]})"));
    r = run({"star", "mul", "--star", dir.file("star.json"), "--jet", x1, "--jet", x2, "--order", "2"});
    REQUIRE(r.code == 0);
    const Json product = io::parse_text(r.out, "stdout");
    CHECK(io::jet_from_json(product) ==
          Jet::coordinate(2, 0) * Jet::coordinate(2, 1) + Jet::monomial(2, 1, {0, 0}, Scalar(1)));
    Json nu_term;
    nu_term["nu"] = 1;
    nu_term["x"] = {0, 0};
    nu_term["c"] = "1";
    CHECK(product["terms"].back() == nu_term);

    r = run({"star", "natural", "--pi", pi, "--order", "3", "--assert"});
    CHECK(r.code == 0);
    CHECK(Json::parse(r.out)["natural"] == true);
}

TEST_CASE("errors are reported as JSON with exit status 2") {
    TempDir dir;
    auto kind_of = [](const Run& r) { return Json::parse(r.err)["error"]["kind"].get<std::string>(); };

    auto r = run({"foi", "distribution", "--pair", dir.write_text("broken.json", "{ not json"), "--order", "2"});
    CHECK(r.code == 2);
    CHECK(kind_of(r) == "ParseError");
    CHECK(r.out.empty());

    r = run({"foi", "distribution", "--pair", dir.file("missing.json")});
    CHECK(r.code == 2);
    CHECK(kind_of(r) == "ParseError");

    r = run({"frobnicate"});
    CHECK(r.code == 2);
    CHECK(kind_of(r) == "UsageError");

    r = run({"factor", "--op", dir.file("x.json"), "--split", "zz"});
    CHECK(r.code == 2);
    CHECK(kind_of(r) == "UsageError");

    const std::string x2 = dir.write("x.json", Json::parse(R"({"num_vars": 2, "terms": [{"x": [1, 0], "c": "1"}]})"));
    const std::string pi1 = dir.write("pi1.json", Json::parse(R"([["1"]])"));
    r = run({"star", "mul", "--pi", pi1, "--jet", x2, "--jet", x2});
    CHECK(r.code == 2);
    CHECK(kind_of(r) == "InputShapeError");

    const std::string deg0 =
        dir.write("deg0.json", Json::parse(R"({"num_vars": 1, "terms": [{"nu": 0, "x": [1], "dx": [1], "c": "1"}]})"));
    r = run({"op", "exp", "--op", deg0, "--order", "2"});
    CHECK(r.code == 2);
    CHECK(kind_of(r) == "ConvergenceError");
}

TEST_CASE("operator commands") {
    TempDir dir;
    const std::string d = dir.write("d.json", Json::parse(R"({"num_vars": 1, "terms": [{"dx": [1], "c": "1"}]})"));
    const std::string x = dir.write("x.json", Json::parse(R"({"num_vars": 1, "terms": [{"x": [1], "c": "1"}]})"));
    auto r = run({"op", "compose", "--op", d, "--op", x});
    REQUIRE(r.code == 0);
    const FormalOperator dx = io::operator_from_json(Json::parse(r.out));
    FormalOperator expected(1);
    expected.add_term(0, {1}, {1}, Scalar(1));
    expected.add_term(0, {0}, {0}, Scalar(1));
    CHECK(dx == expected);

    const std::string nd = dir.write("nd.json", Json::parse(R"({"num_vars": 1, "terms": [{"nu": 1, "dx": [3], "c": "1"}]})"));
    r = run({"op", "natural", "--op", nd, "--assert"});
    CHECK(r.code == 1);
    CHECK(Json::parse(r.out)["natural"] == false);

    r = run({"op", "symbol", "--op", nd});
    REQUIRE(r.code == 0);
    CHECK(Json::parse(r.out)["terms"][0]["nu"] == -2);

    const Json g_json = Json::parse(
        R"({"num_vars": 1, "terms": [{"c": "1"}, {"nu": 1, "dx": [3], "c": "1"}, {"nu": 1, "x": [1], "c": "2"}]})");
    r = run({"factor", "--op", dir.write("g.json", g_json), "--split", "ab", "--order", "3"});
    REQUIRE(r.code == 0);
    const Json f = Json::parse(r.out);
    const auto trunc = TruncationSpec::nu(3);
    CHECK(op_compose(io::operator_from_json(f["a"]), io::operator_from_json(f["b"]), trunc) ==
          io::operator_from_json(g_json).truncated(trunc));
    CHECK(f["residual_degrees"].is_array());

    r = run({"factor", "--op", nd, "--split", "ab", "--order", "3"});
    CHECK(r.code == 2);
}

TEST_CASE("serialization round trips") {
    gen::Rng rng(1111);
    for (int t = 0; t < 30; ++t) {
        const int n = gen::uniform(rng, 1, 3);
        const Jet f = gen::random_jet(rng, n, 5, 0, 4, -2, 3);
        CHECK(io::jet_from_json(io::parse_text(io::to_json(f).dump(), "t")) == f);

        const FormalOperator a = gen::random_operator(rng, n, 5, -1, 3, 3, 3);
        CHECK(io::operator_from_json(io::parse_text(io::to_json(a).dump(), "t")) == a);
        const FormalOperator anti = reorder(a, Ordering::anti_normal);
        CHECK(io::operator_from_json(io::to_json(anti)) == anti);

        PointDistribution l(n);
        for (int k = 0; k < 4; ++k)
            l.add_term(gen::uniform(rng, 0, 3), gen::random_index(rng, n, gen::uniform(rng, 0, 4)), gen::small_rational(rng));
        CHECK(io::distribution_from_json(io::to_json(l)) == l);

        ScalarMatrix m(static_cast<std::size_t>(n));
        for (std::size_t i = 0; i < m.size(); ++i)
            for (std::size_t k = 0; k < m.size(); ++k) m(i, k) = gen::small_rational(rng);
        CHECK(io::matrix_from_json(io::to_json(m)) == m);

        const StarProduct s = moyal_star(m, 3);
        const StarProduct back = io::star_from_json(io::to_json(s), 3);
        CHECK(back.num_vars == s.num_vars);
        CHECK(back.c_ops == s.c_ops);

        const PhaseDensityPair p{gen::random_jet(rng, n, 3, 2, 4, -1, -1), gen::random_jet(rng, n, 2, 0, 2)};
        const PhaseDensityPair pb = io::pair_from_json(io::to_json(p));
        CHECK(pb.phase == p.phase);
        CHECK(pb.u == p.u);

        const std::vector<Jet> comps{gen::random_jet(rng, n, 3, 1, 3), gen::random_jet(rng, n, 3, 1, 3)};
        CHECK(io::components_from_json(io::to_json(comps)) == comps);
    }
    Jet with_aux(1, {"xi"});
    with_aux.add_term(-1, {1}, Scalar::rational(-2, 7), {3});
    CHECK(io::jet_from_json(io::to_json(with_aux)) == with_aux);
    CHECK(io::scalar_from_json(io::to_json(Scalar::rational(-22, 6))) == Scalar::rational(-11, 3));
}

TEST_CASE("output is deterministic") {
    TempDir dir;
    const std::string pair = dir.write("g.json", gaussian_pair());
    const auto a = run({"foi", "distribution", "--pair", pair, "--order", "4"});
    const auto b = run({"foi", "distribution", "--pair", pair, "--order", "4"});
    REQUIRE(a.code == 0);
    CHECK(a.out == b.out);
    CHECK(a.out.back() == '\n');
}

TEST_CASE("JETPHASE_MAX_DEGREE caps the order") {
    TempDir dir;
    const std::string pair = dir.write("g.json", gaussian_pair());
    const auto capped_to_2 = run({"foi", "distribution", "--pair", pair, "--order", "2"});
    CapGuard guard("2");
    const auto r = run({"foi", "distribution", "--pair", pair, "--order", "6"});
    REQUIRE(r.code == 0);
    CHECK(r.out == capped_to_2.out);
    CHECK(r.err.find("capped") != std::string::npos);
}

TEST_CASE("help exits cleanly") {
    const auto r = run({"--help"});
    CHECK(r.code == 0);
    CHECK(r.out.find("star") != std::string::npos);
}

} // TEST_SUITE
