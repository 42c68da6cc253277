#define DOCTEST_CONFIG_IMPLEMENT
#include <doctest.h>

#include <array>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

namespace {

std::string g_bin;

struct RunResult {
    int code = -1;
    std::string out;
    std::string err;
};

// Run the CLI through the shell, capturing stdout/stderr and the exit code.
// `prefix` lets a test prepend environment assignments.
RunResult run(const std::string& args, const std::string& prefix = {}) {
    const std::string err_path = "/tmp/egocli_stderr.txt";
    const std::string cmd = prefix + g_bin + " " + args + " 2>" + err_path;
    RunResult r;
    FILE* pipe = popen(cmd.c_str(), "r");
    REQUIRE(pipe != nullptr);
    std::array<char, 4096> buf;
    while (std::size_t got = std::fread(buf.data(), 1, buf.size(), pipe))
        r.out.append(buf.data(), got);
    const int status = pclose(pipe);
    r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    std::ifstream err(err_path);
    std::ostringstream es;
    es << err.rdbuf();
    r.err = es.str();
    return r;
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path);
    REQUIRE(bool(out));
    out << content;
}

nlohmann::json parse_stdout(const RunResult& r) {
    CAPTURE(r.out);
    CAPTURE(r.err);
    return nlohmann::json::parse(r.out);
}

}  // namespace

TEST_CASE("ingest summarizes an edge list") {
    write_file("/tmp/egocli_tri.txt", "a b\nb c\na c\n");
    const auto r = run("ingest /tmp/egocli_tri.txt");
    CHECK(r.code == 0);
    const auto j = parse_stdout(r);
    CHECK(j["n"] == 3);
    CHECK(j["edges"] == 3);
    CHECK(j["weighted"] == false);
    CHECK(j["min_weight"] == 1.0);
    CHECK(j["max_weight"] == 1.0);
    CHECK(r.err.empty());
}

TEST_CASE("ingest reports collapsed duplicates on stderr") {
    write_file("/tmp/egocli_dup.txt", "a b 2\nb a 2\n");
    const auto r = run("ingest /tmp/egocli_dup.txt");
    CHECK(r.code == 0);
    CHECK(r.err.find("1 duplicate edge line(s) collapsed") != std::string::npos);
    CHECK(parse_stdout(r)["edges"] == 1);
}

TEST_CASE("exit codes separate usage from data errors") {
    // missing file: usage
    auto r = run("ingest /tmp/egocli_missing.txt");
    CHECK(r.code == 2);
    CHECK(r.err.find("cannot open") != std::string::npos);
    // malformed content: computational
    write_file("/tmp/egocli_loop.txt", "a a\n");
    r = run("ingest /tmp/egocli_loop.txt");
    CHECK(r.code == 1);
    CHECK(r.err.find("self-loop") != std::string::npos);
    // bad flags: usage
    CHECK(run("ingest /tmp/egocli_tri.txt --bogus-flag").code == 2);
    CHECK(run("").code == 2);  // a subcommand is required
}

TEST_CASE("help exits cleanly") {
    const auto r = run("--help");
    CHECK(r.code == 0);
    CHECK(r.out.find("bounds") != std::string::npos);
    CHECK(r.out.find("experiment") != std::string::npos);
}

TEST_CASE("moments of the triangle, with trace verification") {
    write_file("/tmp/egocli_tri.txt", "a b\nb c\na c\n");
    const auto r = run("moments /tmp/egocli_tri.txt --verify");
    CHECK(r.code == 0);
    const auto j = parse_stdout(r);
    CHECK(j["moments"] == nlohmann::json({1.0, 0.0, 2.0, 2.0, 6.0, 10.0}));
    CHECK(j["n"] == 3);
    CHECK(j["source"] == "egonet");
    CHECK(j["r"] == 2);
    CHECK(j["verify"]["ok"] == true);
    CHECK(j["verify"]["max_rel_err"].get<double>() <= 1e-9);

    CHECK(run("moments /tmp/egocli_tri.txt --radius 0").code == 2);
}

TEST_CASE("bounds from inline moments") {
    const auto r = run("bounds --moments 1,0,2,2 --n 3");
    CHECK(r.code == 0);
    CHECK(r.err.empty());
    const auto j = parse_stdout(r);
    CHECK(j["r"] == 1);
    CHECK(j["beta"].get<double>() == doctest::Approx(2.0).epsilon(1e-6));
    CHECK(j["delta"].get<double>() == doctest::Approx(2.0).epsilon(1e-6));
    CHECK(j["verdict"].is_null());
}

TEST_CASE("bounds without a node count omits the upper bound") {
    const auto r = run("bounds --moments 1,0,2,2");
    CHECK(r.code == 0);
    CHECK(r.err.find("node count unknown; upper bound omitted") != std::string::npos);
    CHECK(parse_stdout(r)["delta"].is_null());
}

TEST_CASE("bounds order validation") {
    const auto r = run("bounds --moments 1,0,2,2 --r 2");
    CHECK(r.code == 2);
    CHECK(r.err.find("order 2 needs 6 moments, got 4") != std::string::npos);
    CHECK(run("bounds --moments 1,0 --n 3").code == 2);
}

TEST_CASE("infeasible moments are a computational failure") {
    const auto r = run("bounds --moments 1,0,-1,0 --n 3");
    CHECK(r.code == 1);
    CHECK(r.err.find("inconsistent with any real spectrum") != std::string::npos);
}

TEST_CASE("bounds reads a moment JSON file") {
    write_file("/tmp/egocli_mom.json",
               "{\"moments\": [1.0, 0.0, 2.0, 2.0], \"n\": 3, \"source\": \"external\"}");
    const auto r = run("bounds --moments /tmp/egocli_mom.json");
    CHECK(r.code == 0);
    CHECK(parse_stdout(r)["beta"].get<double>() == doctest::Approx(2.0).epsilon(1e-6));

    // valid JSON with the wrong shape is a data error, not a usage error
    write_file("/tmp/egocli_mom_shape.json", "{\"values\": [1.0, 0.0, 2.0, 2.0]}");
    const auto shape = run("bounds --moments /tmp/egocli_mom_shape.json");
    CHECK(shape.code == 1);

    write_file("/tmp/egocli_mom_bad.json", "{\"moments\": [1, 0");
    const auto bad = run("bounds --moments /tmp/egocli_mom_bad.json");
    CHECK(bad.code == 2);
    CHECK(bad.err.find("cannot parse") != std::string::npos);

    const auto neither = run("bounds --moments nonexistent");
    CHECK(neither.code == 2);
    CHECK(neither.err.find("neither an existing file nor an inline moment list") !=
          std::string::npos);
}

TEST_CASE("threshold verdicts through the CLI") {
    auto j = parse_stdout(run("bounds --moments 1,0,2,2 --n 3 --tau 1.5"));
    CHECK(j["verdict"] == "GuaranteedAboveThreshold");
    j = parse_stdout(run("bounds --moments 1,0,2,2 --n 3 --tau 3.0"));
    CHECK(j["verdict"] == "GuaranteedDieOut");
    // path moments: bounds 2/sqrt(3) and sqrt(2) genuinely straddle 1.3
    j = parse_stdout(run("bounds --moments 1,0,1.3333333333333333,0 --n 3 --tau 1.3"));
    CHECK(j["verdict"] == "Indeterminate");
}

TEST_CASE("negative-weight premise gating through the CLI") {
    const auto r = run("bounds --moments 1,0,2,2 --n 3 --negative-weights");
    CHECK(r.code == 0);
    CHECK(r.err.find("premise not established") != std::string::npos);
    CHECK(parse_stdout(r)["delta"].is_null());

    const auto f = run("bounds --moments 1,0,2,2 --n 3 --negative-weights --force-delta");
    CHECK(f.code == 0);
    const auto j = parse_stdout(f);
    CHECK(j["delta"].get<double>() == doctest::Approx(2.0).epsilon(1e-6));
    CHECK(j["delta_premise"] == "unverified");
}

TEST_CASE("psd tolerance comes from the flag or the environment") {
    auto j = parse_stdout(run("--psd-tol 1e-7 bounds --moments 1,0,2,2 --n 3"));
    CHECK(j["tolerances"]["psd"] == 1e-7);
    j = parse_stdout(run("bounds --moments 1,0,2,2 --n 3", "EGOSPECTRAL_PSD_TOL=1e-6 "));
    CHECK(j["tolerances"]["psd"] == 1e-6);
    j = parse_stdout(run("bounds --moments 1,0,2,2 --n 3"));
    CHECK(j["tolerances"]["psd"] == 1e-9);
}

TEST_CASE("degree-based estimate") {
    write_file("/tmp/egocli_star.txt", "hub a\nhub b\nhub c\n");
    const auto r = run("estimate /tmp/egocli_star.txt");
    CHECK(r.code == 0);
    const auto j = parse_stdout(r);
    CHECK(j["n"] == 4);
    CHECK(j["chung_lu"] == 2.0);
    CHECK(j["validity"] == false);
}

TEST_CASE("experiment run from a config file") {
    write_file("/tmp/egocli_exp.json",
               "{\"synthetic\": {\"type\": \"erdos_renyi\", \"n\": 40, \"p\": 0.2},"
               " \"num_samples\": 8, \"rng_seed\": 4, \"record_timings\": false,"
               " \"output_csv\": \"/tmp/egocli_exp.csv\"}");
    const auto r = run("experiment --config /tmp/egocli_exp.json");
    CHECK(r.code == 0);
    const auto j = parse_stdout(r);
    CHECK(j["rows"] == 8);
    CHECK(j["errors"] == 0);
    CHECK(j["violations"] == 0);
    CHECK(j["sandwich_ok"] == true);
    CHECK(j["output_csv"] == "/tmp/egocli_exp.csv");
    CHECK(j["output_json"].is_null());

    std::ifstream csv("/tmp/egocli_exp.csv");
    REQUIRE(bool(csv));
    std::string header;
    std::getline(csv, header);
    CHECK(header ==
          "seed,n,e,lambda1,beta,delta,beta_closed_form,chung_lu,ms_moments,ms_bounds,error");
    std::remove("/tmp/egocli_exp.csv");
}

TEST_CASE("experiment config errors are usage errors") {
    CHECK(run("experiment --config /tmp/egocli_nonexistent.json").code == 2);

    write_file("/tmp/egocli_exp_bad.json", "not json");
    auto r = run("experiment --config /tmp/egocli_exp_bad.json");
    CHECK(r.code == 2);
    CHECK(r.err.find("config parse error") != std::string::npos);

    write_file("/tmp/egocli_exp_key.json",
               "{\"synthetic\": {\"type\": \"erdos_renyi\", \"n\": 40, \"p\": 0.2},"
               " \"typo\": 1}");
    r = run("experiment --config /tmp/egocli_exp_key.json");
    CHECK(r.code == 2);
    CHECK(r.err.find("unknown key 'typo'") != std::string::npos);

    write_file("/tmp/egocli_exp_input.json", "{\"input\": \"/tmp/egocli_no_graph.txt\"}");
    r = run("experiment --config /tmp/egocli_exp_input.json");
    CHECK(r.code == 2);
    CHECK(r.err.find("cannot open") != std::string::npos);
}

TEST_CASE("built-in reference datasets reproduce") {
    const auto r = run("fixtures");
    CHECK(r.code == 0);
    const auto arr = parse_stdout(r);
    REQUIRE(arr.is_array());
    REQUIRE(arr.size() == 2);
    for (const auto& f : arr) {
        CHECK(f["pass"] == true);
        const double beta = f["beta"].get<double>();
        const double delta = f["delta"].get<double>();
        const double lam = f["lambda1_reference"].get<double>();
        CHECK(beta <= lam);
        CHECK(lam <= delta);
    }
    CHECK(arr[0]["name"] == "enron-email-bfs2");
    CHECK(arr[1]["name"] == "as-skitter-bfs2");
}

int main(int argc, char** argv) {
    doctest::Context ctx;
    std::vector<char*> rest;
    for (int i = 0; i < argc; ++i) {
        const std::string arg = argv[i];
        if (arg.rfind("--bin=", 0) == 0) g_bin = arg.substr(6);
        else rest.push_back(argv[i]);
    }
    if (g_bin.empty()) {
        std::fprintf(stderr, "usage: test_cli --bin=<path-to-cli> [doctest options]\n");
        return 1;
    }
    ctx.applyCommandLine(static_cast<int>(rest.size()), rest.data());
    return ctx.run();
}
