#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <regex>
#include <sstream>

#include "../../tools/cli.hpp"

using compass::cli::run;
namespace fs = std::filesystem;

namespace {

struct Result {
    int code;
    std::string out, err;
};

Result call(const std::vector<std::string>& args) {
    std::ostringstream out, err;
    const int code = run(args, out, err);
    return {code, out.str(), err.str()};
}

double field_after(const std::string& text, const std::string& key) {
    const auto pos = text.find(key);
    REQUIRE(pos != std::string::npos);
    return std::stod(text.substr(pos + key.size()));
}

}  // namespace

TEST_CASE("help text") {
    const Result r = call({"--help"});
    CHECK(r.code == 0);
    for (const char* sub : {"wigner", "overlap", "sensitivity", "isotropy", "validate"}) {
        CHECK(r.out.find(sub) != std::string::npos);
    }
    const std::regex anchors(R"(Eq\.?\s*\d|Sec\.?\s*\d|\[(?!OPTIONS\])[A-Z]+\])");
    CHECK_FALSE(std::regex_search(r.out, anchors));
    CHECK(call({"sensitivity", "--help"}).code == 0);
}

TEST_CASE("usage errors exit with 2") {
    CHECK(call({}).code == 2);
    CHECK(call({"bogus"}).code == 2);
    CHECK(call({"sensitivity", "--no-such-flag"}).code == 2);
    CHECK(call({"sensitivity", "--n", "0"}).code == 2);
    CHECK(call({"sensitivity", "--a", "-3"}).code == 2);
    CHECK(call({"sensitivity", "--epsilon", "2"}).code == 2);
    CHECK(call({"wigner", "--mode", "approx"}).code == 2);
    CHECK(call({"overlap", "--mode", "center"}).code == 2);
    CHECK(call({"wigner", "--window", "1", "0", "-1", "1"}).code == 2);
    CHECK(call({"wigner", "--format", "table", "--resolution", "4"}).code == 2);
}

TEST_CASE("runtime failures exit with 1 and name the file") {
    const Result r = call({"wigner", "--state-file", "/nonexistent/compass/state.txt"});
    CHECK(r.code == 1);
    CHECK(r.err.find("/nonexistent/compass/state.txt") != std::string::npos);
}

TEST_CASE("sensitivity reports") {
    const Result one = call({"sensitivity", "--n", "1", "--a", "5"});
    REQUIRE(one.code == 0);
    CHECK(std::abs(field_after(one.out, "a*delta_min") - 1.1107207345) < 1e-9);
    CHECK(one.out.find("(below 1e-15)") != std::string::npos);

    const Result two = call({"sensitivity", "--n", "2"});
    REQUIRE(two.code == 0);
    CHECK(std::abs(field_after(two.out, "scaled range    [") - 1.20223545) < 5e-7);
    CHECK(std::abs(field_after(two.out, "isotropy") - 3.5506e-4) < 1e-7);

    const Result rows = call({"sensitivity", "--n", "2", "--steps", "16", "--rows"});
    REQUIRE(rows.code == 0);
    CHECK(rows.out.find("# n a arg_delta root") != std::string::npos);

    const Result crowded = call({"sensitivity", "--n", "2", "--a", "4", "--steps", "16"});
    CHECK(crowded.code == 0);
    CHECK(crowded.err.find("warning") != std::string::npos);
}

TEST_CASE("isotropy table") {
    const Result r = call({"isotropy", "--n-max", "3", "--a", "12", "--steps", "90"});
    REQUIRE(r.code == 0);
    std::istringstream is(r.out);
    std::string line;
    std::vector<double> metrics;
    while (std::getline(is, line)) {
        if (!line.empty() && line[0] != '#') {
            std::istringstream ls(line);
            int n;
            double m;
            ls >> n >> m;
            metrics.push_back(m);
        }
    }
    REQUIRE(metrics.size() == 3);
    CHECK(metrics[0] > metrics[1]);
    CHECK(metrics[1] > metrics[2]);
}

TEST_CASE("validate") {
    const Result quick = call({"validate", "--quick"});
    CHECK(quick.code == 0);
    CHECK(quick.out.find("FAIL") == std::string::npos);
    CHECK(quick.out.find("all checks passed") != std::string::npos);

    const Result single = call({"validate", "--n", "1", "--a", "3"});
    CHECK(single.code == 0);
    CHECK(single.out.find("Wigner vs quadrature") != std::string::npos);
}

TEST_CASE("overlap summary and comparison") {
    const Result r = call({"overlap", "--n", "2", "--a", "8", "--resolution", "24", "--compare"});
    REQUIRE(r.code == 0);
    CHECK(r.out.find("# kind") == 0);
    const double diff = field_after(r.err, "max |exact - approx|");
    CHECK(diff < 1e-7);

    const Result mask = call({"overlap", "--n", "1", "--resolution", "40", "--mask"});
    REQUIRE(mask.code == 0);
    CHECK(mask.out.find("# gamma_zero_mask") != std::string::npos);
}

TEST_CASE("grid output is byte-identical across runs") {
    const auto p1 = fs::temp_directory_path() / "compass_cli_a.csv";
    const auto p2 = fs::temp_directory_path() / "compass_cli_b.csv";
    const std::vector<std::string> base = {"wigner", "--n", "2", "--a", "8", "--resolution", "48"};
    auto a1 = base, a2 = base;
    a1.insert(a1.end(), {"--output", p1.string()});
    a2.insert(a2.end(), {"--output", p2.string()});
    REQUIRE(call(a1).code == 0);
    REQUIRE(call(a2).code == 0);
    std::ifstream f1(p1, std::ios::binary), f2(p2, std::ios::binary);
    std::stringstream s1, s2;
    s1 << f1.rdbuf();
    s2 << f2.rdbuf();
    CHECK(s1.str() == s2.str());
    CHECK(s1.str().size() > 1000);
    fs::remove(p1);
    fs::remove(p2);

    const Result pgm = call({"wigner", "--n", "1", "--resolution", "8", "--format", "pgm"});
    REQUIRE(pgm.code == 0);
    CHECK(pgm.out.rfind("P5\n8 8\n65535\n", 0) == 0);
    CHECK(pgm.out.size() == std::string("P5\n8 8\n65535\n").size() + 128);
}

TEST_CASE("config file with command-line precedence") {
    const auto cfg = fs::temp_directory_path() / "compass_cli.ini";
    {
        std::ofstream os(cfg);
        os << "n=2\na=8\nsteps=32\n";
    }
    const Result from_file = call({"sensitivity", "--config", cfg.string()});
    REQUIRE(from_file.code == 0);
    CHECK(from_file.out.find("n               2") != std::string::npos);

    const Result override = call({"sensitivity", "--config", cfg.string(), "--n", "1", "--a", "5"});
    REQUIRE(override.code == 0);
    CHECK(override.out.find("n               1") != std::string::npos);
    fs::remove(cfg);
}
