#include "geoweb/cli.hpp"

#include "support/corpus.hpp"

#include <doctest.h>
#include <json.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

using namespace geoweb;

namespace {

struct Result {
    int code;
    std::string out;
    std::string err;
};

Result call(std::vector<std::string> args)
{
    std::ostringstream out, err;
    const int code = run(args, out, err);
    return {code, out.str(), err.str()};
}

std::vector<std::vector<std::string>> csv_rows(const std::string& text)
{
    std::vector<std::vector<std::string>> rows;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        if (line.starts_with("#")) continue;
        std::vector<std::string> cells;
        std::string cell;
        std::istringstream ls(line);
        while (std::getline(ls, cell, ',')) cells.push_back(cell);
        if (line.ends_with(",")) cells.emplace_back();
        rows.push_back(std::move(cells));
    }
    return rows;
}

std::size_t column(const std::vector<std::string>& header, const std::string& name)
{
    return static_cast<std::size_t>(std::find(header.begin(), header.end(), name) - header.begin());
}

std::filesystem::path scratch(const std::string& name)
{
    const auto dir = std::filesystem::temp_directory_path() / "geoweb_cli_tests";
    std::filesystem::create_directories(dir);
    return dir / name;
}

std::string write_file(const std::string& name, const std::string& text)
{
    const auto p = scratch(name);
    std::ofstream(p) << text;
    return p.string();
}

} // namespace

TEST_SUITE("cli") {

TEST_CASE("check: exit codes follow the verdict")
{
    const Result ok = call({"check", corpus::path("five_linear")});
    CHECK(ok.code == 0);
    const auto rows = csv_rows(ok.out);
    const auto res = column(rows[0], "residual");
    REQUIRE(res < rows[0].size());
    CHECK(rows.size() == 26); // header + 5^2 grid
    for (std::size_t i = 1; i < rows.size(); ++i) CHECK(std::stod(rows[i][res]) <= 1e-8);
    CHECK(ok.out.find("# verdict: geodesic\n") != std::string::npos);

    const Result bad = call({"check", corpus::path("five_perturbed")});
    CHECK(bad.code == 2);
    CHECK(bad.out.find("# verdict: not geodesic\n") != std::string::npos);

    // a perturbation far below the failure threshold but above the pass threshold
    const std::string faint = write_file("faint.json", R"J({"dimension":2,"functions":["x1","x2","-x1-x2","x1+2*x2","x1+3*x2+1e-6*x1^2*x2"],"domain":{"center":[0,0],"radius":0.5}})J");
    const Result unsure = call({"check", faint});
    CHECK(unsure.code == 3);
    CHECK(unsure.out.find("# verdict: inconclusive\n") != std::string::npos);
}

TEST_CASE("linearize")
{
    const Result r = call({"linearize", corpus::path("parallel2"), "--random", "30", "--seed", "4"});
    CHECK(r.code == 0);
    const auto rows = csv_rows(r.out);
    const auto obs = column(rows[0], "obstruction");
    REQUIRE(obs < rows[0].size());
    CHECK(rows.size() == 31);
    for (std::size_t i = 1; i < rows.size(); ++i) CHECK(std::stod(rows[i][obs]) <= 1e-7);

    CHECK(call({"linearize", corpus::path("curved3"), "--grid", "2"}).code == 2);
}

TEST_CASE("connection at a point")
{
    const Result r = call({"connection", corpus::path("xy4"), "--at", "0,0"});
    CHECK(r.code == 0);
    bool g112 = false, g212 = false;
    for (const auto& row : csv_rows(r.out)) {
        if (row[0] != "frame_gamma") continue;
        if (row[1] == "1" && row[2] == "1" && row[3] == "2") g112 = std::abs(std::stod(row[4]) + 1.0) <= 1e-9;
        if (row[1] == "2" && row[2] == "1" && row[3] == "2") g212 = std::abs(std::stod(row[4]) - 1.0) <= 1e-9;
    }
    CHECK(g112);
    CHECK(g212);
    CHECK(r.out.find("\ntheta,1,2,,2\n") != std::string::npos);
    CHECK(r.out.find("\na,4,2,,-2\n") != std::string::npos);

    const Result neg = call({"connection", corpus::path("xy4"), "--at", "-0.1,0.2"});
    CHECK(neg.code == 0);
    CHECK(neg.out.find("# point: -0.10000000000000001,0.20000000000000001\n") != std::string::npos);

    CHECK(call({"connection", corpus::path("pointed2"), "--at", "0.1,0", "--gauge", "pointed"}).code == 0);
    CHECK(call({"connection", corpus::path("xy4"), "--at", "0,0", "--gauge", "pointed"}).code == 1);
    CHECK(call({"connection", corpus::path("xy4"), "--at", "0,0,0"}).code == 1);
    CHECK(call({"connection", corpus::path("xy4"), "--at", "0,zero"}).code == 1);
    const Result degenerate = call({"connection", corpus::path("xy4"), "--at", "-0.25,0.75"});
    CHECK(degenerate.code == 1);
    CHECK(degenerate.err.find("coincide") != std::string::npos);
}

TEST_CASE("invariants")
{
    const Result r = call({"invariants", corpus::path("five_perturbed"), "--grid", "3"});
    CHECK(r.code == 0);
    const auto rows = csv_rows(r.out);
    CHECK(rows[0] == std::vector<std::string>{"index", "x1", "x2", "status", "foliation", "a1", "a2", "s1_2", "diagnostic"});
    CHECK(rows.size() == 1 + 9 * 2);
    CHECK(rows[1][4] == "4");
    CHECK(rows[2][4] == "5");
    CHECK(rows[1][5] == "1");

    // excluded points keep a row with the diagnostic
    const Result d = call({"invariants", corpus::path("xy4"), "--grid", "1"});
    CHECK(d.code == 0);
    const std::string on_line = write_file("online.json", R"J({"dimension":2,"functions":["x1","x2","-(x1+x2)","x1+2*x2+x1*x2"],"domain":{"center":[-0.25,0.75],"radius":0.1}})J");
    const Result e = call({"invariants", on_line, "--grid", "1"});
    CHECK(e.out.find(",degenerate,") != std::string::npos);
    CHECK(call({"check", on_line, "--grid", "1"}).code == 3);
}

TEST_CASE("geodesic")
{
    const Result r = call({"geodesic", corpus::path("curved2"), "--from", "0.1,-0.1", "--leaf", "3", "--T", "0.5", "--h", "0.01"});
    CHECK(r.code == 0);
    const auto rows = csv_rows(r.out);
    CHECK(rows[0] == std::vector<std::string>{"t", "x1", "x2", "f1", "f2", "f3", "f4"});
    CHECK(rows.size() == 52);
    const auto pos = r.out.find("# leaf_drift: ");
    REQUIRE(pos != std::string::npos);
    CHECK(std::stod(r.out.substr(pos + 14)) <= 1e-6);

    CHECK(call({"geodesic", corpus::path("curved2"), "--from", "0.1,-0.1", "--leaf", "9"}).code == 1);
    CHECK(call({"geodesic", corpus::path("curved2"), "--from", "0.1,-0.1", "--leaf", "1", "--h", "0"}).code == 1);
    CHECK(call({"geodesic", corpus::path("curved2"), "--leaf", "1"}).code == 1);
}

TEST_CASE("determinism and output options")
{
    const std::vector<std::string> args{"linearize", corpus::path("curved3"), "--random", "40", "--seed", "7"};
    const Result a = call(args);
    const Result b = call(args);
    CHECK(a.out == b.out);
    CHECK(a.out.find("# sampling: random 40 seed 7\n") != std::string::npos);
    CHECK(a.out.find("# input_digest: fnv1a64:") != std::string::npos);
    CHECK(call({"linearize", corpus::path("curved3"), "--random", "40", "--seed", "8"}).out != a.out);

    ::setenv("GEOWEB_THREADS", "1", 1);
    const Result serial = call(args);
    ::unsetenv("GEOWEB_THREADS");
    CHECK(serial.out == a.out);

    const std::string out = scratch("report.csv").string();
    std::filesystem::remove(out);
    const Result to_file = call({"linearize", corpus::path("curved3"), "--random", "40", "--seed", "7", "--out", out});
    CHECK(to_file.out.empty());
    std::ifstream in(out, std::ios::binary);
    std::stringstream buf;
    buf << in.rdbuf();
    CHECK(buf.str() == a.out);
    CHECK(a.out.find('\r') == std::string::npos);

    const Result json = call({"check", corpus::path("five_linear"), "--grid", "2", "--format", "json"});
    CHECK(json.code == 0);
    const auto doc = nlohmann::json::parse(json.out);
    CHECK(doc["verdict"] == "geodesic");
    CHECK(doc["rows"].size() == 4);
    CHECK(doc["rows"][0]["index"] == 0);
}

TEST_CASE("input errors exit with 1")
{
    CHECK(call({}).code == 1);
    CHECK(call({"frobnicate"}).code == 1);
    CHECK(call({"check"}).code == 1);
    CHECK(call({"check", "/nonexistent.json"}).code == 1);
    CHECK(call({"check", corpus::path("five_linear"), "--grid", "3", "--random", "5"}).code == 1);
    CHECK(call({"check", corpus::path("five_linear"), "--format", "xml"}).code == 1);
    CHECK(call({"check", corpus::path("five_linear"), "--grid", "0"}).code == 1);
    const std::string bad = write_file("bad.json", R"J({"dimension":2,"functions":["x1","x2","-(x1+x2)"]})J");
    const Result r = call({"check", bad});
    CHECK(r.code == 1);
    CHECK(r.err.find("functions") != std::string::npos);
    CHECK(call({"check", "--help"}).code == 0);
}

} // TEST_SUITE
