#include <set>
#include <sstream>

#include "cli.hpp"
#include "closure/clones.hpp"
#include "doctest.h"

namespace {

const std::string dir = CLOSURE_FIXTURES "/";

struct Result {
    int code;
    std::string out, err;
};

Result run(std::vector<std::string> args) {
    std::ostringstream out, err;
    int code = closure::cli::run(args, out, err);
    return {code, out.str(), err.str()};
}

// Non-comment output lines.
std::vector<std::string> lines(const std::string& text) {
    std::vector<std::string> out;
    std::istringstream in(text);
    std::string l;
    while (std::getline(in, l))
        if (!l.empty() && l[0] != '#') out.push_back(l);
    return out;
}

std::set<std::string> line_set(const std::string& text) {
    auto l = lines(text);
    return {l.begin(), l.end()};
}

}  // namespace

TEST_CASE("cli enumerate examples") {
    auto dual = run({"enumerate", "--clone", "E2", "--input", dir + "dual_or.txt"});
    CHECK(dual.code == 0);
    CHECK(line_set(dual.out) == std::set<std::string>{"0010", "1001", "0101", "0001", "0000"});

    auto echo = run({"enumerate", "--clone", "I2", "--input", dir + "join_example.txt"});
    CHECK(lines(echo.out) == std::vector<std::string>{"1101", "0110", "1010"});

    auto ops = run({"enumerate", "--op", dir + "or_op.txt", "--input", dir + "join_example.txt"});
    CHECK(line_set(ops.out) == std::set<std::string>{"1101", "1111", "0110", "1010", "1110"});

    auto limited = run({"enumerate", "--clone", "BF", "--input", dir + "mixed6.txt", "--limit", "3", "--stats"});
    CHECK(lines(limited.out).size() == 3);
    CHECK(limited.out.find("# solutions: 3") != std::string::npos);
    CHECK(limited.out.find("# max_delay_ticks:") != std::string::npos);
}

TEST_CASE("cli enumerate agrees with oracle on every registry clone") {
    for (const char* f : {"join_example.txt", "triangle.txt", "mixed5.txt", "mixed6.txt"})
        for (closure::CloneId c : closure::registry(5)) {
            INFO(f << " " << c.name());
            auto e = run({"enumerate", "--clone", c.name(), "--input", dir + f, "--sorted"});
            auto o = run({"oracle", "--clone", c.name(), "--input", dir + f, "--sorted"});
            CHECK(e.code == 0);
            CHECK(lines(e.out) == lines(o.out));
        }
}

TEST_CASE("cli member and extension verdicts") {
    CHECK(run({"member", "--clone", "D2", "--input", dir + "triangle.txt", "--vector", "111"}).code == 0);
    auto no = run({"member", "--clone", "E2", "--input", dir + "join_example.txt", "--vector", "1111"});
    CHECK(no.code == 1);
    CHECK(lines(no.out) == std::vector<std::string>{"false"});
    CHECK(run({"member", "--clone", "I2", "--input", dir + "triangle.txt", "--vector", "111", "--up", "1"}).code == 0);
    CHECK(run({"member", "--clone", "I2", "--input", dir + "triangle.txt", "--vector", "100", "--down", "2"}).code == 0);
    CHECK(run({"member", "--clone", "I2", "--input", dir + "triangle.txt", "--vector", "000", "--down", "2"}).code == 1);
    CHECK(run({"extension", "--clone", "E2", "--input", dir + "join_example.txt", "--vector", "00"}).code == 0);
    CHECK(run({"extension", "--clone", "I2", "--input", dir + "join_example.txt", "--vector", "11"}).code == 0);
    CHECK(run({"extension", "--clone", "I2", "--input", dir + "join_example.txt", "--vector", "00"}).code == 1);
}

TEST_CASE("cli up/down enumeration") {
    auto e = run({"enumerate", "--clone", "L0", "--input", dir + "triangle.txt", "--up", "1", "--sorted"});
    auto o = run({"oracle", "--clone", "L0", "--input", dir + "triangle.txt", "--up", "1", "--sorted"});
    CHECK(e.code == 0);
    CHECK(lines(e.out) == lines(o.out));
    CHECK(run({"enumerate", "--clone", "L0", "--input", dir + "triangle.txt", "--up", "1", "--down", "1"}).code == 2);
    CHECK(run({"enumerate", "--clone", "L0", "--input", dir + "triangle.txt", "--up", "4"}).code == 2);
}

TEST_CASE("cli extremal") {
    auto mx = run({"extremal", "--clone", "D2", "--side", "max", "--input", dir + "triangle.txt"});
    CHECK(mx.code == 0);
    CHECK(line_set(mx.out) == std::set<std::string>{"110", "011", "101"});
    auto mn = run({"extremal", "--clone", "D2", "--side", "min", "--input", dir + "triangle.txt"});
    CHECK(line_set(mn.out) == std::set<std::string>{"110", "011", "101"});
    CHECK(run({"extremal", "--clone", "D2", "--side", "middle", "--input", dir + "triangle.txt"}).code == 2);
}

TEST_CASE("cli larger domain") {
    auto e = run({"enumerate", "--op", dir + "minsum_op.txt", "--input", dir + "minsum.txt", "--stats", "--sorted"});
    auto o = run({"oracle", "--op", dir + "minsum_op.txt", "--input", dir + "minsum.txt", "--sorted"});
    CHECK(e.code == 0);
    CHECK(lines(e.out) == lines(o.out));
    CHECK(e.out.find("# polynomial_delay: no") != std::string::npos);
    CHECK(run({"member", "--op", dir + "minsum_op.txt", "--input", dir + "minsum.txt", "--vector", "121"}).code == 0);
    CHECK(run({"member", "--op", dir + "minsum_op.txt", "--input", dir + "minsum.txt", "--vector", "101"}).code == 1);
    CHECK(run({"enumerate", "--clone", "E2", "--input", dir + "minsum.txt"}).code == 2);
}

TEST_CASE("cli classify") {
    auto r = run({"classify", "--op", dir + "maj_op.txt"});
    CHECK(r.code == 0);
    CHECK(lines(r.out) == std::vector<std::string>{"D2"});
    auto both = run({"classify", "--op", dir + "and_op.txt", "--op", dir + "or_op.txt", "--input", dir + "triangle.txt"});
    CHECK(both.code == 0);
    CHECK(lines(both.out).front() == "M2");
    CHECK(both.out.find("# reduced clone:") != std::string::npos);
}

TEST_CASE("cli generators") {
    auto dnf = run({"gen", "mondnf", "--n", "5", "--m", "3", "--seed", "7"});
    CHECK(dnf.code == 0);
    CHECK(dnf.out.rfind("p dnf 5 3", 0) == 0);
    CHECK(run({"gen", "mondnf", "--n", "5", "--m", "3", "--seed", "7"}).out == dnf.out);
    auto rel = run({"gen", "mondnf", "--input", dir + "mondnf.txt", "--relation"});
    CHECK(rel.code == 0);
    CHECK(rel.out.rfind("4 ", 0) == 0);
    auto cnf = run({"gen", "2cnf", "--n", "4", "--m", "5"});
    CHECK(cnf.out.rfind("p cnf 4 5", 0) == 0);
    auto g = run({"gen", "relation", "--n", "6", "--m", "3", "--seed", "2"});
    CHECK(g.out.rfind("6 3 2", 0) == 0);
}

TEST_CASE("cli errors and exit codes") {
    auto bad = run({"enumerate", "--clone", "D2", "--input", dir + "bad_digit.txt"});
    CHECK(bad.code == 2);
    CHECK(bad.err.find("line 3") != std::string::npos);
    auto short_file = run({"enumerate", "--clone", "D2", "--input", dir + "short.txt"});
    CHECK(short_file.code == 2);
    CHECK(short_file.err.find("line") != std::string::npos);
    CHECK(run({"enumerate", "--clone", "D2", "--input", dir + "missing.txt"}).code == 2);
    CHECK(run({"enumerate", "--clone", "Z9", "--input", dir + "triangle.txt"}).code == 2);
    CHECK(run({"nonsense"}).code == 2);
    CHECK(run({}).code == 2);
    CHECK(run({"member", "--clone", "D2", "--input", dir + "triangle.txt", "--vector", "11"}).code == 2);
    CHECK(run({"enumerate", "--clone", "D2", "--op", dir + "maj_op.txt", "--input", dir + "triangle.txt"}).code == 2);
    CHECK(run({"enumerate", "--help"}).code == 0);
}

TEST_CASE("cli budget exhaustion") {
    setenv("CLOSURE_BUDGET", "4", 1);
    auto r = run({"oracle", "--clone", "BF", "--input", dir + "mixed6.txt"});
    unsetenv("CLOSURE_BUDGET");
    CHECK(r.code == 3);
    CHECK(r.err.find("budget") != std::string::npos);
}
