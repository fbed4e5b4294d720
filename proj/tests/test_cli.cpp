#include <catch2/catch_amalgamated.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "weft/cli.hpp"

using namespace weft;

namespace {

struct RunResult {
    int code;
    std::string out;
    std::string err;
};

RunResult run(const std::vector<std::string>& args) {
    std::ostringstream out, err;
    int code = cli::run(args, out, err);
    return {code, out.str(), err.str()};
}

// writes a spec file into the temp directory and hands back its path
std::string spec_file(const std::string& name, const std::string& content) {
    std::string path = (std::filesystem::temp_directory_path() / name).string();
    std::ofstream f(path);
    f << content;
    return path;
}

} // namespace

TEST_CASE("collatz trace prints the orbit", "[cli]") {
    RunResult r = run({"collatz", "trace", "7"});
    CHECK(r.code == 0);
    CHECK(r.out == "7 -> 11 -> 17 -> 26 -> 13 -> 20 -> 10 -> 5 -> 8 -> 4 -> 2 -> 1\n"
                   "reached 1 at step 11\n");

    RunResult rec = run({"--format", "record", "collatz", "trace", "7"});
    CHECK(rec.code == 0);
    CHECK(rec.out == "start=7 reached_one=yes stopping_index=11 "
                     "orbit=7,11,17,26,13,20,10,5,8,4,2,1\n");

    RunResult capped = run({"collatz", "trace", "27", "--max-steps", "5"});
    CHECK(capped.code == 1);
    CHECK(capped.out.find("did not reach 1 within 5 steps") != std::string::npos);
}

TEST_CASE("collatz parity prints the parity vector prefix", "[cli]") {
    RunResult r = run({"collatz", "parity", "1", "--depth", "8"});
    CHECK(r.code == 0);
    CHECK(r.out == "10101010\n");
    CHECK(run({"collatz", "parity", "(10)", "--depth", "6"}).out == "100000\n"); // -1/3
    CHECK(run({"collatz", "parity", "2", "--depth", "4"}).out == "0101\n");
}

TEST_CASE("collatz unparity inverts exactly", "[cli]") {
    RunResult r = run({"collatz", "unparity", "(10)", "--depth", "8"});
    CHECK(r.code == 0);
    CHECK(r.out == "1\n");
    CHECK(run({"collatz", "unparity", "1(0)", "--depth", "8"}).out == "-1/3\n");

    RunResult rec = run({"--format", "record", "collatz", "unparity", "(1)", "--depth", "8"});
    CHECK(rec.out == "sigma=(1) depth=8 value=-1 residue=255\n");
}

TEST_CASE("stream distance prints exact exponents", "[cli]") {
    CHECK(run({"stream", "distance", "(01)", "(0011)"}).out == "2^-1\n");
    CHECK(run({"stream", "distance", "(01)", "(0101)"}).out == "0\n");
    CHECK(run({"stream", "distance", "(01)", "(0101)", "--depth", "4"}).out == "<=2^-4\n");
    CHECK(run({"stream", "distance", "(012)", "(010)"}).out == "2^-2\n");
    CHECK(run({"stream", "distance", "(01)", "(0011)"}).code == 0);
}

TEST_CASE("check causal reports verdicts through exit codes", "[cli]") {
    std::string tail_spec = spec_file("cli_tail.spec", "function tail\n");
    RunResult good = run({"check", "causal", "--spec", tail_spec, "--k", "-1", "--depth", "10"});
    CHECK(good.code == 0);
    CHECK(good.out.find("verified") == 0);

    RunResult bad = run({"check", "causal", "--spec", tail_spec, "--k", "0", "--depth", "10"});
    CHECK(bad.code == 1);
    CHECK(bad.out.find("falsified") == 0);

    RunResult record =
        run({"--format", "record", "check", "causal", "--spec", tail_spec, "--k", "-1",
             "--depth", "10"});
    CHECK(record.out.find("verdict=verified") != std::string::npos);
}

TEST_CASE("check bicausal lists the level sizes it passed", "[cli]") {
    std::string q_spec = spec_file("cli_q.spec", "function q\n");
    RunResult r = run({"check", "bicausal", "--spec", q_spec, "--depth", "8"});
    CHECK(r.code == 0);
    CHECK(r.out.find("verified") == 0);
    CHECK(r.out.find("level sizes checked: 2,4,8,16,32,64,128,256") != std::string::npos);

    std::string tail_spec = spec_file("cli_tail2.spec", "function tail\n");
    CHECK(run({"check", "bicausal", "--spec", tail_spec, "--depth", "8"}).code == 1);
}

TEST_CASE("weave summarizes the certificate", "[cli]") {
    std::string woven = spec_file("cli_weave.spec", "function weave(identity, affine(3, 2))\n");
    RunResult r = run({"weave", "--spec", woven});
    CHECK(r.code == 0);
    CHECK(r.out.find("k=-1") != std::string::npos);
    CHECK(r.out.find("members certified 0-causal: yes") != std::string::npos);
    CHECK(r.out.find("members certified bicausal: yes") != std::string::npos);

    std::string plain = spec_file("cli_plain.spec", "function identity\n");
    RunResult not_woven = run({"weave", "--spec", plain});
    CHECK(not_woven.code == 2);
    CHECK(not_woven.err.find("not a weave") != std::string::npos);
}

TEST_CASE("coinduce runs a spec coalgebra and checks the square", "[cli]") {
    std::string spec = spec_file("cli_coalg.spec",
                                 "coalgebra\n"
                                 "  states a b\n"
                                 "  observe a -> 0\n"
                                 "  observe b -> 1\n"
                                 "  step a -> b\n"
                                 "  step b -> a\n"
                                 "end\n");
    RunResult r = run({"coinduce", "--spec", spec, "--state", "a", "--depth", "8"});
    CHECK(r.code == 0);
    CHECK(r.out == "phi(a) prefix: 01010101\nfinality square: head ok, tail ok\n");

    RunResult rec =
        run({"--format", "record", "coinduce", "--spec", spec, "--state", "b", "--depth", "4"});
    CHECK(rec.out == "state=b prefix=1010 head_ok=yes tail_ok=yes\n");
}

TEST_CASE("mealy behavior streams the machine output", "[cli]") {
    std::string spec = spec_file("cli_mealy.spec",
                                 "mealy\n"
                                 "  states even odd\n"
                                 "  initial even\n"
                                 "  (even, 0) -> (0, even)\n"
                                 "  (even, 1) -> (1, odd)\n"
                                 "  (odd, 0) -> (1, odd)\n"
                                 "  (odd, 1) -> (0, even)\n"
                                 "end\n");
    RunResult r = run({"mealy", "behavior", "--spec", spec, "--state", "even", "--input",
                       "1101(0)", "--depth", "8"});
    CHECK(r.code == 0);
    CHECK(r.out == "10011111\n");
}

TEST_CASE("usage and parse problems exit with 2", "[cli]") {
    CHECK(run({}).code == 2);
    CHECK(run({"frobnicate"}).code == 2);
    CHECK(run({"collatz"}).code == 2);
    CHECK(run({"stream", "distance", "(01)"}).code == 2);          // missing operand
    CHECK(run({"stream", "distance", "01", "(1)"}).code == 2);     // bad literal
    CHECK(run({"collatz", "parity", "x", "--depth", "4"}).code == 2);
    CHECK(run({"collatz", "trace", "abc"}).code == 2);
    CHECK(run({"check", "causal", "--spec", "no_such_file.spec", "--k", "0", "--depth",
               "4"}).code == 2);
    std::string bad = spec_file("cli_bad.spec", "function bogus\n");
    RunResult r = run({"check", "causal", "--spec", bad, "--k", "0", "--depth", "4"});
    CHECK(r.code == 2);
    CHECK(r.err.find("line 1") != std::string::npos);
    CHECK(run({"--help"}).code == 0);
}

TEST_CASE("runs are deterministic", "[cli]") {
    std::string spec = spec_file("cli_det.spec", "function q\n");
    std::vector<std::string> args = {"--format", "record", "check", "causal", "--spec", spec,
                                     "--k", "0", "--depth", "9", "--seed", "5"};
    RunResult a = run(args);
    RunResult b = run(args);
    CHECK(a.code == b.code);
    CHECK(a.out == b.out);
}
