#include "qm/cli.hpp"
#include "qm/io.hpp"

#include <doctest.h>

#include <sstream>
#include <vector>

using namespace qm;

namespace {

struct CliResult {
    int code;
    std::string out;
    std::string err;
};

CliResult run_cli(std::vector<std::string> args) {
    args.insert(args.begin(), "qm");
    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    std::ostringstream out, err;
    int code = cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
    return {code, out.str(), err.str()};
}

const std::string kMarkovJson = "{\"arrows\":[[1,2,2],[2,3,2],[3,1,2]]}";

} // namespace

TEST_CASE("reduce and trace") {
    CliResult r = run_cli({"reduce", "--word", "1,1,2,2"});
    CHECK(r.code == 0);
    CHECK(r.out == "[]\n");
    CliResult t = run_cli({"trace", "--word", "1,1,2,2"});
    CHECK(t.code == 0);
    CHECK(t.out.find("\"rank\":1") != std::string::npos);
}

TEST_CASE("mutate emits canonical JSON") {
    CliResult r = run_cli({"mutate", "--quiver", kMarkovJson, "--at", "2"});
    CHECK(r.code == 0);
    // re-reading and re-serializing is the identity
    Quiver q = quiver_from_json(r.out);
    CHECK(quiver_to_json(q) + "\n" == r.out);
    CliResult dot = run_cli({"--format", "dot", "mutate", "--quiver", kMarkovJson, "--at", "2"});
    CHECK(dot.code == 0);
    CHECK(dot.out.find("digraph") != std::string::npos);
}

TEST_CASE("check prints tri-state verdicts") {
    CHECK(run_cli({"check", "--quiver", kMarkovJson, "--prop", "mutation-acyclic", "--depth", "6"})
              .out == "unknown\n");
    CHECK(run_cli({"check", "--quiver", kMarkovJson, "--prop", "acyclic"}).out == "no\n");
    CHECK(run_cli({"check", "--quiver", kMarkovJson, "--prop", "abundant"}).out == "yes\n");
    CHECK(run_cli({"check", "--quiver", kMarkovJson, "--prop", "weight-in", "--weights", "2"})
              .out == "yes\n");
}

TEST_CASE("encode") {
    CliResult r = run_cli({"encode", "--quiver", "{\"arrows\":[[1,2,1]]}", "--window", "2"});
    CHECK(r.code == 0);
    CHECK(r.out == "[\"4\",\"1\"]\n");
}

TEST_CASE("linking and classification") {
    std::string ray = "{\"kind\":\"generator\",\"id\":\"identity_ray\",\"params\":{}}";
    CHECK(run_cli({"linking", "--desc", ray, "--set", "5"}).out == "yes\n");
    CliResult c = run_cli({"classify-lf", "--desc", ray});
    CHECK(c.out.find("both_dense") != std::string::npos);
    CliResult rep = run_cli({"classify-lf", "--desc",
                             "{\"kind\":\"generator\",\"id\":\"repeat\",\"params\":{\"i\":3}}"});
    CHECK(rep.out.find("c_not_dense") != std::string::npos);
}

TEST_CASE("build-seq materializes the family word") {
    CliResult r = run_cli({"build-seq", "--family", "{\"sets\":[[1,2],[3,4]]}"});
    CHECK(r.code == 0);
    CHECK(r.out.find("\"word\":[1,2,1,2,3,4,3,4]") != std::string::npos);
}

TEST_CASE("cvec reports colors") {
    CliResult r = run_cli({"cvec", "--quiver", "{\"arrows\":[[2,1,2]]}", "--word", "1"});
    CHECK(r.code == 0);
    CHECK(r.out.find("\"1\":{\"c\":{\"1\":-1,\"2\":0},\"color\":\"red\"}") != std::string::npos);
    CHECK(r.out.find("\"2\":{\"c\":{\"1\":2,\"2\":1},\"color\":\"green\"}") != std::string::npos);
}

TEST_CASE("trajectory, certify, gadget") {
    std::string a40 = quiver_to_json(a_infinity_window(40));
    std::string shifted = "{\"kind\":\"generator\",\"id\":\"shifted_ray\",\"params\":{\"k\":2}}";
    CliResult t = run_cli({"trajectory", "--quiver", a40, "--desc", shifted, "--steps", "3"});
    CHECK(t.code == 0);
    CliResult c = run_cli({"--horizon", "35", "certify", "--quiver", a40, "--desc", shifted,
                           "--mode", "strong", "--window", "1"});
    CHECK(c.out.find("oscillation") != std::string::npos);
    CliResult g = run_cli({"gadget", "--kind", "af", "--desc", shifted, "--set", "1"});
    CHECK(g.code == 0);
    CHECK(g.out.find("\"verified_steps\":50") != std::string::npos);
    CliResult lf = run_cli({"gadget", "--kind", "lf", "--desc",
                            "{\"kind\":\"generator\",\"id\":\"identity_ray\",\"params\":{}}",
                            "--set", "1", "--segments", "3"});
    CHECK(lf.code == 0);
    CHECK(lf.out.find("anchor_counts") != std::string::npos);
}

TEST_CASE("fraisse subcommands") {
    CliResult s = run_cli({"--seed", "9", "fraisse", "steer", "--target", kMarkovJson, "--radius",
                           "3"});
    CHECK(s.code == 0);
    CHECK(s.out.find("\"verified\":true") != std::string::npos);
    CliResult s2 = run_cli({"--seed", "9", "fraisse", "steer", "--target", kMarkovJson, "--radius",
                            "3"});
    CHECK(s2.out == s.out); // byte-identical reruns
    CliResult b = run_cli({"--seed", "9", "fraisse", "baf", "--at", "1", "--stages", "4"});
    CHECK(b.code == 0);
    CHECK(b.out.find("\"stage\":4") != std::string::npos);
}

TEST_CASE("mutclass subcommand") {
    CliResult r = run_cli({"mutclass", "--quiver", kMarkovJson, "--max-weight", "4", "--max-nodes",
                           "50"});
    CHECK(r.code == 0);
    CHECK(r.out.find("\"members_found\":1") != std::string::npos);
    CHECK(r.out.find("\"frontier_exhausted\":true") != std::string::npos);
}

TEST_CASE("JSON forms round-trip") {
    SUBCASE("counts beyond 64 bits travel as decimal strings") {
        Quiver q;
        Int huge = 1;
        for (int i = 0; i < 50; ++i) huge *= 10;
        q.set(1, 2, huge);
        q.set(2, 3, -3);
        std::string text = quiver_to_json(q);
        CHECK(text.find("\"1") != std::string::npos); // quoted big count
        Quiver back = quiver_from_json(text);
        CHECK(back == q);
        CHECK(quiver_to_json(back) == text);
    }
    SUBCASE("framed quivers keep their frozen companions") {
        FramedQuiver fq = frame(Quiver::from_arrows({{1, 2, 1}}));
        std::string text = framed_to_json(fq);
        FramedQuiver back = framed_from_json(text);
        CHECK(back == fq);
        CHECK(framed_to_json(back) == text);
    }
    SUBCASE("invalid documents are domain errors") {
        CHECK_THROWS(quiver_from_json("{\"arrows\":[[1,1,2]]}"));
        CHECK_THROWS(quiver_from_json("{\"arrows\":[[0,2,1]]}"));
        CHECK_THROWS(quiver_from_json("{\"arrows\":[[-1,2,1]]}"));
    }
}

TEST_CASE("exit codes") {
    CHECK(run_cli({"mutate", "--quiver", kMarkovJson}).code == 2); // missing --at
    CHECK(run_cli({"nonsense"}).code == 2);
    CliResult bad = run_cli({"check", "--quiver", "{\"arrows\":[[1,1,2]]}", "--prop", "acyclic"});
    CHECK(bad.code == 1);
    CHECK(bad.err.find("MalformedCode") != std::string::npos);
    CHECK(run_cli({"mutate", "--quiver", "{\"arrows\":[[1]]}", "--at", "1"}).code == 1);
    CHECK(run_cli({"mutate", "--quiver", "{broken", "--at", "1"}).code == 1);
    CHECK(run_cli({"linking", "--desc", "{\"kind\":\"nope\"}", "--set", "1"}).code == 1);
    CHECK(run_cli({"examples", "--paper"}).code == 0);
}
