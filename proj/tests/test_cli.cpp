#include "doctest.h"

#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>

namespace {

struct Run {
    int code = -1;
    std::string out, err;
};

std::string workdir() {
    static std::string dir = [] {
        char tmpl[] = "/tmp/hopfcli.XXXXXX";
        char* p = mkdtemp(tmpl);
        REQUIRE(p != nullptr);
        return std::string(p);
    }();
    return dir;
}

std::string slurp_file(const std::string& path) {
    std::ifstream in(path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::string put(const std::string& name, const std::string& text) {
    std::string path = workdir() + "/" + name;
    std::ofstream out(path);
    out << text;
    return path;
}

// Runs the tool with HOPFCALC_CAP cleared unless the caller sets it.
Run run(const std::string& args, const std::string& input = "",
        const std::string& env = "env -u HOPFCALC_CAP") {
    static int counter = 0;
    std::string stem = workdir() + "/io" + std::to_string(counter++);
    {
        std::ofstream in(stem + ".in");
        in << input;
    }
    std::string cmd = env + " " + HOPFCALC_BIN + " " + args + " <" + stem +
                      ".in >" + stem + ".out 2>" + stem + ".err";
    int rc = std::system(cmd.c_str());
    Run r;
    r.code = WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
    r.out = slurp_file(stem + ".out");
    r.err = slurp_file(stem + ".err");
    return r;
}

const char* kMs2 = R"(model Ms2
kind free
generator x degree 2
generator y degree 3
d y = x^2
)";

const char* kS3 = R"(model S3
kind free
generator w degree 3
)";

const char* kS2Honest = R"(model S2
kind free
generator w degree 2
generator ww degree 3
d ww = w^2
)";

const char* kEta = R"(morphism eta from Ms2 to S3
y -> w
)";

const char* kT5 = R"(model T5
kind table
basis e1 degree 1
basis u2 degree 2
basis c2 degree 2
basis v3 degree 3
basis h3 degree 3
basis j4 degree 4
basis k4 degree 4
basis w5 degree 5
basis l5 degree 5
d e1 = c2
d u2 = v3
d h3 = k4 - j4
d j4 = l5
d k4 = l5
product u2 c2 = k4
product v3 c2 = l5
product e1 u2 = h3
product e1 v3 = j4
)";

const char* kConf3 = R"(model Conf3
kind table
basis a12 degree 2
basis a23 degree 2
basis a31 degree 2
basis p degree 4
basis q degree 4
product a12 a23 = p
product a23 a31 = q
product a31 a12 = -p - q
)";

const char* kW22 = R"(model W22
kind table
basis g1 degree 2
basis g2 degree 2
)";

} // namespace

TEST_CASE("validate classifies model files") {
    std::string ms2 = put("ms2.model", kMs2);
    Run ok = run("validate " + ms2);
    CHECK(ok.code == 0);
    CHECK(ok.out == "valid, one-connected\n");

    std::string t5 = put("t5.model", kT5);
    Run t = run("validate " + t5);
    CHECK(t.code == 0);
    CHECK(t.out == "valid\n"); // degree-1 symbol

    std::string broken = put("broken.model", "model B\nkind table\n"
                                             "basis a degree 2\n"
                                             "basis b degree 3\n"
                                             "basis c degree 4\n"
                                             "d a = b\nd b = c\n");
    Run bad = run("validate " + broken);
    CHECK(bad.code == 1);
    CHECK(bad.out.find("invalid") == 0);
    CHECK(bad.out.find("d(d(") != std::string::npos);

    std::string mal = put("mal.model", "model M\nkind free\nbogus line\n");
    Run perr = run("validate " + mal);
    CHECK(perr.code == 2);
    CHECK(perr.err.find("line 3") != std::string::npos);

    Run missing = run("validate " + workdir() + "/nope.model");
    CHECK(missing.code == 2);
    CHECK(missing.err.find("cannot open") != std::string::npos);
}

TEST_CASE("validate checks morphisms against supplied models") {
    std::string ms2 = put("ms2.model", kMs2);
    std::string s3 = put("s3.model", kS3);
    std::string eta = put("eta.mor", kEta);
    Run ok = run("validate " + eta + " --model " + ms2 + " --model " + s3);
    CHECK(ok.code == 0);
    CHECK(ok.out == "valid\n");

    Run nomodel = run("validate " + eta + " --model " + ms2);
    CHECK(nomodel.code == 1);
    CHECK(nomodel.err.find("not supplied") != std::string::npos);

    std::string badmor = put("bad.mor", "morphism f from Ms2 to S3\nx -> w\n");
    Run bad = run("validate " + badmor + " --model " + ms2 + " --model " + s3);
    CHECK(bad.code == 1);
    CHECK(bad.out.find("invalid") == 0);
}

TEST_CASE("homology prints degree and rank rows") {
    std::string s3 = put("s3.model", kS3);
    Run bar = run("homology " + s3 + " --complex bar --max-degree 6");
    CHECK(bar.code == 0);
    CHECK(bar.out == "1\t0\n2\t1\n3\t0\n4\t1\n5\t0\n6\t1\n");

    Run eil = run("homology " + s3 + " --complex eil --max-degree 6");
    CHECK(eil.code == 0);
    CHECK(eil.out == "1\t0\n2\t1\n3\t0\n4\t0\n5\t0\n6\t0\n");

    // The honest even sphere carries its Whitehead square in degree 2.
    std::string s2 = put("s2.model", kS2Honest);
    Run even = run("homology " + s2 + " --complex eil --max-degree 6");
    CHECK(even.code == 0);
    CHECK(even.out == "1\t1\n2\t1\n3\t0\n4\t0\n5\t0\n6\t0\n");

    Run again = run("homology " + s2 + " --complex eil --max-degree 6");
    CHECK(again.out == even.out);

    std::string t5 = put("t5.model", kT5);
    Run notoc = run("homology " + t5 + " --complex bar --max-degree 4");
    CHECK(notoc.code == 1);
    CHECK(notoc.err.find("one-connected") != std::string::npos);
}

TEST_CASE("hopf evaluates morphism pairings") {
    std::string ms2 = put("ms2.model", kMs2);
    std::string eta = put("eta.mor", kEta);
    Run one = run("hopf " + ms2 + " " + eta +
                  " --cocycle 'x|x + y' --sphere 3");
    CHECK(one.code == 0);
    CHECK(one.out == "1\n");

    Run scaled = run("hopf " + ms2 + " " + eta +
                     " --cocycle '3*x|x + 3*y' --sphere 3");
    CHECK(scaled.out == "3\n");

    Run open = run("hopf " + ms2 + " " + eta + " --cocycle 'y' --sphere 3");
    CHECK(open.code == 1);
    CHECK(open.err.find("not closed") != std::string::npos);

    std::string etawrong = put("eta5.mor", "morphism eta from Ms2 to S5\n");
    Run wrong = run("hopf " + ms2 + " " + etawrong +
                    " --cocycle 'x|x + y' --sphere 3");
    CHECK(wrong.code == 1);
}

TEST_CASE("pair evaluates bracket pairings") {
    std::string conf3 = put("conf3.model", kConf3);
    std::string gamma = "a31|a12 + a31|a23 + a12|a12 + a12|a23";
    Run c = run("pair " + conf3 + " --cocycle '" + gamma +
                "' --bracket '[a12,a23]'");
    CHECK(c.code == 0);
    CHECK(c.out == "1\n");
    Run c2 = run("pair " + conf3 + " --cocycle '" + gamma +
                 "' --bracket '[a12,a23]'");
    CHECK(c2.out == c.out);

    std::string w22 = put("w22.model", kW22);
    Run w = run("pair " + w22 + " --cocycle 'g1|g2' --bracket '[g1,g2]'");
    CHECK(w.out == "1\n");
    Run tree = run("pair " + w22 +
                   " --cocycle 'tree{a:g1, b:g2; a->b}' --bracket '[g1,g2]'");
    CHECK(tree.out == "1\n");
}

TEST_CASE("reduce rewrites sphere cocycles in weight one") {
    std::string s3 = put("s3.model", kS3);
    Run echo = run("reduce " + s3 + " --cocycle 'w'");
    CHECK(echo.code == 0);
    CHECK(echo.out == "weight-one: w\ncertificate: 0\n");

    std::string t5 = put("t5.model", kT5);
    Run five = run("reduce " + t5 +
                   " --cocycle 'v3|c2|c2 - k4|c2 + 5*w5' --fundamental w5");
    CHECK(five.code == 0);
    CHECK(five.out.find("weight-one: 5*w5\n") == 0);
    Run fiveagain = run("reduce " + t5 +
                        " --cocycle 'v3|c2|c2 - k4|c2 + 5*w5' --fundamental w5");
    CHECK(fiveagain.out == five.out);

    Run open = run("reduce " + s3 + " --cocycle 'w|w'");
    CHECK(open.code == 1);

    std::string w22 = put("w22.model", kW22);
    Run notsphere = run("reduce " + w22 + " --cocycle 'g1|g2'");
    CHECK(notsphere.code == 1);
}

TEST_CASE("caps stop large computations with exit three") {
    std::string ms2 = put("ms2.model", kMs2);
    Run capped = run("homology " + ms2 +
                     " --complex bar --max-degree 8 --cap 2");
    CHECK(capped.code == 3);
    CHECK(capped.err.find("exceeds cap") != std::string::npos);

    Run viaenv = run("homology " + ms2 + " --complex bar --max-degree 8", "",
                     "env HOPFCALC_CAP=2");
    CHECK(viaenv.code == 3);

    Run flagwins = run("homology " + ms2 +
                       " --complex bar --max-degree 6 --cap 200000",
                       "", "env HOPFCALC_CAP=2");
    CHECK(flagwins.code == 0);

    Run badenv = run("homology " + ms2 + " --complex bar --max-degree 6", "",
                     "env HOPFCALC_CAP=banana");
    CHECK(badenv.code == 1);
    CHECK(badenv.err.find("HOPFCALC_CAP") != std::string::npos);
}

TEST_CASE("dash reads from standard input") {
    Run ok = run("validate -", kMs2);
    CHECK(ok.code == 0);
    CHECK(ok.out == "valid, one-connected\n");
}

TEST_CASE("usage errors exit with code two") {
    CHECK(run("frobnicate").code == 2);
    CHECK(run("").code == 2);
    std::string ms2 = put("ms2.model", kMs2);
    CHECK(run("homology " + ms2 + " --complex nope --max-degree 4").code == 2);
    CHECK(run("homology " + ms2 + " --complex bar").code == 2);
    CHECK(run("--help").code == 0);
}
