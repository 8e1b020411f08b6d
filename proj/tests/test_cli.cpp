#include <gtest/gtest.h>

#include <array>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>

namespace {

namespace fs = std::filesystem;

struct RunResult {
    int exit_code = -1;
    std::string output;
};

RunResult run_cli(const std::string& args) {
    std::string cmd = std::string(QCSP_CLI_PATH) + " " + args + " 2>&1";
    std::array<char, 512> buf{};
    RunResult res;
    FILE* pipe = popen(cmd.c_str(), "r");
    if (!pipe) return res;
    while (fgets(buf.data(), buf.size(), pipe)) res.output += buf.data();
    int status = pclose(pipe);
    res.exit_code = WEXITSTATUS(status);
    return res;
}

class CliTest : public ::testing::Test {
protected:
    void SetUp() override {
        dir = fs::temp_directory_path() / "qcsp_cli_test";
        fs::create_directories(dir);
    }
    void TearDown() override { fs::remove_all(dir); }

    std::string write(const std::string& name, const std::string& content) {
        fs::path p = dir / name;
        std::ofstream out(p);
        out << content;
        return p.string();
    }

    fs::path dir;
};

TEST_F(CliTest, SolveTrivialInstances) {
    write("eq.rel",
          "domain 2\n"
          "relation EQ 2\n"
          "1 1\n"
          "2 2\n"
          "end\n");
    std::string yes = write("yes.qcsp",
                            "domain 2\n"
                            "use eq.rel\n"
                            "prefix A x E y\n"
                            "cons EQ x y\n");
    RunResult r = run_cli("solve " + yes);
    EXPECT_EQ(r.exit_code, 0);
    EXPECT_NE(r.output.find("TRUE"), std::string::npos);

    std::string no = write("no.qcsp",
                           "domain 2\n"
                           "use eq.rel\n"
                           "prefix E y A x\n"
                           "cons EQ x y\n");
    r = run_cli("solve " + no);
    EXPECT_EQ(r.exit_code, 1);
    EXPECT_NE(r.output.find("FALSE"), std::string::npos);

    r = run_cli("solve " + yes + " --strategy");
    EXPECT_EQ(r.exit_code, 0);
    EXPECT_NE(r.output.find("strategy y"), std::string::npos);
}

TEST_F(CliTest, SolveWithEmptyRestrictionIsTrue) {
    write("eq.rel",
          "domain 2\n"
          "relation EQ 2\n"
          "1 1\n"
          "2 2\n"
          "end\n");
    std::string no = write("no.qcsp",
                           "domain 2\n"
                           "use eq.rel\n"
                           "prefix E y A x\n"
                           "cons EQ x y\n");
    std::string empty = write("empty.restrict", "# no plays\n");
    RunResult r = run_cli("solve " + no + " --restrict " + empty);
    EXPECT_EQ(r.exit_code, 0);
    EXPECT_NE(r.output.find("TRUE"), std::string::npos);

    std::string full = write("full.restrict", "1\n2\n");
    r = run_cli("solve " + no + " --restrict " + full);
    EXPECT_EQ(r.exit_code, 1);
}

TEST_F(CliTest, Pi2RejectsForeignLanguage) {
    write("eq.rel",
          "domain 6\n"
          "relation EQ 2\n"
          "1 1\n"
          "end\n");
    std::string inst = write("x.qcsp",
                             "domain 6\n"
                             "use eq.rel\n"
                             "prefix A x E y\n"
                             "cons EQ x y\n");
    RunResult r = run_cli("solve " + inst + " --pi2");
    EXPECT_EQ(r.exit_code, 2);
    EXPECT_NE(r.output.find("6-element language"), std::string::npos);
}

TEST_F(CliTest, ExitCode2OnParseAndUsageErrors) {
    std::string bad = write("bad.qcsp", "domain 2\nprefix A x E\n");
    EXPECT_EQ(run_cli("solve " + bad).exit_code, 2);
    EXPECT_EQ(run_cli("solve /nonexistent/file.qcsp").exit_code, 2);
    EXPECT_EQ(run_cli("frobnicate").exit_code, 2);
}

TEST_F(CliTest, CspSubcommand) {
    write("one.rel",
          "domain 2\n"
          "relation ONE 1\n"
          "2\n"
          "end\n");
    std::string sat = write("sat.qcsp",
                            "domain 2\n"
                            "use one.rel\n"
                            "prefix E a E b\n"
                            "cons ONE a\n");
    RunResult r = run_cli("csp " + sat);
    EXPECT_EQ(r.exit_code, 0);
    EXPECT_NE(r.output.find("SAT"), std::string::npos);
    EXPECT_NE(r.output.find("a = 2"), std::string::npos);
}

TEST_F(CliTest, ReduceRoundTrip) {
    std::string qdimacs = write("f.qdimacs",
                                "p cnf 2 1\n"
                                "a 1 0\n"
                                "e 2 0\n"
                                "1 -2 2 0\n");
    RunResult r = run_cli("reduce q3cnf " + qdimacs + " --out " + (dir / "enc").string());
    EXPECT_EQ(r.exit_code, 0);
    EXPECT_TRUE(fs::exists(dir / "enc" / "encoded.qcsp"));
    EXPECT_TRUE(fs::exists(dir / "enc" / "encoded.rel"));
    std::ifstream manifest(dir / "enc" / "manifest.txt");
    std::string line;
    std::getline(manifest, line);
    EXPECT_NE(line.find("fnv1a64="), std::string::npos);
    EXPECT_NE(line.find("encoder=q3cnf-complement/1"), std::string::npos);
    EXPECT_NE(line.find("seed=7"), std::string::npos);

    // the source forall x1 exists x2 (x1 | ~x2 | x2) is true, so the
    // complement encoding is false
    RunResult s = run_cli("solve " + (dir / "enc" / "encoded.qcsp").string());
    EXPECT_EQ(s.exit_code, 1);

    EXPECT_EQ(run_cli("reduce pi2-1in3 " + qdimacs).exit_code, 2);  // wrong format
}

TEST_F(CliTest, InducedEmitsTreeInstance) {
    write("src.rel",
          "domain 2\n"
          "relation R 3\n"
          "1 1 1\n"
          "2 2 2\n"
          "1 2 2\n"
          "end\n");
    RunResult r = run_cli("induced " + (dir / "src.rel").string() + " R --out " +
                          (dir / "ind").string());
    EXPECT_EQ(r.exit_code, 0);
    EXPECT_NE(r.output.find("3 variables"), std::string::npos);
    std::ifstream q(dir / "ind" / "induced.qcsp");
    std::string all((std::istreambuf_iterator<char>(q)), std::istreambuf_iterator<char>());
    EXPECT_NE(all.find("A z1 A z2"), std::string::npos);
    EXPECT_NE(all.find("E y0 E y1_1 E y1_2"), std::string::npos);
    EXPECT_NE(all.find("cons S1 y0 y1_1 z1"), std::string::npos);
}

TEST_F(CliTest, MightyCheckFromFile) {
    // the |A| = 2 kind-V sample: full on constant alpha, swap otherwise
    write("v.rel",
          "domain 2\n"
          "relation Q 6\n"
          "param z 2 delta 0 alpha 2 value 2\n"
          "# z slices identical; alpha (1,1) and (2,2) full, mixed = swap\n"
          "1 1 1 1 1 1\n1 1 1 1 1 2\n1 1 1 1 2 1\n1 1 1 1 2 2\n"
          "1 1 2 2 1 1\n1 1 2 2 1 2\n1 1 2 2 2 1\n1 1 2 2 2 2\n"
          "1 1 1 2 1 2\n1 1 1 2 2 1\n1 1 2 1 1 2\n1 1 2 1 2 1\n"
          "1 2 1 1 1 1\n1 2 1 1 1 2\n1 2 1 1 2 1\n1 2 1 1 2 2\n"
          "1 2 2 2 1 1\n1 2 2 2 1 2\n1 2 2 2 2 1\n1 2 2 2 2 2\n"
          "1 2 1 2 1 2\n1 2 1 2 2 1\n1 2 2 1 1 2\n1 2 2 1 2 1\n"
          "2 1 1 1 1 1\n2 1 1 1 1 2\n2 1 1 1 2 1\n2 1 1 1 2 2\n"
          "2 1 2 2 1 1\n2 1 2 2 1 2\n2 1 2 2 2 1\n2 1 2 2 2 2\n"
          "2 1 1 2 1 2\n2 1 1 2 2 1\n2 1 2 1 1 2\n2 1 2 1 2 1\n"
          "2 2 1 1 1 1\n2 2 1 1 1 2\n2 2 1 1 2 1\n2 2 1 1 2 2\n"
          "2 2 2 2 1 1\n2 2 2 2 1 2\n2 2 2 2 2 1\n2 2 2 2 2 2\n"
          "2 2 1 2 1 2\n2 2 1 2 2 1\n2 2 2 1 1 2\n2 2 2 1 2 1\n"
          "end\n"
          "relation D 3\n"
          "param z 2 delta 0 alpha 0 value 1\n"
          "1 1 1\n1 1 2\n1 2 1\n1 2 2\n2 1 1\n2 1 2\n2 2 1\n2 2 2\n"
          "end\n");
    RunResult r = run_cli("mighty check V " + (dir / "v.rel").string());
    EXPECT_EQ(r.exit_code, 0) << r.output;
    EXPECT_NE(r.output.find("cond3 PASS"), std::string::npos);

    RunResult bad = run_cli("mighty check II " + (dir / "v.rel").string());
    EXPECT_EQ(bad.exit_code, 2);  // missing parts B, C
}

TEST_F(CliTest, VerifyReportsAreByteIdentical) {
    RunResult a = run_cli("--seed 11 verify equivalence --samples 6");
    RunResult b = run_cli("--seed 11 verify equivalence --samples 6");
    EXPECT_EQ(a.exit_code, 0);
    EXPECT_EQ(a.output, b.output);
    RunResult c = run_cli("--seed 12 verify equivalence --samples 6");
    EXPECT_EQ(c.exit_code, 0);
    EXPECT_NE(a.output, c.output);  // the seed is part of the header
}

TEST_F(CliTest, TphiSubcommand) {
    std::string no = write("no.dnf",
                           "p dnf 1 1\n"
                           "a 1 0\n"
                           "1 1 1 0\n");
    RunResult r = run_cli("tphi " + no);
    EXPECT_EQ(r.exit_code, 0);
    EXPECT_NE(r.output.find("No-instance shape"), std::string::npos);

    std::string yes = write("yes.dnf",
                            "p dnf 1 1\n"
                            "e 1 0\n"
                            "1 1 1 0\n");
    r = run_cli("tphi " + yes + " --out " + (dir / "tp").string());
    EXPECT_EQ(r.exit_code, 0);
    EXPECT_NE(r.output.find("Yes-instance shape"), std::string::npos);
    EXPECT_TRUE(fs::exists(dir / "tp" / "tphi.rel"));

    RunResult v = run_cli("verify tphi --max-vars 1");
    EXPECT_EQ(v.exit_code, 0);
}

TEST_F(CliTest, PolySuite) {
    RunResult r = run_cli("poly");
    EXPECT_EQ(r.exit_code, 0);
    int pass_lines = 0;
    std::size_t pos = 0;
    while ((pos = r.output.find(" PASS", pos)) != std::string::npos) {
        ++pass_lines;
        pos += 5;
    }
    EXPECT_EQ(pass_lines, 12);
}

}  // namespace
