#include <gtest/gtest.h>
#include <sys/wait.h>
#include <unistd.h>

#include <array>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>

namespace {

namespace fs = std::filesystem;

struct Run {
    int code = -1;
    std::string out;
};

Run run(const std::string& args) {
    const std::string cmd = std::string(SHAPETEST_CLI_PATH) + " " + args + " 2>/dev/null";
    FILE* p = popen(cmd.c_str(), "r");
    Run r;
    if (!p) return r;
    std::array<char, 4096> buf{};
    std::size_t k;
    while ((k = fread(buf.data(), 1, buf.size(), p)) > 0) r.out.append(buf.data(), k);
    const int status = pclose(p);
    r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return r;
}

class Cli : public ::testing::Test {
protected:
    void SetUp() override {
        dir_ = fs::temp_directory_path() / ("shapetest_cli_" + std::to_string(::getpid()));
        fs::create_directories(dir_);
    }
    void TearDown() override { fs::remove_all(dir_); }

    std::string file(const std::string& name, const std::string& body) {
        const fs::path p = dir_ / name;
        std::ofstream(p) << body;
        return p.string();
    }
    std::string path(const std::string& name) const { return (dir_ / name).string(); }

    fs::path dir_;
};

std::string slurp(const std::string& p) {
    std::ifstream in(p);
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

TEST_F(Cli, NoArgumentsIsUsageError) {
    EXPECT_EQ(run("").code, 2);
    EXPECT_EQ(run("frobnicate").code, 2);
}

TEST_F(Cli, TestAcceptAndReject) {
    const auto dec = file("dec.json", R"({"gen":"ramp","n":64,"increasing":false})");
    const auto far = file("far.json", R"({"gen":"point","n":64,"at":64})");
    const auto a = run("test --class monotone --eps 0.5 --seed 1 --dist " + dec);
    EXPECT_EQ(a.code, 0);
    EXPECT_EQ(a.out, "accept\n");
    const auto r = run("test --class monotone --eps 0.5 --seed 1 --dist " + far);
    EXPECT_EQ(r.code, 1);
    EXPECT_EQ(r.out, "reject\n");
}

TEST_F(Cli, TestUsageErrors) {
    const auto dec = file("dec.json", R"({"gen":"ramp","n":64,"increasing":false})");
    EXPECT_EQ(run("test --class nope --eps 0.5 --dist " + dec).code, 2);
    EXPECT_EQ(run("test --class monotone --eps 0.5 --dist " + path("missing.json")).code, 2);
    EXPECT_EQ(run("test --class monotone --eps 0.5 --n 63 --dist " + dec).code, 2);
    EXPECT_EQ(run("test --class monotone --dist " + dec).code, 2);
    EXPECT_EQ(run("test --class monotone --eps 0.5 --dist " + file("bad.json", "{oops")).code, 2);
}

TEST_F(Cli, TrialsReportRate) {
    const auto dec = file("dec.json", R"({"gen":"ramp","n":64,"increasing":false})");
    const auto r = run("test --class monotone --eps 0.5 --seed 3 --trials 2 --dist " + dec);
    EXPECT_EQ(r.code, 0);
    EXPECT_EQ(r.out, "trial 0: accept\ntrial 1: accept\naccept_rate 1\naccept\n");
}

TEST_F(Cli, ProjectPrintsDistanceAndCertificate) {
    const auto two = file("two.json", R"({"n":2,"pmf":[0.2,0.8]})");
    const auto r = run("project --class monotone --dist " + two);
    EXPECT_EQ(r.code, 0);
    EXPECT_EQ(r.out.substr(0, 4), "0.6\n");
    EXPECT_NE(r.out.find("\"pmf\":[0.5,0.5]"), std::string::npos);
}

TEST_F(Cli, DecomposeEmitsVerifiedCertificate) {
    const auto dec = file("dec.json", R"({"gen":"ramp","n":64,"increasing":false})");
    const auto r = run("decompose --class monotone --gamma 0.2 --dist " + dec);
    EXPECT_EQ(r.code, 0);
    EXPECT_NE(r.out.find("\"verified\": true"), std::string::npos);
    const auto inc = file("inc.json", R"({"gen":"ramp","n":64})");
    EXPECT_EQ(run("decompose --class monotone --gamma 0.2 --dist " + inc).code, 2);
}

TEST_F(Cli, InstanceIsDeterministic) {
    const auto a = run("instance --family paninski --n 4 --eps 0.5 --seed 1");
    EXPECT_EQ(a.code, 0);
    EXPECT_EQ(a.out, run("instance --family paninski --n 4 --eps 0.5 --seed 1").out);
    ASSERT_EQ(run("instance --family ksiirv --n 3 --k 2 --out " + path("k.json")).code, 0);
    EXPECT_NE(slurp(path("k.json")).find("\"pmf\":[0.125,0.375,0.375,0.125]"), std::string::npos);
    EXPECT_EQ(run("instance --family nope --n 4").code, 2);
}

TEST_F(Cli, TolerantAccepts) {
    const auto b = file("b.json", R"({"gen":"binomial","n":101,"q":0.5})");
    const auto r = run("tolerant --class binomial --eps1 0 --eps2 0.5 --seed 2 --dist " + b);
    EXPECT_EQ(r.code, 0);
    EXPECT_EQ(r.out, "accept\n");
}

const char* kPlan = R"({"class":"monotone","n":[64],"eps":[0.5],"trials":%d,"seed":7,
 "generators":[{"gen":"ramp","increasing":false,"truth":"in"},{"gen":"point","at":64,"truth":"far"}]})";

std::string plan(int trials) {
    char buf[512];
    std::snprintf(buf, sizeof buf, kPlan, trials);
    return buf;
}

const std::string kHeader = "trial_id,seed,class,n,eps,generator,truth,outcome,samples_used,wall_ms\n";

TEST_F(Cli, BenchZeroTrialsIsHeaderOnly) {
    const auto p = file("p0.json", plan(0));
    const auto r = run("bench --no-wall-time --plan " + p);
    EXPECT_EQ(r.code, 0);
    EXPECT_EQ(r.out.substr(0, kHeader.size()), kHeader);
    EXPECT_EQ(r.out.find("\n0,"), std::string::npos);
}

TEST_F(Cli, BenchRerunsAreByteIdentical) {
    const auto p = file("p2.json", plan(2));
    ASSERT_EQ(run("bench --no-wall-time --plan " + p + " --out " + path("a.csv")).code, 0);
    ASSERT_EQ(run("bench --no-wall-time --plan " + p + " --out " + path("b.csv")).code, 0);
    const std::string a = slurp(path("a.csv"));
    EXPECT_EQ(a, slurp(path("b.csv")));
    EXPECT_EQ(a.substr(0, kHeader.size()), kHeader);
    EXPECT_NE(a.find(",ramp,in,accept,"), std::string::npos);
    EXPECT_NE(a.find(",point,far,reject,"), std::string::npos);
    EXPECT_NE(a.find("summary,,monotone,64,0.5,ramp,in,error_rate=0,"), std::string::npos);
}

TEST_F(Cli, BenchRejectsInvalidPlans) {
    EXPECT_EQ(run("bench --plan " + file("x.json", R"({"class":"monotone"})")).code, 2);
    // A far-labelled fixture that is in the class.
    const auto mislabelled = file("m.json", R"({"class":"monotone","n":[64],"eps":[0.5],"trials":1,
        "generators":[{"gen":"ramp","increasing":false,"truth":"far"}]})");
    EXPECT_EQ(run("bench --plan " + mislabelled).code, 2);
    const auto badtruth = file("t.json", R"({"class":"monotone","n":[64],"eps":[0.5],"trials":1,
        "generators":[{"gen":"uniform","truth":"maybe"}]})");
    EXPECT_EQ(run("bench --plan " + badtruth).code, 2);
}

}  // namespace
