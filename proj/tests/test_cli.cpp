#include <gtest/gtest.h>
#include <json.hpp>

#include <array>
#include <cstdio>
#include <sstream>
#include <string>
#include <sys/wait.h>
#include <vector>

namespace {

struct Run {
    int code = -1;
    std::string out;
};

Run run_cli(const std::string& args) {
    const char* exe = IWR_CLI_PATH;
    Run r;
    std::string cmd = std::string(exe) + " " + args + " 2>/dev/null";
    FILE* pipe = popen(cmd.c_str(), "r");
    if (!pipe) return r;
    std::array<char, 4096> buf;
    std::size_t n;
    while ((n = fread(buf.data(), 1, buf.size(), pipe)) > 0) r.out.append(buf.data(), n);
    int status = pclose(pipe);
    r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return r;
}

std::vector<nlohmann::json> lines(const std::string& text) {
    std::vector<nlohmann::json> v;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line))
        if (!line.empty()) v.push_back(nlohmann::json::parse(line));
    return v;
}

std::string data(const std::string& label) { return std::string(IWR_DATA_DIR) + "/" + label + ".json"; }

}  // namespace

TEST(Cli, ExampleThreePasses) {
    auto r = run_cli("verify-example 3");
    ASSERT_EQ(r.code, 0) << r.out;
    auto v = lines(r.out);
    ASSERT_FALSE(v.empty());
    EXPECT_EQ(v.front()["report"], "example 3");
    EXPECT_TRUE(v.front().contains("scope"));
    int checks = 0;
    for (auto& j : v)
        if (j.contains("check_id")) {
            ++checks;
            EXPECT_EQ(j["status"], "pass") << j.dump();
            for (auto key : {"anchor", "computed", "expected", "tolerance_kind"}) EXPECT_TRUE(j.contains(key)) << key;
        }
    EXPECT_GT(checks, 10);
}

TEST(Cli, ExampleTwoReportsFailure) {
    auto r = run_cli("verify-example 2");
    EXPECT_EQ(r.code, 1);
    bool saw_fail = false;
    for (auto& j : lines(r.out))
        if (j.contains("status") && j["status"] == "fail") saw_fail = true;
    EXPECT_TRUE(saw_fail);
}

TEST(Cli, ConfigurationErrors) {
    EXPECT_EQ(run_cli("verify-example 4").code, 2);
    EXPECT_EQ(run_cli("no-such-command").code, 2);
    EXPECT_EQ(run_cli("modsym-table --prime 5 --newform /nonexistent/form.json").code, 2);
    EXPECT_EQ(run_cli("chars --char quad").code, 2);
    EXPECT_EQ(run_cli("iwasawa --prime 4 --newform " + data("19.2.a.a")).code, 2);
}

TEST(Cli, Characters) {
    auto r = run_cli("chars --char quad-23 --prime 11");
    ASSERT_EQ(r.code, 0);
    auto v = lines(r.out);
    ASSERT_EQ(v.size(), 1u);
    EXPECT_EQ(v[0]["conductor"], 23);
    EXPECT_EQ(v[0]["parity"], -1);
    EXPECT_EQ(v[0]["gauss_norm_ok"], true);
}

TEST(Cli, EisensteinSeries) {
    auto r = run_cli("eisenstein --char triv1 --char quad5 --weight 2 --terms 7");
    ASSERT_EQ(r.code, 0);
    auto v = lines(r.out);
    ASSERT_GE(v.size(), 8u);
    EXPECT_EQ(v[0]["level"], 5);
    // a(n) = sum_{d | n} chi_5(n/d) d
    EXPECT_EQ(v[1 + 2]["a"], "1");
    EXPECT_EQ(v[1 + 4]["a"], "3");
    EXPECT_EQ(v[1 + 6]["a"], "2");
    EXPECT_EQ(run_cli("eisenstein --char quad5 --weight 2 --terms 7").code, 2);
}

TEST(Cli, IwasawaBranches) {
    auto r = run_cli("iwasawa --prime 5 --precision 8,5 --newform " + data("19.2.a.a") + " --branches 0..3");
    ASSERT_EQ(r.code, 0);
    int branches = 0;
    for (auto& j : lines(r.out))
        if (j.contains("lambda")) {
            ++branches;
            EXPECT_EQ(j["mu"], 0);
            EXPECT_EQ(j["lambda"], 0);
            EXPECT_EQ(j["class_mod_pi"], "T^0");
        }
    EXPECT_EQ(branches, 4);
}

TEST(Cli, Congruence) {
    auto r = run_cli("congruence --prime 5 --newform " + data("11.2.a.a"));
    EXPECT_EQ(r.code, 0);
    EXPECT_NE(r.out.find("\"m\":11"), std::string::npos);
}
