#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "cli.hpp"

namespace {

struct Result {
    int code = 0;
    std::string out;
    std::string err;
};

Result run(std::vector<std::string> args) {
    args.insert(args.begin(), "fibgap");
    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    std::ostringstream out, err;
    const int code = fibgap::cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
    return {code, out.str(), err.str()};
}

std::string config(const char* name) { return std::string(FIBGAP_CONFIG_DIR) + "/" + name; }

std::vector<std::string> lines(const std::string& s) {
    std::vector<std::string> out;
    std::istringstream in(s);
    for (std::string line; std::getline(in, line);) out.push_back(line);
    return out;
}

} // namespace

TEST(Cli, Fnv1a) {
    EXPECT_EQ(fibgap::cli::fnv1a64(""), 0xcbf29ce484222325ULL);
    EXPECT_EQ(fibgap::cli::fnv1a64("a"), 0xaf63dc4c8601ec8cULL);
}

TEST(Cli, HelpAndUsageErrors) {
    EXPECT_EQ(run({"--help"}).code, fibgap::cli::kExitOk);
    EXPECT_EQ(run({"bogus"}).code, fibgap::cli::kExitConfig);
    EXPECT_EQ(run({"sbg", "--config", config("rod_fig5.json")}).code, fibgap::cli::kExitConfig); // --order missing
    EXPECT_EQ(run({"trace", "--config", "/nonexistent.json"}).code, fibgap::cli::kExitConfig);
    EXPECT_EQ(run({"sbg", "--config", config("rod_fig5.json"), "--order", "2", "--m", "2", "--l", "2"}).code,
              fibgap::cli::kExitConfig);
    EXPECT_EQ(run({"word", "--n", "40", "--cap", "100"}).code, fibgap::cli::kExitConfig);
}

TEST(Cli, Word) {
    const Result r = run({"word", "--n", "4"});
    EXPECT_EQ(r.code, 0);
    EXPECT_NE(r.out.find("ABAAB"), std::string::npos);
}

TEST(Cli, TraceCsvHeader) {
    const Result r = run({"trace", "--config", config("massspring_fig4.json"), "--points", "5", "--n-max", "4"});
    ASSERT_EQ(r.code, 0) << r.err;
    const auto ls = lines(r.out);
    ASSERT_GE(ls.size(), 2u + 5u * 5u);
    EXPECT_EQ(ls[0].rfind("# fibgap 0.1.0 config=", 0), 0u);
    EXPECT_EQ(ls[1], "omega,omega_normalised,n,x_n,t_n,escaped,flag");
    EXPECT_EQ(ls.size(), 2u + 25u);
}

TEST(Cli, OutputsAreDeterministicAcrossWorkers) {
    for (const auto& sub : std::vector<std::vector<std::string>>{
             {"sbg", "--config", config("rod_fig5.json"), "--order", "3", "--points", "400"},
             {"bands", "--config", config("beam_fig7.json"), "--n", "2..4", "--points", "200"},
             {"transmit", "--config", config("rod_fig8.json"), "--points", "300"}}) {
        auto a = sub;
        a.insert(a.end(), {"--workers", "1"});
        auto b = sub;
        b.insert(b.end(), {"--workers", "4"});
        const Result ra = run(a);
        const Result rb = run(b);
        ASSERT_EQ(ra.code, 0) << ra.err;
        ASSERT_EQ(rb.code, 0) << rb.err;
        EXPECT_EQ(ra.out, rb.out) << sub[0];
        EXPECT_FALSE(ra.out.empty());
    }
}

TEST(Cli, SbgJsonAndMask) {
    const auto mask = (std::filesystem::temp_directory_path() / "fibgap_test_mask.csv").string();
    const Result r = run({"sbg", "--config", config("massspring_fig4.json"), "--order", "2", "--points", "300",
                          "--mask", mask, "--highfreq"});
    ASSERT_EQ(r.code, 0) << r.err;
    EXPECT_NE(r.out.find("\"intervals\""), std::string::npos);
    EXPECT_NE(r.out.find("\"theorem\""), std::string::npos);
    EXPECT_NE(r.out.find("omega_star"), std::string::npos);
    std::ifstream in(mask);
    std::string first;
    std::getline(in, first);
    EXPECT_EQ(first.rfind("# fibgap", 0), 0u);
    std::filesystem::remove(mask);
}

TEST(Cli, Validate) {
    const Result r = run({"validate", "--suite", "chebyshev"});
    ASSERT_EQ(r.code, 0) << r.err;
    EXPECT_NE(r.out.find("\"passed\": true"), std::string::npos);
    EXPECT_EQ(run({"validate", "--suite", "nope"}).code, fibgap::cli::kExitConfig);
}
