#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <sys/stat.h>
#include <sys/wait.h>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "tmac/tmac.hpp"

#include "test_util.hpp"

using namespace tmac;

namespace {

const std::string kCli = TMAC_CLI_PATH;

struct CmdResult {
    int exit_code = -1;
    std::string out;
};

CmdResult run_cmd(const std::string& args, bool keep_stderr = false) {
    std::string cmd = kCli + " " + args + (keep_stderr ? " 2>&1" : " 2>/dev/null");
    FILE* pipe = ::popen(cmd.c_str(), "r");
    REQUIRE(pipe != nullptr);
    CmdResult result;
    char buf[4096];
    std::size_t n;
    while ((n = std::fread(buf, 1, sizeof buf, pipe)) > 0)
        result.out.append(buf, n);
    int status = ::pclose(pipe);
    result.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return result;
}

void write_text(const std::filesystem::path& p, const std::string& text) {
    std::ofstream out(p, std::ios::binary | std::ios::trunc);
    out << text;
}

// Value on the first line containing `contains`, after its ':' or '='.
double value_from_line(const std::string& text, const std::string& contains) {
    std::istringstream ss(text);
    std::string line;
    while (std::getline(ss, line)) {
        if (line.find(contains) == std::string::npos)
            continue;
        std::size_t sep = line.find_last_of(":=");
        REQUIRE(sep != std::string::npos);
        return std::stod(line.substr(sep + 1));
    }
    FAIL("no line contains: ", contains);
    return 0.0;
}

}  // namespace

TEST_CASE("cli: keygen writes a restricted random key") {
    testutil::TempDir dir;
    auto k1 = dir.file("a.key");
    auto k2 = dir.file("b.key");

    CHECK(run_cmd("keygen --out " + k1.string()).exit_code == 0);
    CHECK(run_cmd("keygen --out " + k2.string()).exit_code == 0);
    CHECK(std::filesystem::file_size(k1) == 32);

    struct stat st{};
    REQUIRE(::stat(k1.c_str(), &st) == 0);
    CHECK((st.st_mode & 0777) == 0600);

    // Two invocations must not produce the same key material.
    std::ifstream f1(k1, std::ios::binary), f2(k2, std::ios::binary);
    Bytes b1((std::istreambuf_iterator<char>(f1)), std::istreambuf_iterator<char>());
    Bytes b2((std::istreambuf_iterator<char>(f2)), std::istreambuf_iterator<char>());
    CHECK(b1 != b2);

    CHECK(run_cmd("keygen --out " + dir.file("c.key").string() + " --bytes 64").exit_code == 0);
    CHECK(std::filesystem::file_size(dir.file("c.key")) == 64);

    // Below the minimum: refused with the WeakKeyLength code.
    auto weak = run_cmd("keygen --out " + dir.file("d.key").string() + " --bytes 8", true);
    CHECK(weak.exit_code == 15);
    CHECK(weak.out.find("WeakKeyLength") != std::string::npos);
}

TEST_CASE("cli: sign then verify round-trips within the window") {
    testutil::TempDir dir;
    auto key = dir.file("k.key");
    auto msg = dir.file("m.txt");
    auto env = dir.file("m.env");
    REQUIRE(run_cmd("keygen --out " + key.string()).exit_code == 0);
    write_text(msg, "a message worth authenticating");

    auto signed_rc = run_cmd("sign --key " + key.string() + " --in " + msg.string() +
                             " --out " + env.string(), true);
    CHECK(signed_rc.exit_code == 0);
    CHECK(signed_rc.out.find("identifier:") != std::string::npos);

    auto verified = run_cmd("verify --key " + key.string() + " --in " + env.string());
    CHECK(verified.exit_code == 0);
    CHECK(verified.out == "Accept\n");
}

TEST_CASE("cli: verify with the wrong key is InvalidMac, exit 3") {
    testutil::TempDir dir;
    auto key = dir.file("k.key");
    auto wrong = dir.file("w.key");
    auto msg = dir.file("m.txt");
    auto env = dir.file("m.env");
    REQUIRE(run_cmd("keygen --out " + key.string()).exit_code == 0);
    REQUIRE(run_cmd("keygen --out " + wrong.string()).exit_code == 0);
    write_text(msg, "m");
    REQUIRE(run_cmd("sign --key " + key.string() + " --in " + msg.string() + " --out " +
                    env.string()).exit_code == 0);

    auto r = run_cmd("verify --key " + wrong.string() + " --in " + env.string());
    CHECK(r.exit_code == 3);
    CHECK(r.out == "InvalidMac\n");
}

TEST_CASE("cli: truncated envelope is MalformedEnvelope, exit 5") {
    testutil::TempDir dir;
    auto key = dir.file("k.key");
    auto msg = dir.file("m.txt");
    auto env = dir.file("m.env");
    REQUIRE(run_cmd("keygen --out " + key.string()).exit_code == 0);
    write_text(msg, "m");
    REQUIRE(run_cmd("sign --key " + key.string() + " --in " + msg.string() + " --out " +
                    env.string()).exit_code == 0);

    auto size = std::filesystem::file_size(env);
    std::filesystem::resize_file(env, size / 2);

    auto r = run_cmd("verify --key " + key.string() + " --in " + env.string());
    CHECK(r.exit_code == 5);
    CHECK(r.out == "MalformedEnvelope\n");
}

TEST_CASE("cli: unknown suite and weak identifier are flagged by name") {
    testutil::TempDir dir;
    auto key = dir.file("k.key");
    auto msg = dir.file("m.txt");
    REQUIRE(run_cmd("keygen --out " + key.string()).exit_code == 0);
    write_text(msg, "m");

    auto bad_suite = run_cmd("sign --key " + key.string() + " --in " + msg.string() +
                             " --suite TMAC-NOSUCH --out /dev/null", true);
    CHECK(bad_suite.exit_code == 10);
    CHECK(bad_suite.out.find("UnsupportedAlgorithm") != std::string::npos);

    auto weak_id = run_cmd("sign --key " + key.string() + " --in " + msg.string() +
                           " --id 00112233 --out /dev/null", true);
    CHECK(weak_id.exit_code == 14);
    CHECK(weak_id.out.find("WeakIdentifier") != std::string::npos);

    auto missing_key = run_cmd("sign --key " + dir.file("absent.key").string() + " --in " +
                               msg.string() + " --out /dev/null", true);
    CHECK(missing_key.exit_code == 19);
    CHECK(missing_key.out.find("IoError") != std::string::npos);
}

TEST_CASE("cli: the TMAC_SUITE environment variable sets the default suite") {
    testutil::TempDir dir;
    auto key = dir.file("k.key");
    auto msg = dir.file("m.txt");
    auto env_path = dir.file("m.env");
    REQUIRE(run_cmd("keygen --out " + key.string()).exit_code == 0);
    write_text(msg, "m");

    std::string prefix = "TMAC_SUITE=TMAC-SHA1 ";
    std::string cmd = prefix + kCli + " sign --key " + key.string() + " --in " +
                      msg.string() + " --out " + env_path.string() + " 2>/dev/null";
    REQUIRE(std::system(cmd.c_str()) == 0);

    std::ifstream in(env_path, std::ios::binary);
    Bytes wire((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    CHECK(decode_envelope(wire).suite_name == "TMAC-SHA1-UNIX-30");

    // An explicit flag overrides the environment.
    cmd = prefix + kCli + " sign --key " + key.string() + " --in " + msg.string() +
          " --suite TMAC-SHA256 --out " + env_path.string() + " 2>/dev/null";
    REQUIRE(std::system(cmd.c_str()) == 0);
    std::ifstream in2(env_path, std::ios::binary);
    Bytes wire2((std::istreambuf_iterator<char>(in2)), std::istreambuf_iterator<char>());
    CHECK(decode_envelope(wire2).suite_name == "TMAC-SHA256-UNIX-30");
}

TEST_CASE("cli: state file keeps rejecting replays across process restarts") {
    testutil::TempDir dir;
    auto key = dir.file("k.key");
    auto msg = dir.file("m.txt");
    auto env = dir.file("m.env");
    auto state = dir.file("verifier.state");
    REQUIRE(run_cmd("keygen --out " + key.string()).exit_code == 0);
    write_text(msg, "exactly once");
    REQUIRE(run_cmd("sign --key " + key.string() + " --in " + msg.string() + " --out " +
                    env.string()).exit_code == 0);

    std::string verify = "verify --key " + key.string() + " --in " + env.string() +
                         " --state " + state.string();
    auto first = run_cmd(verify);
    CHECK(first.exit_code == 0);
    CHECK(first.out == "Accept\n");
    CHECK(std::filesystem::exists(state));

    // Fresh process, same state file: the replay is caught.
    auto second = run_cmd(verify);
    CHECK(second.exit_code == 2);
    CHECK(second.out == "ReplayDetected\n");
}

TEST_CASE("cli: corrupted state file is refused, not silently reset") {
    testutil::TempDir dir;
    auto key = dir.file("k.key");
    auto msg = dir.file("m.txt");
    auto env = dir.file("m.env");
    auto state = dir.file("verifier.state");
    REQUIRE(run_cmd("keygen --out " + key.string()).exit_code == 0);
    write_text(msg, "m");
    REQUIRE(run_cmd("sign --key " + key.string() + " --in " + msg.string() + " --out " +
                    env.string()).exit_code == 0);
    std::string verify = "verify --key " + key.string() + " --in " + env.string() +
                         " --state " + state.string();
    REQUIRE(run_cmd(verify).exit_code == 0);

    // Flip one byte in the middle of the file.
    std::fstream f(state, std::ios::in | std::ios::out | std::ios::binary);
    f.seekg(10);
    char b;
    f.get(b);
    f.seekp(10);
    f.put(static_cast<char>(b ^ 0x01));
    f.close();

    auto r = run_cmd(verify, true);
    CHECK(r.exit_code == 20);
    CHECK(r.out.find("StateFileCorrupt") != std::string::npos);
}

TEST_CASE("cli: attack-cost reproduces the surveyed-hardware numbers") {
    auto r = run_cmd("attack-cost --bits 160 --hashrate 7722e9");
    CHECK(r.exit_code == 0);

    double seconds = value_from_line(r.out, "seconds");
    double years = value_from_line(r.out, "years");
    CHECK(std::abs(seconds - 184.33e9) / 184.33e9 <= 0.005);
    CHECK(std::abs(years - 5841.16) / 5841.16 <= 0.005);

    auto tiny = run_cmd("attack-cost --bits 2 --hashrate 1.1774");
    CHECK(tiny.exit_code == 0);
    CHECK(value_from_line(tiny.out, "seconds") == doctest::Approx(2.0).epsilon(1e-9));

    CHECK(run_cmd("attack-cost --bits 160 --hashrate 0", true).exit_code == 16);
}

TEST_CASE("cli: attack-sim lands in the expected band") {
    auto r = run_cmd("attack-sim --bits 16 --runs 50 --seed 5");
    CHECK(r.exit_code == 0);
    double mean = value_from_line(r.out, "mean trials");
    CHECK(mean > 150);
    CHECK(mean < 600);
    CHECK(value_from_line(r.out, "predicted") == doctest::Approx(1.1774 * 256).epsilon(1e-4));
}

TEST_CASE("cli: attack-sim window demo shows total invalidation") {
    auto r = run_cmd("attack-sim --bits 16 --runs 5 --seed 7 --window-demo --corpus 2000");
    CHECK(r.exit_code == 0);
    CHECK(value_from_line(r.out, "full-width valid after increment") == 0.0);
    CHECK(value_from_line(r.out, "full-width valid (same window)") == 2000.0);
}

TEST_CASE("cli: scenario files run end to end") {
    testutil::TempDir dir;
    auto key = dir.file("k.key");
    auto good = dir.file("good.scenario");
    auto failing = dir.file("bad.scenario");
    auto malformed = dir.file("broken.scenario");
    REQUIRE(run_cmd("keygen --out " + key.string()).exit_code == 0);

    write_text(good,
               "message 0 the quick brown fox\n"
               "deliver 0 accept\n"
               "replay 0 replay-detected\n"
               "delay +30\n"
               "replay 0 invalid-mac\n"
               "forge 1 invalid-mac\n"
               "deliver 1 accept\n");
    auto ok = run_cmd("demo scenario --key " + key.string() + " --file " + good.string());
    CHECK(ok.exit_code == 0);
    CHECK(ok.out.find("PASS") != std::string::npos);
    CHECK(ok.out.find("Accept") != std::string::npos);
    CHECK(ok.out.find("ReplayDetected") != std::string::npos);

    write_text(failing, "deliver 0 replay-detected\n");
    auto mismatch = run_cmd("demo scenario --key " + key.string() + " --file " + failing.string());
    CHECK(mismatch.exit_code == 1);
    CHECK(mismatch.out.find("FAIL") != std::string::npos);

    write_text(malformed, "detonate 0\n");
    auto bad = run_cmd("demo scenario --key " + key.string() + " --file " + malformed.string(),
                       true);
    CHECK(bad.exit_code == 18);
    CHECK(bad.out.find("MalformedScenario") != std::string::npos);

    auto missing = run_cmd("demo scenario --key " + dir.file("no.key").string() + " --file " +
                           good.string(), true);
    CHECK(missing.exit_code == 19);
}

TEST_CASE("cli: usage errors exit nonzero") {
    CHECK(run_cmd("").exit_code != 0);
    CHECK(run_cmd("sign").exit_code != 0);
    CHECK(run_cmd("no-such-command").exit_code != 0);
}
