#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <sys/wait.h>

namespace fs = std::filesystem;

namespace {

const fs::path kWork = fs::path(UWSN_TEST_WORKDIR) / "cli";

int uwsn(const std::string& args) {
  const std::string cmd = std::string("\"") + UWSN_CLI_PATH + "\" " + args + " >\"" + (kWork / "stdout.txt").string() +
                          "\" 2>\"" + (kWork / "stderr.txt").string() + "\"";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

fs::path write_file(const std::string& name, const std::string& text) {
  fs::create_directories(kWork);
  const fs::path p = kWork / name;
  std::ofstream(p) << text;
  return p;
}

std::string first_data_line(const fs::path& csv) {
  std::istringstream in(slurp(csv));
  std::string line;
  std::getline(in, line);  // hash comment
  std::getline(in, line);
  return line;
}

}  // namespace

TEST_SUITE("cli") {
  TEST_CASE("validate accepts good files and rejects bad ones with exit 2") {
    auto good = write_file("good.scn", "[data]\nf_k = 6\nf_d = 3\n");
    CHECK(uwsn("validate \"" + good.string() + "\"") == 0);
    CHECK(slurp(kWork / "stdout.txt").rfind("ok ", 0) == 0);

    auto bad = write_file("bad.scn", "[data]\nf_k = 4\nf_d = 5\n");
    CHECK(uwsn("validate \"" + bad.string() + "\"") == 2);
    CHECK(slurp(kWork / "stderr.txt").find("f_d") != std::string::npos);

    auto typo = write_file("typo.scn", "[data]\nf_k = four\n");
    CHECK(uwsn("validate \"" + typo.string() + "\"") == 2);
    CHECK(slurp(kWork / "stderr.txt").find("line 2") != std::string::npos);

    CHECK(uwsn("run --no-such-flag x") != 0);
    CHECK(uwsn("validate \"" + good.string() + "\" --set data.f_d=9") == 2);
  }

  TEST_CASE("run writes identical bytes on repeat") {
    auto scn = write_file("small.scn", "[topology]\nside = 6\n[run]\nseeds = 1..4\n");
    const fs::path a = kWork / "run_a", b = kWork / "run_b";
    fs::remove_all(a);
    fs::remove_all(b);
    REQUIRE(uwsn("run \"" + scn.string() + "\" --out \"" + a.string() + "\" --detail 1") == 0);
    REQUIRE(uwsn("run \"" + scn.string() + "\" --out \"" + b.string() + "\" --detail 1 --jobs 3") == 0);
    std::size_t files = 0;
    for (const auto& entry : fs::directory_iterator(a)) {
      ++files;
      CHECK_MESSAGE(slurp(entry.path()) == slurp(b / entry.path().filename()), entry.path().filename().string());
    }
    CHECK(files >= 5);
    CHECK(fs::exists(a / "events_seed1.csv"));
    CHECK(slurp(a / "runs.csv").rfind("# config_hash=", 0) == 0);
  }

  TEST_CASE("preset output schema") {
    const fs::path out = kWork / "fig1a";
    fs::remove_all(out);
    REQUIRE(uwsn("preset fig1a --seeds 2 --out \"" + out.string() + "\"") == 0);
    CHECK(first_data_line(out / "fig1a.csv") == "dfk,attackers,seizure_pct");
    CHECK(uwsn("preset --list") == 0);
    CHECK(slurp(kWork / "stdout.txt").find("fig5c") != std::string::npos);
    CHECK(uwsn("preset fig99") != 0);
  }

  TEST_CASE("topo and routes dumps") {
    const fs::path out = kWork / "dumps";
    fs::remove_all(out);
    REQUIRE(uwsn("topo --out \"" + (out / "topo").string() + "\"") == 0);
    REQUIRE(uwsn("routes --origin 0 --out \"" + (out / "routes").string() + "\"") == 0);
    std::size_t csvs = 0;
    for (const auto& entry : fs::recursive_directory_iterator(out)) csvs += entry.path().extension() == ".csv";
    CHECK(csvs >= 4);
  }
}
