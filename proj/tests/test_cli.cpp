#include <doctest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "lisim/metrics.hpp"
#include "lisim/param_file.hpp"
#include "lisim/trajectory.hpp"

namespace fs = std::filesystem;

namespace {

const fs::path& workdir() {
  static const fs::path dir = [] {
    fs::path d = fs::temp_directory_path() / "lisim_test_cli";
    fs::remove_all(d);
    fs::create_directories(d);
    return d;
  }();
  return dir;
}

int run(const std::string& args) {
  const std::string cmd = std::string("\"") + LISIM_CLI + "\" " + args + " > \"" +
                          (workdir() / "stdout.txt").string() + "\" 2> \"" +
                          (workdir() / "stderr.txt").string() + "\"";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const fs::path& f) {
  std::ifstream in(f);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST_CASE("usage errors exit with 2") {
  CHECK(run("") == 2);
  CHECK(run("simulate --scenario cc_1c") == 2);
  CHECK(run("simulate --params ncm523 --scenario cc_1c --soc0 0.5 --ocv0 3.7") == 2);
  CHECK(run("simulate --params /nonexistent/cell.yaml --scenario cc_1c") == 2);
  CHECK(run("simulate --params ncm523 --scenario no_such_scenario") == 2);
  CHECK(run("simulate --params ncm523 --scenario cc_1c --jn-mode sideways") == 2);
  CHECK(run("simulate --params ncm523 --scenario cc_1c --soc0 1.5") == 2);
  CHECK(run("warp") == 2);
  CHECK(!slurp(workdir() / "stderr.txt").empty());
}

TEST_CASE("simulate writes a trajectory") {
  const fs::path out = workdir() / "sim.csv";
  REQUIRE(run("simulate --params ncm523 --scenario cc_2c --out " + out.string()) == 0);
  const lisim::Trajectory t = lisim::read_trajectory_csv(out);
  CHECK(t.model == "reduced");
  CHECK(t.stop_reason == "v_min");
  REQUIRE(t.records.size() > 10);
  for (std::size_t k = 1; k < t.records.size(); ++k) CHECK(t.records[k].t > t.records[k - 1].t);
  CHECK(t.records.back().V <= lisim::preset("ncm523").operating.v_min);
  const std::string head = slurp(out);
  for (const char* lbl : {"ce_neg_x1", "ce_neg_x4", "ce_pos_x1", "ce_pos_x4", "jn_pos_x2", "flags"}) {
    CHECK(head.find(lbl) != std::string::npos);
  }

  SUBCASE("compare against itself is perfect") {
    const fs::path rep = workdir() / "metrics.csv";
    REQUIRE(run("compare --reference " + out.string() + " --estimate " + out.string() +
                " --fields V,css --params ncm523 --out " + rep.string()) == 0);
    std::ifstream in(rep);
    std::string line;
    std::getline(in, line);
    CHECK(line == "field,position,R2,RMSE,MAE");
    int rows = 0;
    while (std::getline(in, line)) {
      ++rows;
      std::stringstream ss(line);
      std::string field, pos, r2, rmse, mae;
      std::getline(ss, field, ',');
      std::getline(ss, pos, ',');
      std::getline(ss, r2, ',');
      std::getline(ss, rmse, ',');
      std::getline(ss, mae, ',');
      CHECK(std::stod(r2) == 1.0);
      CHECK(std::stod(rmse) == 0.0);
      CHECK(std::stod(mae) == 0.0);
    }
    CHECK(rows == 1 + 8);
  }

  SUBCASE("output is deterministic") {
    const fs::path again = workdir() / "sim2.csv";
    REQUIRE(run("simulate --params ncm523 --scenario cc_2c --out " + again.string()) == 0);
    CHECK(slurp(again) == slurp(out));
  }
}

TEST_CASE("p2d runs through the same front end") {
  const fs::path out = workdir() / "p2d.csv";
  REQUIRE(run("p2d --params lfpo --scenario rc --mesh 12,6,12,8 --out " + out.string()) == 0);
  const lisim::Trajectory t = lisim::read_trajectory_csv(out);
  CHECK(t.model == "p2d");
  CHECK(t.stop_reason == "completed");
  CHECK(run("p2d --params lfpo --scenario rc --mesh 12,6") == 2);
}

TEST_CASE("socv endpoints") {
  const fs::path out = workdir() / "socv.csv";
  REQUIRE(run("socv --params ncm811 --points 11 --out " + out.string()) == 0);
  std::ifstream in(out);
  std::string line;
  std::getline(in, line);
  CHECK(line == "SOC,OCV_V");
  std::vector<std::pair<double, double>> rows;
  while (std::getline(in, line)) {
    const auto comma = line.find(',');
    rows.emplace_back(std::stod(line.substr(0, comma)), std::stod(line.substr(comma + 1)));
  }
  REQUIRE(rows.size() == 11);
  const lisim::CellParameters p = lisim::preset("ncm811");
  CHECK(rows.front().first == 0.0);
  CHECK(std::abs(rows.front().second - p.operating.v_min) < 1e-6);
  CHECK(rows.back().first == 1.0);
  CHECK(std::abs(rows.back().second - p.operating.v_max) < 1e-6);
}
