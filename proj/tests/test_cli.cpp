// End-to-end tests for the command-line front end.  Each case spawns the
// installed binary (path in $BOXATOM_CLI) exactly as a user would and checks
// stdout, stderr, exit codes, and the files it writes.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

namespace fs = std::filesystem;

namespace {

fs::path work_dir(const std::string& name) {
  fs::path dir = fs::temp_directory_path() / "boxatom_cli" / name;
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

std::string slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE(in.good());
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void spit(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  REQUIRE(out.good());
  out << text;
}

struct CliResult {
  int exit_code = -1;
  std::string out;
  std::string err;
};

CliResult run_cli(const std::string& args) {
  const char* exe = std::getenv("BOXATOM_CLI");
  REQUIRE(exe != nullptr);
  const fs::path dir = fs::temp_directory_path() / "boxatom_cli";
  fs::create_directories(dir);
  const fs::path out_file = dir / "stdout.txt";
  const fs::path err_file = dir / "stderr.txt";
  const std::string cmd = std::string("\"") + exe + "\" " + args + " > \"" +
                          out_file.string() + "\" 2> \"" + err_file.string() +
                          "\"";
  const int raw = std::system(cmd.c_str());
  CliResult result;
  result.exit_code = (raw != -1 && WIFEXITED(raw)) ? WEXITSTATUS(raw) : -1;
  result.out = slurp(out_file);
  result.err = slurp(err_file);
  return result;
}

// "key = value" lines whose key carries no spaces (orbital rows are skipped).
std::map<std::string, std::string> parse_kv(const std::string& text) {
  std::map<std::string, std::string> kv;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    const auto pos = line.find(" = ");
    if (pos == std::string::npos) continue;
    const std::string key = line.substr(0, pos);
    if (key.find(' ') != std::string::npos) continue;
    kv[key] = line.substr(pos + 3);
  }
  return kv;
}

double num(const std::map<std::string, std::string>& kv,
           const std::string& key) {
  REQUIRE(kv.count(key) == 1);
  return std::stod(kv.at(key));
}

// Parse a profile CSV written by the density/potentials subcommands:
// '#' comments, one header line, then numeric rows.
struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;
};

Table read_table(const fs::path& path) {
  Table table;
  std::ifstream in(path, std::ios::binary);
  REQUIRE(in.good());
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::vector<std::string> cells;
    std::stringstream row(line);
    std::string cell;
    while (std::getline(row, cell, ',')) cells.push_back(cell);
    if (table.columns.empty()) {
      table.columns = cells;
      continue;
    }
    std::vector<double> values;
    values.reserve(cells.size());
    for (const std::string& c : cells) values.push_back(std::stod(c));
    table.rows.push_back(std::move(values));
  }
  return table;
}

}  // namespace

TEST_CASE("run prints a self-consistent energy decomposition") {
  CliResult r =
      run_cli("run --Z 2 --term 1s2_1S --mode x_only --rc 1 --n-r 200");
  REQUIRE(r.exit_code == 0);
  auto kv = parse_kv(r.out);

  CHECK(num(kv, "E_total") == doctest::Approx(1.06121).epsilon(1e-3));
  CHECK(num(kv, "E_total") ==
        doctest::Approx(num(kv, "T") + num(kv, "V_en") + num(kv, "V_ee"))
            .scale(1.0)
            .epsilon(1e-8));
  CHECK(num(kv, "V_ee") ==
        doctest::Approx(num(kv, "E_H") + num(kv, "E_x") + num(kv, "E_c"))
            .scale(1.0)
            .epsilon(1e-8));
  CHECK(num(kv, "E_c") == 0.0);
  CHECK(num(kv, "m_1") == doctest::Approx(0.883).epsilon(5e-3));
  CHECK(num(kv, "m_minus1") == doctest::Approx(5.934).epsilon(5e-3));
  CHECK(num(kv, "iterations") > 0);
  CHECK(r.out.find("orbital 1s up occ 1 eps ") != std::string::npos);
  CHECK(r.out.find("orbital 1s down occ 1 eps ") != std::string::npos);

  // 'inf' selects the free atom
  CliResult free_atom =
      run_cli("run --Z 2 --term 1s2_1S --mode x_only --rc inf --n-r 200");
  REQUIRE(free_atom.exit_code == 0);
  auto free_kv = parse_kv(free_atom.out);
  CHECK(num(free_kv, "E_total") == doctest::Approx(-2.86164).epsilon(1e-3));
}

TEST_CASE("density and potentials write profile tables") {
  const fs::path dir = work_dir("profiles");
  CliResult d = run_cli("density --Z 2 --term 1s2_1S --rc 1 --n-r 200 "
                        "--samples 101 --out \"" +
                        dir.string() + "\"");
  REQUIRE(d.exit_code == 0);
  const fs::path density_path = dir / "density_1s2_1S_x_only_rc1.csv";
  CHECK(d.out.find(density_path.string()) != std::string::npos);
  REQUIRE(fs::exists(density_path));

  Table density = read_table(density_path);
  REQUIRE(density.columns ==
          std::vector<std::string>{"r", "D_total", "u2_1s_up", "u2_1s_down"});
  REQUIRE(density.rows.size() == 101);
  CHECK(density.rows.front()[0] == 0.0);
  CHECK(density.rows.front()[1] == 0.0);  // D(0) = 0
  CHECK(density.rows.back()[0] == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(density.rows.back()[1] ==
        doctest::Approx(0.0).scale(1.0).epsilon(1e-8));  // wall node
  double integral = 0.0;
  for (size_t i = 1; i < density.rows.size(); ++i)
    integral += 0.5 * (density.rows[i][1] + density.rows[i - 1][1]) *
                (density.rows[i][0] - density.rows[i - 1][0]);
  CHECK(integral == doctest::Approx(2.0).epsilon(5e-3));  // two electrons

  CliResult p = run_cli("potentials --Z 2 --term 1s2_1S --rc 1 --n-r 200 "
                        "--samples 101 --out \"" +
                        dir.string() + "\"");
  REQUIRE(p.exit_code == 0);
  const fs::path potentials_path = dir / "potentials_1s2_1S_x_only_rc1.csv";
  REQUIRE(fs::exists(potentials_path));

  Table potentials = read_table(potentials_path);
  REQUIRE(potentials.columns ==
          std::vector<std::string>{"r", "v_H", "v_x_up", "v_x_down", "v_c_up",
                                   "v_c_down"});
  REQUIRE(potentials.rows.size() == 101);
  const std::vector<double>& wall = potentials.rows.back();
  CHECK(wall[1] == doctest::Approx(2.0).epsilon(1e-7));   // v_H(r_c) = N/r_c
  CHECK(wall[2] == doctest::Approx(-1.0).epsilon(1e-9));  // v_x(r_c) = -1/r_c
  CHECK(wall[3] == doctest::Approx(wall[2]).epsilon(1e-12));
  for (const auto& row : potentials.rows) {
    CHECK(row[4] == 0.0);  // no correlation in exchange-only mode
    CHECK(row[5] == 0.0);
  }
}

TEST_CASE("scan executes a job file and grades it") {
  const fs::path dir = work_dir("scan");
  const fs::path ref = dir / "reference.csv";
  spit(ref,
       "Z,term,mode,r_c,E_total,tol\n"
       "2,1s2_1S,x_only,1,1.06121,2e-3\n");
  const fs::path cfg = dir / "job.ini";
  spit(cfg, "[system]\nZ = 2\nN = 2\nterm = 1s2_1S\n"
            "[grid]\nn_r = 200\n"
            "[run]\nmode = x_only\nrc = 1\nreference = " +
                ref.string() + "\n");

  const fs::path out = dir / "out";
  CliResult r = run_cli("scan --config \"" + cfg.string() + "\" --out \"" +
                        out.string() + "\"");
  CHECK(r.exit_code == 0);
  CHECK(r.out.find("verdict = pass") != std::string::npos);
  CHECK(r.out.find("comparison = ") != std::string::npos);
  CHECK(r.out.find(",pass") != std::string::npos);  // comparison rows echoed
  CHECK(fs::exists(out / "scan_summary.csv"));
  CHECK(fs::exists(out / "comparison.csv"));
  CHECK(fs::exists(out / "1s2_1S_x_only_rc1.csv"));

  // an impossibly tight override flips the verdict to exit code 2
  CliResult tight = run_cli("scan --config \"" + cfg.string() + "\" --out \"" +
                            out.string() + "\" --tolerance 1e-9");
  CHECK(tight.exit_code == 2);
  CHECK(tight.out.find("verdict = tolerance failure") != std::string::npos);
  CHECK(tight.out.find(",fail") != std::string::npos);
}

TEST_CASE("scan reports runtime failures with exit code 1") {
  const fs::path dir = work_dir("scan_fail");
  const fs::path cfg = dir / "job.ini";
  spit(cfg, "[system]\nZ = 2\nN = 2\nterm = 1s2_1S\n"
            "[grid]\nn_r = 200\n"
            "[run]\nmode = x_only\nrc = 0.04\n");
  CliResult r = run_cli("scan --config \"" + cfg.string() + "\" --out \"" +
                        dir.string() + "\"");
  CHECK(r.exit_code == 1);
  CHECK(r.out.find("verdict = runtime failure") != std::string::npos);
  CHECK(slurp(dir / "scan_summary.csv").find(",FAILED,") != std::string::npos);

  CliResult missing = run_cli("scan --config \"" +
                              (dir / "absent.ini").string() + "\"");
  CHECK(missing.exit_code == 1);
  CHECK(missing.err.find("cannot open config") != std::string::npos);
}

TEST_CASE("compare grades an existing summary without re-solving") {
  const fs::path dir = work_dir("compare");
  const fs::path summary = dir / "scan_summary.csv";
  spit(summary,
       "Z,term,mode,r_c,status,E_total,T,V_en,E_H,E_x,E_c,V_ee,"
       "eigenvalue_sum,iterations\n"
       "2,1s2_1S,x_only,1,ok,1.06121,0,0,0,0,0,0,0,5\n");
  const fs::path ref = dir / "reference.csv";
  spit(ref,
       "Z,term,mode,r_c,E_total,tol\n"
       "2,1s2_1S,x_only,1,1.0612,2e-3\n");

  CliResult r = run_cli("compare \"" + summary.string() + "\" \"" +
                        ref.string() + "\"");
  CHECK(r.exit_code == 0);
  CHECK(r.out.find("r_c,computed,reference") == 0);
  CHECK(r.out.find(",pass") != std::string::npos);

  CliResult tight = run_cli("compare \"" + summary.string() + "\" \"" +
                            ref.string() + "\" --tolerance 1e-9");
  CHECK(tight.exit_code == 2);
  CHECK(tight.out.find(",fail") != std::string::npos);

  CliResult missing = run_cli("compare \"" + (dir / "absent.csv").string() +
                              "\" \"" + ref.string() + "\"");
  CHECK(missing.exit_code == 1);
  CHECK(missing.err.find("cannot open") != std::string::npos);
}

TEST_CASE("usage errors exit nonzero and explain themselves") {
  CliResult bare = run_cli("");
  CHECK(bare.exit_code != 0);

  CliResult missing_flag = run_cli("run --Z 2 --rc 1");
  CHECK(missing_flag.exit_code != 0);
  CHECK(missing_flag.err.find("--term") != std::string::npos);

  CliResult bad_radius = run_cli("run --Z 2 --term 1s2_1S --rc tiny");
  CHECK(bad_radius.exit_code == 1);
  CHECK(bad_radius.err.find("--rc") != std::string::npos);

  CliResult bad_mode =
      run_cli("run --Z 2 --term 1s2_1S --rc 1 --mode hartree_fock");
  CHECK(bad_mode.exit_code == 1);
  CHECK(bad_mode.err.find("hartree_fock") != std::string::npos);

  CliResult bad_label = run_cli("run --Z 2 --term 1s9q_1S --rc 1");
  CHECK(bad_label.exit_code == 1);
  CHECK(bad_label.err.find("1s9q") != std::string::npos);
}
