#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>
#include <vector>

#include "test_support.hpp"

using testsup::check_close;

namespace {

namespace fs = std::filesystem;

struct ProcessResult {
  int exit_code;
  std::string out;
  std::string err;
};

std::string slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

fs::path scratch_dir() {
  const auto dir = fs::temp_directory_path() / "pairinfo_cli_test";
  fs::create_directories(dir);
  return dir;
}

ProcessResult run_cli(const std::string& args) {
  const auto dir = scratch_dir();
  const auto out_file = dir / "stdout.txt";
  const auto err_file = dir / "stderr.txt";
  const std::string command = std::string(PAIRINFO_CLI_PATH) + " " + args + " >" +
                              out_file.string() + " 2>" + err_file.string();
  const int status = std::system(command.c_str());
  const int exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return {exit_code, slurp(out_file), slurp(err_file)};
}

fs::path write_config(const std::string& name, const std::string& body) {
  const auto path = scratch_dir() / name;
  std::ofstream out(path);
  out << body;
  return path;
}

std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> parts;
  std::string current;
  for (char c : text) {
    if (c == sep) {
      parts.push_back(current);
      current.clear();
    } else {
      current.push_back(c);
    }
  }
  parts.push_back(current);
  return parts;
}

}  // namespace

TEST_CASE("eval of the fibre-array scenario") {
  const auto config = write_config("fibre.cfg",
                                   "source = poissonian\n"
                                   "mean_pairs = 0.1\n"
                                   "detector_efficiency = 0.4\n"
                                   "dark_rate = 300\n"
                                   "bin_width = 1e-9\n"
                                   "outcome_count = 8\n");
  const auto result = run_cli("eval --config " + config.string() + " --csv");
  REQUIRE(result.exit_code == 0);
  const auto lines = split(result.out, '\n');
  REQUIRE(lines.size() >= 2);
  CHECK(lines[0] ==
        "source,mean_pairs,eta,dark_q,outcome_count,mutual_info_bits,"
        "info_per_generated_bits,info_per_detected_bits,key_bits");
  const auto fields = split(lines[1], ',');
  REQUIRE(fields.size() == 9);
  CHECK(fields[0] == "poissonian");
  CHECK(std::stod(fields[3]) == 3e-7);  // q from 300/s x 1 ns
  CHECK(fields[4] == "8");
  const double h = std::stod(fields[5]);
  const double key_bits = std::stod(fields[8]);
  check_close(key_bits, 8.0 * h, 1e-12);
}

TEST_CASE("eval emits both human and machine form by default") {
  const auto config = write_config("plain.cfg",
                                   "source = poissonian\nmean_pairs = 0.693147\n");
  const auto result = run_cli("eval --config " + config.string());
  CHECK(result.exit_code == 0);
  CHECK(result.out.find("H(A:B)") != std::string::npos);
  CHECK(result.out.find("source,mean_pairs,") != std::string::npos);
}

TEST_CASE("eval of a perfect link at the entropy maximum") {
  const auto config = write_config("perfect.cfg",
                                   "source = poissonian\n"
                                   "mean_pairs = 0.6931471805599453\n"
                                   "detector_efficiency = 1\n"
                                   "transmission_efficiency = 1\n"
                                   "dark_rate = 0\n"
                                   "outcome_count = 5\n");
  const auto result = run_cli("eval --config " + config.string() + " --csv");
  REQUIRE(result.exit_code == 0);
  const auto fields = split(split(result.out, '\n')[1], ',');
  REQUIRE(fields.size() == 9);
  const double h = std::stod(fields[5]);
  check_close(h, 1.0, 0.0, 1e-12);
  check_close(std::stod(fields[8]), 5.0 * h, 0.0, 1e-12);
}

TEST_CASE("eval config validation failures exit 2 and name the field") {
  const auto config = write_config("bad_eta.cfg",
                                   "source = poissonian\n"
                                   "mean_pairs = 1\n"
                                   "detector_efficiency = 1.2\n");
  const auto result = run_cli("eval --config " + config.string());
  CHECK(result.exit_code == 2);
  CHECK(result.err.find("detector_efficiency") != std::string::npos);
  CHECK(result.err.find("line 3") != std::string::npos);

  CHECK(run_cli("eval --config /nonexistent/x.cfg").exit_code == 2);
  CHECK(run_cli("eval").exit_code == 2);
}

TEST_CASE("eval domain failures exit 1") {
  // lambda = 0 has no per-generated-pair figure
  const auto config =
      write_config("vacuum.cfg", "source = poissonian\nmean_pairs = 0\n");
  const auto result = run_cli("eval --config " + config.string());
  CHECK(result.exit_code == 1);
  CHECK(result.err.find("lambda") != std::string::npos);
}

TEST_CASE("optimize command") {
  const auto config = write_config("opt.cfg",
                                   "source = poissonian\n"
                                   "mean_pairs = 1\n"
                                   "objective = H\n");
  const auto result = run_cli("optimize --config " + config.string() + " --csv");
  REQUIRE(result.exit_code == 0);
  const auto lines = split(result.out, '\n');
  REQUIRE(lines.size() >= 2);
  CHECK(lines[0] == "objective,eta,dark_q,lambda_star,objective_value,iterations");
  const auto fields = split(lines[1], ',');
  REQUIRE(fields.size() == 6);
  CHECK(fields[0] == "H");
  check_close(std::stod(fields[3]), std::log(2.0), 0.0, 1e-5);
  check_close(std::stod(fields[4]), 1.0, 0.0, 1e-9);

  SUBCASE("objective flag overrides the config") {
    const auto ig = run_cli("optimize --config " + config.string() +
                            " --objective Ig --csv");
    CHECK(ig.exit_code == 0);
    CHECK(split(ig.out, '\n')[1].substr(0, 3) == "Ig,");
  }
  SUBCASE("headline per-generated figure through the CLI") {
    const auto headline = write_config("headline.cfg",
                                       "source = poissonian\n"
                                       "mean_pairs = 1\n"
                                       "detector_efficiency = 0.8\n"
                                       "dark_rate = 300\n"
                                       "bin_width = 130e-12\n");
    const auto res = run_cli("optimize --config " + headline.string() +
                             " --objective Ig --csv");
    REQUIRE(res.exit_code == 0);
    CHECK(std::stod(split(split(res.out, '\n')[1], ',')[4]) > 13.0);
  }
  SUBCASE("thermal sources optimize through the same path") {
    const auto thermal = write_config(
        "thermal.cfg", "source = thermal\nmean_pairs = 2\nobjective = H\n");
    const auto res = run_cli("optimize --config " + thermal.string() + " --csv");
    REQUIRE(res.exit_code == 0);
    // H = H2(1/(1+lambda)) peaks at lambda = 1 on a lossless link
    check_close(std::stod(split(split(res.out, '\n')[1], ',')[3]), 1.0, 0.0, 1e-4);
    check_close(std::stod(split(split(res.out, '\n')[1], ',')[4]), 1.0, 0.0, 1e-9);
  }
  SUBCASE("unknown objective is a usage error") {
    CHECK(run_cli("optimize --config " + config.string() + " --objective Iq")
              .exit_code == 2);
  }
  SUBCASE("empirical sources cannot be optimized") {
    const auto probs = scratch_dir() / "opt_probs.txt";
    {
      std::ofstream out(probs);
      out << "0.5\n0.5\n";
    }
    const auto empirical = write_config(
        "opt_empirical.cfg", "source = empirical\nprobability_file = opt_probs.txt\n");
    const auto res = run_cli("optimize --config " + empirical.string());
    CHECK(res.exit_code == 1);
    CHECK(res.err.find("empirical") != std::string::npos);
  }
  SUBCASE("inverted bracket exits 1") {
    CHECK(run_cli("optimize --config " + config.string() +
                  " --log10-min 2 --log10-max -2")
              .exit_code == 1);
  }
}

TEST_CASE("figure command") {
  const auto dir = scratch_dir();
  const auto fig1 = (dir / "fig1.csv").string();

  SUBCASE("fig1 format and determinism") {
    REQUIRE(run_cli("figure fig1 --output " + fig1).exit_code == 0);
    const std::string first = slurp(fig1);
    const auto lines = split(first, '\n');
    REQUIRE(lines.size() == 202);  // header + 200 rows + trailing newline
    CHECK(lines[0] == "lambda,H_eta0.8,H_eta0.7,H_eta0.6");
    CHECK(lines[201].empty());
    CHECK(first.find('\r') == std::string::npos);
    const auto row = split(lines[1], ',');
    REQUIRE(row.size() == 4);
    check_close(std::stod(row[0]), 1e-3, 1e-12);
    // every field parses as a finite double
    for (std::size_t i = 1; i + 1 < lines.size(); ++i) {
      for (const auto& field : split(lines[i], ',')) {
        CHECK(std::isfinite(std::stod(field)));
      }
    }
    REQUIRE(run_cli("figure fig1 --output " + fig1).exit_code == 0);
    CHECK(slurp(fig1) == first);  // byte-identical rerun
  }

  SUBCASE("fig2b reaches more than 13 bits per generated pair") {
    const auto path = (dir / "fig2b.csv").string();
    REQUIRE(run_cli("figure fig2b --output " + path).exit_code == 0);
    const auto lines = split(slurp(path), '\n');
    CHECK(lines[0] == "lambda,Ig_eta0.8,Ig_eta0.6");
    double best = 0.0;
    for (std::size_t i = 1; i + 1 < lines.size(); ++i) {
      best = std::max(best, std::stod(split(lines[i], ',')[1]));
    }
    CHECK(best > 13.0);
  }

  SUBCASE("lambda range override is honored") {
    const auto path = (dir / "fig1_window.csv").string();
    REQUIRE(run_cli("figure fig1 --output " + path +
                    " --lambda-min 0.1 --lambda-max 1")
                .exit_code == 0);
    const auto lines = split(slurp(path), '\n');
    check_close(std::stod(split(lines[1], ',')[0]), 0.1, 1e-12);
    check_close(std::stod(split(lines[200], ',')[0]), 1.0, 1e-12);
  }

  SUBCASE("fig5 output is independent of the job count") {
    const auto serial = (dir / "fig5_serial.csv").string();
    const auto parallel = (dir / "fig5_parallel.csv").string();
    REQUIRE(run_cli("figure fig5 --output " + serial).exit_code == 0);
    REQUIRE(run_cli("figure fig5 --output " + parallel + " --jobs 4").exit_code == 0);
    const std::string serial_bytes = slurp(serial);
    CHECK(serial_bytes == slurp(parallel));
    const auto lines = split(serial_bytes, '\n');
    CHECK(lines[0] == "eta,Ig_opt,Id_opt");
    CHECK(lines.size() == 98);  // header + 96 grid points + trailing newline
  }

  SUBCASE("errors") {
    CHECK(run_cli("figure nosuch --output " + fig1).exit_code == 2);
    CHECK(run_cli("figure fig1 --output /nonexistent-dir/f.csv").exit_code == 1);
    CHECK(run_cli("figure fig1").exit_code == 2);  // --output required
  }
}

TEST_CASE("verify command") {
  const auto pass = run_cli("verify --trials 50000 --seed 7");
  CHECK(pass.exit_code == 0);
  CHECK(pass.out.find("all checks passed") != std::string::npos);

  const auto again = run_cli("verify --trials 50000 --seed 7");
  CHECK(again.out == pass.out);  // byte-identical for a fixed seed

  const auto parallel = run_cli("verify --trials 50000 --seed 7 --jobs 3");
  CHECK(parallel.out == pass.out);  // and independent of the job count

  const auto corrupted = run_cli("verify --trials 50000 --seed 7 --tolerance 0");
  CHECK(corrupted.exit_code == 3);
  CHECK(corrupted.out.find("[FAIL]") != std::string::npos);
}

TEST_CASE("usage errors") {
  CHECK(run_cli("").exit_code == 2);
  CHECK(run_cli("frobnicate").exit_code == 2);
  CHECK(run_cli("--help").exit_code == 0);
}
