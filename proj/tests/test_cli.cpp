#include <gtest/gtest.h>
#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <random>

#include "imprint/detail/text.hpp"
#include "imprint/joint_table.hpp"
#include "test_support.hpp"

namespace imprint {
namespace {

namespace fs = std::filesystem;

const std::string kBinary = IMPRINT_BINARY;
const std::string kData = IMPRINT_TEST_DATA;

struct Run {
  int exit_code = -1;
  std::string out;
  std::string err;
};

std::string scratch(const std::string& name) { return (fs::path(::testing::TempDir()) / ("imprint_cli_" + name)).string(); }

Run run(const std::string& args) {
  const auto out = scratch("stdout"), err = scratch("stderr");
  const std::string cmd = "'" + kBinary + "' " + args + " > '" + out + "' 2> '" + err + "'";
  const int status = std::system(cmd.c_str());
  Run r;
  r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  r.out = detail::read_file(out);
  r.err = detail::read_file(err);
  return r;
}

std::string last_line(const std::string& text) {
  auto end = text.find_last_not_of('\n');
  auto start = text.rfind('\n', end);
  return text.substr(start == std::string::npos ? 0 : start + 1, end - (start == std::string::npos ? 0 : start + 1) + 1);
}

TEST(CliMeasures, XorTable) {
  const auto r = run("measures '" + kData + "/xor_table.json'");
  EXPECT_EQ(r.exit_code, 0) << r.err;
  EXPECT_NE(r.out.find("\"mu_star\": -1.0"), std::string::npos) << r.out;
  EXPECT_NE(r.out.find("\"i\": 1.0"), std::string::npos) << r.out;
  EXPECT_EQ(r.out, detail::read_file(kData + "/golden/cli/measures_xor.json"));
}

TEST(CliMeasures, IndependentTableIsAllZero) {
  const auto path = scratch("indep.json");
  detail::write_file_atomic(path, to_json(testing::independent_uniform()));
  const auto csv = scratch("indep.csv");
  const auto r = run("measures '" + path + "' --csv '" + csv + "'");
  EXPECT_EQ(r.exit_code, 0) << r.err;
  const auto text = detail::read_file(csv);
  for (const char* row : {"\nmu_star,0.000000\n", "\ni,0.000000\n", "\nr,0.000000\n"}) {
    EXPECT_NE(text.find(row), std::string::npos) << row << text;
  }
}

TEST(CliMeasures, MalformedInputExitsOne) {
  const auto path = scratch("bad.json");
  detail::write_file_atomic(path, "{\"axes\": [");
  const auto r = run("measures '" + path + "'");
  EXPECT_EQ(r.exit_code, 1);
  EXPECT_NE(r.err.find("error"), std::string::npos);
  EXPECT_EQ(run("measures '" + scratch("missing.json") + "'").exit_code, 1);
  EXPECT_EQ(run("measures").exit_code, 1);
}

TEST(CliMeasures, NonConvergedExitsTwoButStillReports) {
  std::mt19937_64 rng(127);
  const auto path = scratch("rand.json");
  detail::write_file_atomic(path, to_json(testing::random_table(rng, {3, 3, 3})));
  const auto r = run("measures '" + path + "' --max_iterations 1");
  EXPECT_EQ(r.exit_code, 2);
  EXPECT_NE(r.out.find("\"converged\": false"), std::string::npos) << r.out;
}

TEST(CliIpf, FitsAndWritesTable) {
  const auto out = scratch("fit.json");
  const auto r = run("ipf '" + kData + "/xor_table.json' --margins 'X,Y;X,Z;Y,Z' --out '" + out + "'");
  EXPECT_EQ(r.exit_code, 0) << r.err;
  const auto fitted = joint_table_from_json(detail::read_file(out));
  for (double p : fitted.cells()) EXPECT_NEAR(p, 0.125, 1e-15);
  EXPECT_EQ(run("ipf '" + kData + "/xor_table.json' --margins 'X,Y'").exit_code, 1);
}

TEST(CliIngestAndFactor, RoundTripThroughFiles) {
  const auto matrix = scratch("matrix.csv"), loadings = scratch("loadings.csv"), table = scratch("binned.json");
  auto r = run("ingest '" + kData + "/corpus20.txt' --kind words --kind authors --out '" + matrix + "'");
  ASSERT_EQ(r.exit_code, 0) << r.err;
  EXPECT_EQ(detail::read_file(matrix).rfind("case,", 0), 0u);

  r = run("factor '" + matrix + "' --out '" + loadings + "' --table '" + table + "'");
  ASSERT_EQ(r.exit_code, 0) << r.err;
  EXPECT_EQ(detail::read_file(loadings).rfind("variable,factor1,factor2,factor3\n", 0), 0u);
  const auto t = joint_table_from_json(detail::read_file(table));
  EXPECT_EQ(t.shape(), (std::vector<std::size_t>{10, 10, 10}));

  EXPECT_EQ(run("ingest '" + kData + "/corpus20.txt' --kind journals").exit_code, 1);
  EXPECT_EQ(run("factor '" + matrix + "' --factors 2 --table '" + table + "'").exit_code, 1);
}

TEST(CliPipeline, ExitCodes) {
  const auto ok = scratch("pipe_ok");
  fs::remove_all(ok);
  auto r = run("pipeline --config '" + kData + "/corpus20.json' --output_dir '" + ok + "' --threads 2");
  EXPECT_EQ(r.exit_code, 2) << r.err;  // converges only to ~1e-6 on the sparse sets
  EXPECT_EQ(detail::read_file(ok + "/summary.csv"), detail::read_file(kData + "/golden/corpus20/summary.csv"));

  const auto partial = scratch("pipe_partial");
  fs::remove_all(partial);
  r = run("pipeline --config '" + kData + "/corpus20.json' --inputs '" + kData + "/corpus_sparse_authors.txt' --output_dir '" +
          partial + "' --chart false");
  EXPECT_EQ(r.exit_code, 3);
  EXPECT_FALSE(fs::exists(partial + "/chart.svg"));

  EXPECT_EQ(run("pipeline --config '" + kData + "/corpus20.json' --factors 2").exit_code, 1);
  EXPECT_EQ(run("pipeline --inputs '" + scratch("nope.txt") + "'").exit_code, 1);
}

TEST(CliDynamics, Examples) {
  auto r = run("dynamics --variant incursive --a 5 --x0 0.3 --steps 200");
  ASSERT_EQ(r.exit_code, 0) << r.err;
  EXPECT_EQ(r.out, detail::read_file(kData + "/golden/cli/dynamics_incursive.csv"));
  const auto final_row = last_line(r.out);
  const double final_x = std::stod(final_row.substr(final_row.find(',') + 1));
  EXPECT_NEAR(final_x, 0.8, 1e-9);
  EXPECT_NE(r.err.find("truncated=false"), std::string::npos) << r.err;

  r = run("dynamics --variant hyper_incursive --a 3 --x0 0.9 --steps 5 --seed 1");
  EXPECT_EQ(r.exit_code, 0) << r.err;
  EXPECT_NE(r.err.find("truncated=true"), std::string::npos) << r.err;

  r = run("dynamics --variant recursive --a 2 --x0 0.5 --steps 20");
  EXPECT_EQ(r.exit_code, 0);
  std::size_t rows = 0;
  for (std::size_t p = r.out.find('\n') + 1; p < r.out.size(); p = r.out.find('\n', p) + 1) {
    const auto line = r.out.substr(p, r.out.find('\n', p) - p);
    EXPECT_EQ(line.substr(line.find(',') + 1), "0.5,") << line;
    ++rows;
  }
  EXPECT_EQ(rows, 21u);
}

TEST(CliDynamics, SeededAndSweepOutputsArePinned) {
  auto r = run("dynamics --variant hyper_incursive --a 4.5 --x0 0.2 --steps 40 --seed 7");
  EXPECT_EQ(r.exit_code, 0) << r.err;
  EXPECT_EQ(r.out, detail::read_file(kData + "/golden/cli/dynamics_hyper_seed7.csv"));

  r = run("dynamics --variant recursive --a 3.7 --x0 0.2 --sweep 3.5:4:3 --steps 10");
  EXPECT_EQ(r.exit_code, 0) << r.err;
  EXPECT_EQ(r.out, detail::read_file(kData + "/golden/cli/dynamics_sweep.csv"));

  const auto out = scratch("traj.csv");
  r = run("dynamics --variant hyper_incursive --a 4 --x0 0.75 --steps 3 --decisions 110 --out '" + out + "'");
  EXPECT_EQ(r.exit_code, 0) << r.err;
  EXPECT_EQ(detail::read_file(out), "t,x,decision\n0,0.75,1\n1,0.75,1\n2,0.75,0\n3,0.25,\n");
}

TEST(CliDynamics, OutOfDomainExitsOneNamingThePrecondition) {
  auto r = run("dynamics --variant recursive --a 2 --x0 1.5 --steps 3");
  EXPECT_EQ(r.exit_code, 1);
  EXPECT_NE(r.err.find("x0 must lie in [0, 1]"), std::string::npos) << r.err;
  EXPECT_EQ(run("dynamics --variant incursive --a 0 --x0 0.5 --steps 3").exit_code, 1);
  EXPECT_EQ(run("dynamics --variant chaotic").exit_code, 1);
  EXPECT_EQ(run("dynamics --variant hyper_incursive --a 4 --x0 0.5 --steps 3 --decisions 12").exit_code, 1);
}

}  // namespace
}  // namespace imprint
