#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "cli.hpp"
#include "sfwg/mesh.hpp"

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run run(std::vector<std::string> args) {
  args.insert(args.begin(), "sfwg");
  std::ostringstream out, err;
  const int code = sfwg::cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

std::vector<std::string> lines(const std::string& s) {
  std::vector<std::string> out;
  std::istringstream in(s);
  for (std::string line; std::getline(in, line);) out.push_back(line);
  return out;
}

}  // namespace

TEST_CASE("converge") {
  const Run r = run({"converge", "--field", "sinsin", "--k", "1", "--j", "auto", "--levels", "2,4,8"});
  REQUIRE(r.code == 0);
  const auto l = lines(r.out);
  REQUIRE(l.size() == 5);
  CHECK(l[0] == "# field=sinsin k=1 j=2 (auto)");
  CHECK(l[1] == "level,h,dofs,energy_err,energy_rate,l2_err,l2_rate,cg_iters,residual");
  CHECK(l[2].rfind("2,0.5,", 0) == 0);
  CHECK(l[4].rfind("8,0.125,", 0) == 0);

  const Run md = run({"converge", "--levels", "2,4", "--format", "md", "--field", "bubble"});
  REQUIRE(md.code == 0);
  CHECK(md.out.find("| 1/4 ") != std::string::npos);

  const Run again = run({"converge", "--field", "sinsin", "--k", "1", "--j", "auto", "--levels", "2,4,8"});
  CHECK(again.out == r.out);
}

TEST_CASE("exit codes") {
  CHECK(run({"converge", "--levels", "8,4"}).code == sfwg::cli::kExitConfig);
  CHECK(run({"converge", "--k", "2", "--j", "1"}).code == sfwg::cli::kExitConfig);
  CHECK(run({"converge", "--j", "two"}).code == sfwg::cli::kExitConfig);
  CHECK(run({"converge", "--field", "cosh"}).code == sfwg::cli::kExitConfig);
  CHECK(run({"converge", "--generator", "pent"}).code == sfwg::cli::kExitConfig);
  CHECK(run({"converge", "--bogus"}).code == sfwg::cli::kExitUsage);
  CHECK(run({}).code == sfwg::cli::kExitUsage);
  CHECK(run({"probe"}).code == sfwg::cli::kExitUsage);
  CHECK(run({"probe", "--mesh", "gen:tri"}).code == sfwg::cli::kExitConfig);
  CHECK(run({"probe", "--mesh", "/nonexistent/mesh.txt"}).code == sfwg::cli::kExitConfig);
  CHECK(run({"converge", "--maxit", "1", "--levels", "4"}).code == sfwg::cli::kExitNumerical);
  CHECK(run({"--help"}).code == sfwg::cli::kExitOk);

  const Run bad = run({"converge", "--levels", "8,4"});
  CHECK(bad.out.empty());
  CHECK(bad.err.find("increasing") != std::string::npos);
}

TEST_CASE("probe") {
  const Run tri = run({"probe", "--mesh", "gen:tri:4", "--k", "1", "--j", "2"});
  REQUIRE(tri.code == 0);
  CHECK(tri.out.find("verdict: nonsingular\n") != std::string::npos);
  CHECK(tri.out.find("unknowns: 176\n") != std::string::npos);

  const Run quad = run({"probe", "--mesh", "gen:quad:5", "--k", "1", "--j", "1"});
  REQUIRE(quad.code == 0);
  CHECK(quad.out.find("counting_lower_bound: 5\n") != std::string::npos);
  CHECK(quad.out.find("nullity: 50\n") != std::string::npos);
  CHECK(quad.out.find("verdict: singular\n") != std::string::npos);

  const Run hex = run({"probe", "--mesh", "gen:hex:3"});
  REQUIRE(hex.code == 0);
  CHECK(hex.out.find("j: 4 (auto)\n") != std::string::npos);
  CHECK(hex.out.find("verdict: nonsingular\n") != std::string::npos);
}

TEST_CASE("mesh files") {
  const auto dir = std::filesystem::temp_directory_path() / "sfwg_test_cli";
  std::filesystem::create_directories(dir);
  const auto good = dir / "hex.mesh";
  {
    std::ofstream f(good);
    f << sfwg::write_mesh(sfwg::build_hexagon_mesh(2));
  }
  const Run ok = run({"probe", "--mesh", good.string(), "--j", "1"});
  REQUIRE(ok.code == 0);
  CHECK(ok.out.find("verdict: singular\n") != std::string::npos);

  const auto broken = dir / "broken.mesh";
  {
    std::ofstream f(broken);
    f << "polymesh 1\nvertices 3\n0 0\n1 0\n0 1\nelements 1\n3 0 2 1\n";
  }
  const Run bad = run({"probe", "--mesh", broken.string()});
  CHECK(bad.code == sfwg::cli::kExitConfig);
  CHECK(bad.err.find("invalid mesh") != std::string::npos);
  std::filesystem::remove_all(dir);
}

TEST_CASE("normequiv and solve") {
  const Run ne = run({"normequiv", "--mesh", "gen:tri:2", "--j", "2", "--samples", "10"});
  REQUIRE(ne.code == 0);
  CHECK(ne.out.find("sampled_min_ratio: ") != std::string::npos);
  CHECK(ne.out.find("exact_min_ratio: ") != std::string::npos);
  const Run ne2 = run({"normequiv", "--mesh", "gen:tri:2", "--j", "2", "--samples", "10", "--no-exact"});
  CHECK(ne2.out.find("exact_min_ratio") == std::string::npos);

  const Run s = run({"solve", "--mesh", "gen:tri:2", "--field", "bubble"});
  REQUIRE(s.code == 0);
  const auto l = lines(s.out);
  CHECK(l[0] == "dof,kind,entity,slot,value");
  CHECK(l.size() == 41);
  CHECK(l[1].rfind("0,interior,0,0,", 0) == 0);
  CHECK(l.back().find(",edge,") != std::string::npos);

  const auto path = std::filesystem::temp_directory_path() / "sfwg_test_cli_solve.csv";
  const Run to_file = run({"solve", "--mesh", "gen:tri:2", "--field", "bubble", "--out", path.string()});
  CHECK(to_file.code == 0);
  CHECK(to_file.out.empty());
  std::ifstream in(path, std::ios::binary);
  std::stringstream buf;
  buf << in.rdbuf();
  CHECK(buf.str() == s.out);
  std::filesystem::remove(path);
}
