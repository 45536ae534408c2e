#include <doctest.h>

#include <array>
#include <cstdio>
#include <filesystem>
#include <sstream>
#include <thread>

#include <httplib.h>

#include "cli.hpp"

using namespace twist;
using namespace twist::cli;
namespace fs = std::filesystem;

namespace {

struct Run {
  int status = 0;
  std::string out;
};

// Runs the twist binary with stderr folded into the captured text when asked.
Run run_cli(const std::string &args, bool with_stderr = false) {
  std::string cmd = std::string("'") + TWIST_CLI_PATH + "' " + args +
                    " --cache-dir '" + TWIST_TEST_CACHE_DIR + "/cli'";
  if (args.rfind("characters", 0) == 0 || args.rfind("lattice", 0) == 0)
    cmd = std::string("'") + TWIST_CLI_PATH + "' " + args;
  cmd += with_stderr ? " 2>&1" : " 2>/dev/null";
  Run r;
  FILE *pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe);
  std::array<char, 4096> buf{};
  std::size_t n;
  while ((n = fread(buf.data(), 1, buf.size(), pipe)) > 0)
    r.out.append(buf.data(), n);
  int st = pclose(pipe);
  r.status = WIFEXITED(st) ? WEXITSTATUS(st) : -1;
  return r;
}

} // namespace

TEST_SUITE("cli") {

TEST_CASE("h ranges") {
  CHECK(parse_h_range("--h", "3..6") == std::vector<int>{3, 4, 5, 6});
  CHECK(parse_h_range("--h", "2,4,7") == std::vector<int>{2, 4, 7});
  CHECK(parse_h_range("--h", "5") == std::vector<int>{5});
  for (const char *bad : {"", "1", "13", "4..3", "3,3", "x", "2..", "5,4"})
    CHECK_THROWS_AS(parse_h_range("--h", bad), FlagError);
  try {
    parse_h_range("--h", "2..20");
  } catch (const FlagError &e) {
    CHECK(e.flag == "--h");
  }
}

TEST_CASE("report helpers") {
  CHECK(measured(1.5, 0.25).dump() == R"({"value":1.5,"err":0.25})");
  CHECK(measured(std::complex<double>(1, -2), 0.5).dump() == R"({"re":1.0,"im":-2.0,"err":0.5})");
  CHECK(exact(7).dump() == R"({"value":7,"exact":true})");
  i128 big = static_cast<i128>(1) << 100;
  CHECK(i128_string(big) == "1267650600228229401496703205376");
  CHECK(i128_string(-big) == "-1267650600228229401496703205376");
  CHECK(required_terms("insufficient coefficients: need N >= 12345, table has 10") == 12345);
  CHECK_FALSE(required_terms("something else").has_value());

  json r = {{"rows", json::array({{{"h", exact(2)}, {"name", "a,b"}, {"list", {1, 2}}},
                                   {{"h", exact(3)}, {"extra", 1.5}}})}};
  CHECK(csv_projection(r) ==
        "h.value,h.exact,name,extra\n2,true,\"a,b\",\n3,true,,1.5\n");
}

TEST_CASE("forms load from files and http") {
  auto dir = fs::path(TWIST_TEST_CACHE_DIR) / "scratch" / "forms";
  fs::create_directories(dir);
  auto f = eta_product_coefficients(BuiltinForm::level11, 400);
  std::string text = format_qexpansion(f);
  {
    std::ofstream out(dir / "l11.txt");
    out << text;
  }
  RunConfig cfg;
  cfg.no_cache = true;
  FormProvider forms(cfg, nullptr);
  auto g = forms.get((dir / "l11.txt").string(), 300);
  CHECK(g.size() == 300);
  CHECK(g.a(299) == f.a(299));
  CHECK_THROWS_AS(forms.get((dir / "l11.txt").string(), 500), FlagError);
  CHECK_THROWS_AS(forms.get((dir / "missing.txt").string(), 10), FlagError);

  httplib::Server server;
  server.Get("/l11", [&](const httplib::Request &, httplib::Response &res) {
    res.set_content(text, "text/plain");
  });
  server.Get("/junk", [&](const httplib::Request &, httplib::Response &res) {
    res.set_content("not a q-expansion", "text/plain");
  });
  int port = server.bind_to_any_port("127.0.0.1");
  std::thread th([&] { server.listen_after_bind(); });
  server.wait_until_ready();
  std::string base = "http://127.0.0.1:" + std::to_string(port);
  auto h = forms.get(base + "/l11", 400);
  CHECK(h.coefficients() == f.coefficients());
  CHECK_THROWS_AS(forms.get(base + "/junk", 10), FlagError);
  CHECK_THROWS_AS(forms.get(base + "/absent", 10), FlagError);
  server.stop();
  th.join();
  CHECK_THROWS_AS(forms.get("http://127.0.0.1:1/none", 10), FlagError);
}

TEST_CASE("characters subcommand") {
  auto r = run_cli("characters --p 3 --h 3 --list-wild");
  REQUIRE(r.status == 0);
  auto j = json::parse(r.out);
  CHECK(j["command"] == "characters");
  CHECK(j["schema"] == 1);
  CHECK(j["rows"].size() == 6);
  auto csv = run_cli("characters --p 5 --h 3 --list-wild --format csv");
  REQUIRE(csv.status == 0);
  CHECK(std::count(csv.out.begin(), csv.out.end(), '\n') == 21);
}

TEST_CASE("bad flags exit 1 and name the flag") {
  auto a = run_cli("characters --p 4 --h 3", true);
  CHECK(a.status == 1);
  CHECK(a.out.find("--p") != std::string::npos);
  auto b = run_cli("moment --p 3 --h 1", true);
  CHECK(b.status == 1);
  CHECK(b.out.find("--h") != std::string::npos);
  auto c = run_cli("lvalue --form /nonexistent/file", true);
  CHECK(c.status == 1);
  CHECK(c.out.find("--form") != std::string::npos);
  auto d = run_cli("moment --p 3 --h 2,3 --l1 3", true);
  CHECK(d.status == 1);
  CHECK(d.out.find("--l1") != std::string::npos);
  auto e = run_cli("frobnicate", true);
  CHECK(e.status == 1);
  auto help = run_cli("--help");
  CHECK(help.status == 0);
  CHECK(help.out.find("selftest") != std::string::npos);
}

TEST_CASE("contract failures exit 2") {
  auto r = run_cli("errorterm --p 5 --h 4 --xi-order 4", true);
  CHECK(r.status == 2);
}

TEST_CASE("lattice output is deterministic") {
  auto a = run_cli("lattice --q 625 --xi 182 --samples 50 --seed 7");
  auto b = run_cli("lattice --q 625 --xi 182 --samples 50 --seed 7");
  REQUIRE(a.status == 0);
  CHECK(a.out == b.out);
  auto j = json::parse(a.out);
  CHECK(j["rows"].size() == 50);
}

TEST_CASE("lvalue subcommand") {
  auto r = run_cli("lvalue --coeffs 100000");
  REQUIRE(r.status == 0);
  auto j = json::parse(r.out);
  double v = j["rows"][0]["value"]["re"].get<double>();
  CHECK(v == doctest::Approx(0.2538418608559107).epsilon(1e-12));
}

}
