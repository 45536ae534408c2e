#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "twist/cache.hpp"

using namespace twist;
namespace fs = std::filesystem;

namespace {

fs::path fresh_dir(const std::string &name) {
  fs::path d = fs::path(TWIST_TEST_CACHE_DIR) / "scratch" / name;
  fs::remove_all(d);
  fs::create_directories(d);
  return d;
}

int generated_calls = 0;

NewformTable gen(i64 N) {
  ++generated_calls;
  return eta_product_coefficients(BuiltinForm::delta, N);
}

} // namespace

TEST_SUITE("cache") {

TEST_CASE("coefficient files round trip") {
  auto dir = fresh_dir("roundtrip");
  auto f = eta_product_coefficients(BuiltinForm::delta, 5000);
  write_coefficient_file(dir / "x.twc", f);
  auto g = read_coefficient_file(dir / "x.twc");
  CHECK(g.label() == "delta");
  CHECK(g.level() == 1);
  CHECK(g.two_kappa() == 12);
  CHECK(g.coefficients() == f.coefficients());
  // Large coefficients survive the varint encoding.
  CHECK(g.a(4999) == f.a(4999));
}

TEST_CASE("damaged files are detected") {
  auto dir = fresh_dir("damaged");
  auto f = eta_product_coefficients(BuiltinForm::level11, 3000);
  auto path = dir / "y.twc";
  write_coefficient_file(path, f);
  auto size = fs::file_size(path);

  SUBCASE("truncated") { fs::resize_file(path, size - 9); }
  SUBCASE("flipped byte") {
    std::fstream io(path, std::ios::in | std::ios::out | std::ios::binary);
    io.seekp(static_cast<std::streamoff>(size / 2));
    char c = 0;
    io.read(&c, 1);
    io.seekp(static_cast<std::streamoff>(size / 2));
    c = static_cast<char>(c ^ 0x10);
    io.write(&c, 1);
  }
  SUBCASE("bad magic") {
    std::fstream io(path, std::ios::in | std::ios::out | std::ios::binary);
    io.write("XXXX", 4);
  }
  CHECK_THROWS_AS(read_coefficient_file(path), CacheCorrupt);
}

TEST_CASE("cache generates, hits and serves supersets") {
  auto dir = fresh_dir("events");
  std::ostringstream log;
  generated_calls = 0;
  {
    CoefficientCache c(dir, &log);
    auto f = c.get("delta", 2000, gen);
    CHECK(f.size() == 2000);
    CHECK(generated_calls == 1);
    REQUIRE(c.events().size() == 2);
    CHECK(c.events()[0].kind == CacheEventKind::generated);
    CHECK(c.events()[1].kind == CacheEventKind::stored);
    CHECK(fs::exists(c.path_for("delta", 2000)));
  }
  {
    CoefficientCache c(dir, &log);
    auto f = c.get("delta", 2000, gen);
    CHECK(generated_calls == 1);
    CHECK(c.events().back().kind == CacheEventKind::hit);
    auto g = c.get("delta", 700, gen);
    CHECK(generated_calls == 1);
    CHECK(g.size() == 700);
    CHECK(c.events().back().kind == CacheEventKind::superset);
    CHECK(g.a(691) == f.a(691));
  }
  CHECK(log.str().find("stored") != std::string::npos);
}

TEST_CASE("corrupt entries are removed and regenerated") {
  auto dir = fresh_dir("corrupt");
  generated_calls = 0;
  CoefficientCache c(dir);
  c.get("delta", 1500, gen);
  auto path = c.path_for("delta", 1500);
  fs::resize_file(path, fs::file_size(path) / 2);
  CoefficientCache again(dir);
  auto f = again.get("delta", 1500, gen);
  CHECK(generated_calls == 2);
  CHECK(f.size() == 1500);
  bool saw_corrupt = false;
  for (const auto &e : again.events())
    saw_corrupt = saw_corrupt || e.kind == CacheEventKind::corrupt;
  CHECK(saw_corrupt);
  CHECK(read_coefficient_file(path).coefficients() == f.coefficients());
}

TEST_CASE("a file whose header disagrees with its name is not trusted") {
  auto dir = fresh_dir("renamed");
  CoefficientCache c(dir);
  write_coefficient_file(c.path_for("delta", 900), eta_product_coefficients(BuiltinForm::level11, 900));
  generated_calls = 0;
  auto f = c.get("delta", 900, gen);
  CHECK(generated_calls == 1);
  CHECK(f.label() == "delta");
}

}
