#include "doctest.h"

#include <filesystem>
#include <string>

#include "cclt/config.hpp"
#include "cclt/errors.hpp"
#include "cclt/io.hpp"

namespace fs = std::filesystem;
using namespace cclt;
using config::Overrides;
using config::parse_config;

namespace {

const char* kDist = R"([{"d":3,"theta":0,"p":0.1},{"d":3,"theta":2,"p":0.9}])";

fs::path write_cfg(const std::string& name, const std::string& body) {
  const auto path = fs::temp_directory_path() / "cclt_cfg" / name;
  io::write_atomic(path, [&](std::ostream& os) { os << body; });
  return path;
}

std::string joined(const ConfigError& e) {
  std::string s;
  for (const auto& p : e.problems()) s += p + "\n";
  return s;
}

}  // namespace

TEST_CASE("minimal file takes defaults") {
  const auto path = write_cfg("min.json", std::string(R"({"distribution":)") + kDist + "}");
  const auto cfg = parse_config(path, {}, "3");
  CHECK(cfg.n == 10000);
  CHECK(cfg.trials == 500);
  CHECK(cfg.seed == 0);
  CHECK(cfg.snapshots == 64);
  CHECK_FALSE(cfg.eval_time);
  CHECK(cfg.workers == 3);
  CHECK(cfg.distribution.atoms.size() == 2);
}

TEST_CASE("flags beat the file") {
  const auto path =
      write_cfg("n.json", std::string(R"({"n":10,"seed":4,"distribution":)") + kDist + "}");
  Overrides o;
  o.n = 100;
  const auto cfg = parse_config(path, o, nullptr);
  CHECK(cfg.n == 100);
  CHECK(cfg.seed == 4);
  Overrides d;
  d.dist_inline = "2:0:1";
  CHECK(parse_config(path, d, nullptr).distribution.atoms.size() == 1);
}

TEST_CASE("distribution path resolves next to the config") {
  write_cfg("law.json", kDist);
  const auto path = write_cfg("rel.json", R"({"distribution":"law.json"})");
  CHECK(parse_config(path, {}, nullptr).distribution.atoms.size() == 2);
}

TEST_CASE("bad sum is reported with the sum") {
  Overrides o;
  o.dist_inline = "3:0:0.1,3:2:0.8";
  try {
    parse_config(std::nullopt, o, nullptr);
    FAIL("expected an error");
  } catch (const ConfigError& e) {
    CHECK(joined(e).find("sum") != std::string::npos);
    CHECK(joined(e).find("0.9") != std::string::npos);
  } catch (const dist::InvalidDistribution& e) {
    CHECK(std::string(e.what()).find("0.9") != std::string::npos);
  }
}

TEST_CASE("unknown keys and several problems are collected") {
  const auto path = write_cfg(
      "bad.json", std::string(R"({"n":-5,"trails":3,"workers":2,"distribution":)") + kDist + "}");
  try {
    parse_config(path, {}, nullptr);
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    const auto s = joined(e);
    CHECK(s.find("trails") != std::string::npos);
    CHECK(s.find("workers") != std::string::npos);
    CHECK(s.find("n") != std::string::npos);
    CHECK(e.problems().size() >= 3);
  }
  CHECK_THROWS_AS(parse_config(write_cfg("q.json", R"({"quadrature":{"tol":1}})"), {}, nullptr,
                               false),
                  ConfigError);
}

TEST_CASE("workers precedence") {
  Overrides o;
  o.dist_inline = "2:0:1";
  CHECK(parse_config(std::nullopt, o, "5").workers == 5);
  o.workers = 2;
  CHECK(parse_config(std::nullopt, o, "5").workers == 2);
  o.workers.reset();
  CHECK(parse_config(std::nullopt, o, nullptr).workers == config::available_parallelism());
  CHECK_THROWS_AS(parse_config(std::nullopt, o, "many"), ConfigError);
  CHECK_THROWS_AS(parse_config(std::nullopt, o, "0"), ConfigError);
}

TEST_CASE("missing inputs") {
  CHECK_THROWS_AS(parse_config(std::nullopt, {}, nullptr), ConfigError);
  CHECK_NOTHROW(parse_config(std::nullopt, {}, nullptr, false));
  CHECK_THROWS_AS(parse_config(fs::path("/nonexistent/cfg.json"), {}, nullptr), ConfigError);
  Overrides o;
  o.dist_file = "/nonexistent/law.json";
  CHECK_THROWS_AS(parse_config(std::nullopt, o, nullptr), ConfigError);
  CHECK_THROWS_AS(parse_config(write_cfg("junk.json", "{not json"), {}, nullptr), ConfigError);
}

TEST_CASE("n list") {
  CHECK(config::parse_n_list("1000,10000") == std::vector<std::int64_t>{1000, 10000});
  CHECK_THROWS_AS(config::parse_n_list("10,x"), ConfigError);
  CHECK_THROWS_AS(config::parse_n_list(""), ConfigError);
}
