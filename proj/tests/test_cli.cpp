#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "cli.hpp"

using namespace spinmono;
using namespace spinmono::cli;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

fs::path fresh_dir(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / "spinmono_test_cli" / name;
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

std::string field_of(const json& doc) {
  try {
    parse_config(doc);
  } catch (const ConfigError& e) {
    return e.field();
  }
  return "";
}

json contact_doc() {
  return json{{"model", {{"name", "contact"}, {"params", {{"lambda", 2.0}, {"delta", 1.0}}}}},
              {"init", {{"kind", "step"}}},
              {"t", 0.5},
              {"zRange", {0, 3}},
              {"m", 3},
              {"replicas", 400},
              {"seed", 12}};
}

json violating_model() {
  return {{"name", "violating"},
          {"radius", 1},
          {"rates",
           {{"000", 0.5}, {"100", 0.2}, {"001", 0.5}, {"101", 0.5},
            {"010", 1.0}, {"110", 1.0}, {"011", 1.0}, {"111", 1.0}}}};
}

}  // namespace

TEST_CASE("config parsing") {
  const auto c = parse_config(contact_doc());
  CHECK(c.model.name == "contact");
  CHECK(c.t == 0.5);
  CHECK(c.z_max == 3);
  CHECK(c.seed == 12);
  CHECK(c.mode == Mode::coupled);

  const auto echo = parse_config(to_json(c));
  CHECK(to_json(echo) == to_json(c));

  SUBCASE("errors name the field") {
    auto doc = contact_doc();
    doc["t"] = -1;
    CHECK(field_of(doc) == "t");
    doc = contact_doc();
    doc["zRange"] = {3};
    CHECK(field_of(doc) == "zRange");
    doc = contact_doc();
    doc["replicas"] = 0;
    CHECK(field_of(doc) == "replicas");
    doc = contact_doc();
    doc["mode"] = "fast";
    CHECK(field_of(doc) == "mode");
    doc = contact_doc();
    doc["colour"] = 1;
    CHECK(field_of(doc) == "colour");
    doc = contact_doc();
    doc["init"] = {{"kind", "interval"}};
    CHECK(field_of(doc) == "init.N");
    doc = contact_doc();
    doc["model"]["params"]["lambda"] = -2.0;
    CHECK(field_of(doc) == "model");
    doc = contact_doc();
    doc["m"] = 9;
    CHECK(field_of(doc) == "m");
    doc = contact_doc();
    doc["epsilonTrunc"] = 2.0;
    CHECK(field_of(doc) == "epsilonTrunc");
  }
}

TEST_CASE("format_double and csv_field") {
  CHECK(format_double(0.1) == "0.1");
  CHECK(format_double(1.0) == "1");
  CHECK(format_double(0.0) == "0");
  CHECK(std::stod(format_double(1.0 / 3.0)) == 1.0 / 3.0);
  CHECK(csv_field("plain") == "plain");
  CHECK(csv_field("a,b") == "\"a,b\"");
  CHECK(csv_field("say \"hi\"") == "\"say \"\"hi\"\"\"");
}

TEST_CASE("check command") {
  auto doc = contact_doc();
  doc["model"]["params"]["lambda"] = 1.5;
  const auto ok_dir = fresh_dir("check_ok");
  CHECK(run("check", parse_config(doc), {ok_dir, 1, nullptr}) == kSuccess);
  const auto report = json::parse(slurp(ok_dir / "check.json"));
  CHECK(report["attractive"] == true);
  CHECK(fs::exists(ok_dir / "manifest.json"));

  doc["model"] = violating_model();
  const auto bad_dir = fresh_dir("check_bad");
  CHECK(run("check", parse_config(doc), {bad_dir, 1, nullptr}) == kViolation);
  const auto bad = json::parse(slurp(bad_dir / "check.json"));
  CHECK(bad["attractive"] == false);
  REQUIRE(bad["violations"].size() == 1);
  CHECK(bad["violations"][0]["low"] == "000");
  CHECK(bad["violations"][0]["high"] == "100");
  CHECK(slurp(bad_dir / "check.csv").find("attractiveness,000,100,0.5,0.2\n") != std::string::npos);
}

TEST_CASE("profile command at t = 0") {
  auto doc = contact_doc();
  doc["t"] = 0;
  doc["zRange"] = {-2, 2};
  doc["replicas"] = 20;
  const auto dir = fresh_dir("profile0");
  CHECK(run("profile", parse_config(doc), {dir, 2, nullptr}) == kSuccess);
  std::istringstream csv(slurp(dir / "profile.csv"));
  std::string line;
  std::getline(csv, line);
  CHECK(line == "z,p_hat,ci_low,ci_high,n");
  int rows = 0;
  while (std::getline(csv, line)) {
    const Site z = std::stoll(line.substr(0, line.find(',')));
    const std::string rest = line.substr(line.find(',') + 1);
    CHECK(rest.substr(0, rest.find(',')) == (z <= 0 ? "1" : "0"));
    CHECK(line.substr(line.rfind(',') + 1) == "20");
    ++rows;
  }
  CHECK(rows == 5);
}

TEST_CASE("models output round-trips") {
  const auto dir = fresh_dir("models");
  CHECK(run("models", ExperimentConfig{}, {dir, 1, nullptr}) == kSuccess);
  const auto listing = json::parse(slurp(dir / "models.json"));
  for (const auto& name : builtin_model_names()) {
    const RateSpec original = build_model(name, default_params(name));

    std::ifstream csv(dir / "models.csv");
    CHECK(read_rate_table_csv(csv, name) == original);

    const json* entry = nullptr;
    for (const auto& e : listing["models"]) {
      if (e["name"] == name) entry = &e;
    }
    REQUIRE(entry != nullptr);
    json model = *entry;
    model.erase("params");
    const auto config = parse_config(json{{"model", model}});
    CHECK(to_rate_spec(config.model) == original);

    json by_file{{"name", name}, {"csv", (dir / "models.csv").string()}};
    CHECK(to_rate_spec(parse_config(json{{"model", by_file}}).model) == original);
  }
}

TEST_CASE("artifacts do not depend on the worker count") {
  for (const std::string mode : {"coupled", "independent"}) {
    auto doc = contact_doc();
    doc["mode"] = mode;
    const auto config = parse_config(doc);
    const auto one = fresh_dir("w1_" + mode);
    const auto four = fresh_dir("w4_" + mode);
    const int a = run("verify", config, {one, 1, nullptr});
    const int b = run("verify", config, {four, 4, nullptr});
    CHECK(a == b);
    CHECK(slurp(one / "verify.csv") == slurp(four / "verify.csv"));
    CHECK(slurp(one / "report.json") == slurp(four / "report.json"));
    CHECK(slurp(one / "manifest.json") == slurp(four / "manifest.json"));
  }
  const auto config = parse_config(contact_doc());
  const auto one = fresh_dir("p1");
  const auto three = fresh_dir("p3");
  run("profile", config, {one, 1, nullptr});
  run("profile", config, {three, 3, nullptr});
  CHECK(slurp(one / "profile.csv") == slurp(three / "profile.csv"));
}

TEST_CASE("verify csv contract") {
  auto doc = contact_doc();
  doc["mode"] = "exact";
  const auto dir = fresh_dir("verify_exact");
  CHECK(run("verify", parse_config(doc), {dir, 1, nullptr}) == kSuccess);
  std::istringstream csv(slurp(dir / "verify.csv"));
  std::string line;
  std::getline(csv, line);
  CHECK(line == "z,mode,verdict,witness,margin");
  std::getline(csv, line);
  CHECK(line.rfind("0,exact,pass,", 0) == 0);
}
