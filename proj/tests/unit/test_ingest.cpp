#include <catch_amalgamated.hpp>

#include <atomic>
#include <filesystem>
#include <fstream>
#include <thread>
#include <vector>

#include <unistd.h>

#include <json.hpp>

#include "confirm/error.hpp"
#include "confirm/ingest.hpp"
#include "confirm/scenario_store.hpp"
#include "oracles.hpp"

using Catch::Approx;
using json = nlohmann::json;
using namespace confirm;
using namespace confirm::io;
namespace fs = std::filesystem;

namespace {

std::string study_text() { return oracle::read_file(oracle::data_path("expedition3_iadl_study.json")); }
std::string scenario_text() { return oracle::read_file(oracle::data_path("expedition3_scenario.json")); }

/// ParseError field path raised by parsing `doc`, or "<ok>".
template <typename F>
std::string parse_path(F&& parse, const json& doc) {
  try {
    parse(doc.dump());
  } catch (const ParseError& e) {
    return e.field_path();
  }
  return "<ok>";
}

std::string study_path(const json& doc) {
  return parse_path([](const std::string& s) { parse_study_summary(s); }, doc);
}

std::string scenario_path(const json& doc) {
  return parse_path([](const std::string& s) { parse_scenario(s); }, doc);
}

struct TempDir {
  fs::path path;
  TempDir() {
    static std::atomic<int> counter{0};
    path = fs::temp_directory_path() /
           ("confirm_test_" + std::to_string(::getpid()) + "_" + std::to_string(counter.fetch_add(1)));
    fs::remove_all(path);
  }
  ~TempDir() {
    std::error_code ec;
    fs::remove_all(path, ec);
  }
};

ScenarioRecord fixture_record() { return parse_scenario(scenario_text()); }

}  // namespace

TEST_CASE("study document parses into the published summary", "[ingest][study]") {
  const StudySummary s = parse_study_summary(study_text());
  CHECK(s.outcome_name == "ADCS-iADL");
  CHECK(s.direction == Direction::HigherIsBetter);
  CHECK(s.milestone_week == 80);
  CHECK(s.visit_weeks.size() == 7);
  CHECK(s.rx.n_baseline == 1053);
  CHECK(s.rx.sd_milestone == 11.41);
  CHECK(s.control.lsmean_change == -7.17);
  CHECK(s.control.change_n() == 980);
  REQUIRE(s.published_change_variance.has_value());
  CHECK(*s.published_change_variance == 92.365);
}

TEST_CASE("study document round-trips", "[ingest][study]") {
  const StudySummary s = parse_study_summary(study_text());
  const std::string text = serialize_study_summary(s);
  const StudySummary back = parse_study_summary(text);
  CHECK(serialize_study_summary(back) == text);
  CHECK(json::parse(text)["schema_version"] == kSchemaVersion);
}

TEST_CASE("study document errors name the field", "[ingest][study][errors]") {
  const json base = json::parse(study_text());

  json d = base;
  d["arms"]["rx"].erase("se_change");
  CHECK(study_path(d) == "arms.rx.se_change");

  d = base;
  d["arms"]["control"]["n_baseline"] = "many";
  CHECK(study_path(d) == "arms.control.n_baseline");

  d = base;
  d["arms"]["rx"]["n_baseline"] = 1;
  CHECK(study_path(d) == "arms.rx.n_baseline");

  d = base;
  d["arms"]["rx"]["sd_baseline"] = -2.0;
  CHECK(study_path(d) == "arms.rx.sd_baseline");

  d = base;
  d["direction"] = "sideways";
  CHECK(study_path(d) == "direction");

  d = base;
  d["colour"] = "blue";
  CHECK(study_path(d) == "colour");

  d = base;
  d.erase("schema_version");
  CHECK(study_path(d) == "schema_version");

  d = base;
  d["schema_version"] = 2;
  CHECK(study_path(d) == "schema_version");

  d = base;
  d["published_change_variance"] = nullptr;
  CHECK(study_path(d) == "<ok>");

  CHECK_THROWS_AS(parse_study_summary("{not json"), ParseError);
  CHECK_THROWS_AS(parse_study_summary("[]"), ParseError);
}

TEST_CASE("study variance triple", "[ingest][triple]") {
  const StudySummary s = parse_study_summary(study_text());
  const etz::VarianceTriple t = study_to_variance_triple(s);
  const double vb = (1052 * 7.93 * 7.93 + 1062 * 8.14 * 8.14) / 2114.0;
  const double vm = (907 * 11.41 * 11.41 + 895 * 11.86 * 11.86) / 1802.0;
  CHECK(t.var_baseline == Approx(vb).epsilon(1e-14));
  CHECK(t.var_milestone == Approx(vm).epsilon(1e-14));
  CHECK(t.var_baseline == Approx(64.580).margin(0.005));
  CHECK(t.var_milestone == Approx(135.389).margin(0.005));
  CHECK(t.var_change == 92.365);

  const etz::VarianceTriple derived = study_to_variance_triple(s, false);
  CHECK(derived.var_change == Approx(0.1024 * (980.0 * 981.0 + 979.0 * 980.0) / 1959.0).epsilon(1e-14));

  const etz::EtzComponents c = etz::decompose_etz(t);
  CHECK(c.var_z == Approx(53.802).margin(0.01));
  CHECK(c.var_e == Approx(10.778).margin(0.01));
  CHECK(c.var_traj == Approx(70.809).margin(0.01));
}

TEST_CASE("scenario document parses and round-trips", "[ingest][scenario]") {
  const ScenarioRecord r = fixture_record();
  CHECK(r.id == "expedition3-iadl");
  CHECK(r.created_at == "2026-01-15T09:00:00Z");
  CHECK(r.plan.gamma.value() == 0.76);
  CHECK(r.plan.d_phase3 == 0.3);
  CHECK(r.design.n_rx == 1000);
  CHECK(r.design.seed == 3);
  CHECK(r.design.sigma_pooled == 0.0);
  CHECK_FALSE(r.etz_override.has_value());

  const std::string text = serialize_scenario(r);
  const ScenarioRecord back = parse_scenario(text);
  CHECK(back == r);
  CHECK(serialize_scenario(back) == text);

  ScenarioRecord o = r;
  o.etz_override = etz::EtzComponents{50.0, 10.0, 70.0};
  CHECK(parse_scenario(serialize_scenario(o)) == o);
  CHECK(scenario_etz(o) == *o.etz_override);
  CHECK(scenario_etz(r).var_z == Approx(53.802).margin(0.01));
}

TEST_CASE("scenario document errors name the field", "[ingest][scenario][errors]") {
  const json base = json::parse(scenario_text());

  json d = base;
  d["study"]["arms"]["rx"].erase("se_change");
  CHECK(scenario_path(d) == "study.arms.rx.se_change");

  d = base;
  d["design"]["n_rx"] = 1;
  CHECK(scenario_path(d) == "design.n_rx");

  d = base;
  d["design"].erase("seed");
  CHECK(scenario_path(d) == "design.seed");

  d = base;
  d["plan"]["d_phase3"] = 0.2;
  CHECK(scenario_path(d) == "plan.gamma");

  d = base;
  d["plan"].erase("d_phase2");
  CHECK(scenario_path(d) == "<ok>");
  CHECK(parse_scenario(d.dump()).plan.d_phase2 == Approx(0.45).margin(1e-12));

  d = base;
  d["id"] = "../escape";
  CHECK(scenario_path(d) == "id");

  d = base;
  d["created_at"] = "2026-13-01T00:00:00Z";
  CHECK(scenario_path(d) == "created_at");

  d = base;
  d["etz_override"] = {{"var_z", 1.0}, {"var_e", -1.0}, {"var_traj", 1.0}};
  CHECK(scenario_path(d) == "etz_override.var_e");
}

TEST_CASE("scenario ids and timestamps", "[ingest][scenario]") {
  CHECK(is_valid_scenario_id("a"));
  CHECK(is_valid_scenario_id("expedition3-iadl_v2.1"));
  CHECK(is_valid_scenario_id(std::string(128, 'x')));
  CHECK_FALSE(is_valid_scenario_id(""));
  CHECK_FALSE(is_valid_scenario_id(std::string(129, 'x')));
  CHECK_FALSE(is_valid_scenario_id(".hidden"));
  CHECK_FALSE(is_valid_scenario_id("a/b"));
  CHECK_FALSE(is_valid_scenario_id("a b"));

  CHECK(is_valid_timestamp("2026-01-15T09:00:00Z"));
  CHECK(is_valid_timestamp("2024-02-29T23:59:59Z"));
  CHECK_FALSE(is_valid_timestamp("2026-01-15 09:00:00Z"));
  CHECK_FALSE(is_valid_timestamp("2026-01-15T09:00:00"));
  CHECK_FALSE(is_valid_timestamp("2026-01-32T09:00:00Z"));
  CHECK_FALSE(is_valid_timestamp("2026-01-15T24:00:00Z"));
  CHECK(is_valid_timestamp(utc_timestamp_now()));
}

TEST_CASE("scenario store save, load and list", "[ingest][store]") {
  TempDir tmp;
  ScenarioStore store(tmp.path);
  CHECK(store.list().empty());

  ScenarioRecord a = fixture_record();
  store.save(a);
  CHECK(store.contains(a.id));
  CHECK(store.load(a.id) == a);
  CHECK_THROWS_AS(store.save(a), ConflictError);

  ScenarioRecord b = a;
  b.id = "alpha";
  b.created_at = "2026-02-01T00:00:00Z";
  ScenarioRecord c = a;
  c.id = "beta";
  c.created_at = "2025-12-31T23:59:59Z";
  store.save(b);
  store.save(c);
  CHECK(store.list_ids() == std::vector<std::string>{"beta", "expedition3-iadl", "alpha"});

  CHECK_THROWS_AS(store.load("missing"), NotFoundError);
  CHECK_THROWS_AS(store.load("../etc/passwd"), NotFoundError);

  // Survives reopening.
  ScenarioStore reopened(tmp.path);
  CHECK(reopened.load("alpha") == b);

  // No temporary files are left behind.
  for (const auto& entry : fs::directory_iterator(tmp.path)) {
    CHECK(entry.path().extension() == ".json");
  }
}

TEST_CASE("scenario store reports corrupt files", "[ingest][store]") {
  TempDir tmp;
  ScenarioStore store(tmp.path);
  std::ofstream(tmp.path / "broken.json") << "{\"schema_version\": 1,";
  try {
    store.load("broken");
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::Internal);
    CHECK(std::string(e.what()).find("broken.json") != std::string::npos);
  }

  ScenarioRecord r = fixture_record();
  std::ofstream(tmp.path / "renamed.json") << serialize_scenario(r);
  try {
    store.load("renamed");
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::Internal);
  }
}

TEST_CASE("scenario store rejects invalid records", "[ingest][store]") {
  TempDir tmp;
  ScenarioStore store(tmp.path);
  ScenarioRecord r = fixture_record();
  r.id = "bad id";
  CHECK_THROWS_AS(store.save(r), ParseError);
  CHECK(store.list().empty());
}

TEST_CASE("concurrent saves of one id: exactly one wins", "[ingest][store][concurrency]") {
  TempDir tmp;
  ScenarioStore store(tmp.path);
  const ScenarioRecord r = fixture_record();
  std::atomic<int> ok{0}, conflict{0};
  std::vector<std::thread> threads;
  for (int i = 0; i < 8; ++i) {
    threads.emplace_back([&] {
      try {
        store.save(r);
        ++ok;
      } catch (const ConflictError&) {
        ++conflict;
      }
    });
  }
  for (auto& t : threads) t.join();
  CHECK(ok == 1);
  CHECK(conflict == 7);
  CHECK(store.load(r.id) == r);
}

TEST_CASE("two stores on one directory do not clobber each other", "[ingest][store][concurrency]") {
  TempDir tmp;
  ScenarioStore s1(tmp.path);
  ScenarioStore s2(tmp.path);
  ScenarioRecord a = fixture_record();
  ScenarioRecord b = a;
  b.notes = "second writer";
  std::atomic<int> ok{0};
  std::thread t1([&] {
    try {
      s1.save(a);
      ++ok;
    } catch (const ConflictError&) {
    }
  });
  std::thread t2([&] {
    try {
      s2.save(b);
      ++ok;
    } catch (const ConflictError&) {
    }
  });
  t1.join();
  t2.join();
  CHECK(ok == 1);
  const ScenarioRecord stored = s1.load(a.id);
  CHECK((stored == a || stored == b));
}
