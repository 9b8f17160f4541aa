#include <doctest.h>

#include <random>

#include "json.hpp"
#include "oracles.hpp"
#include "teletwin/scoring.hpp"

using namespace teletwin;

namespace {

std::vector<SessionEvent> events(std::initializer_list<EventKind> kinds) {
  std::vector<SessionEvent> out;
  std::int64_t t = 0;
  for (EventKind k : kinds) {
    out.push_back({t++, k, "x", Side::Right});
  }
  return out;
}

EfficiencyState efficiency(double elapsed, double motion) {
  EfficiencyState e;
  e.elapsed = elapsed;
  e.motion_accum = motion;
  return e;
}

} // namespace

TEST_SUITE("scoring") {

TEST_CASE("efficiency points") {
  CHECK(efficiency_points(0.0, 120.0, 0.5) == 50.0);
  CHECK(efficiency_points(120.0, 120.0, 0.5) == 50.0);
  CHECK(efficiency_points(140.0, 120.0, 0.5) == doctest::Approx(40.0));
  CHECK(efficiency_points(500.0, 120.0, 0.5) == 0.0);
  CHECK(efficiency_points(3.5, 3.0, 20.0) == doctest::Approx(40.0));
}

TEST_CASE("a clean completed run scores one hundred") {
  const auto b = finalize(efficiency(60.0, 1.5), events({EventKind::Touch, EventKind::ScenarioComplete}), {}, {});
  CHECK(b.status == ScoreStatus::Completed);
  CHECK(b.total == 100.0);
  CHECK(b.penalties.empty());
  CHECK(b.failure_reason.empty());
}

TEST_CASE("two drops cost twenty points") {
  const auto b =
      finalize(efficiency(60.0, 1.5), events({EventKind::Drop, EventKind::Drop, EventKind::ScenarioComplete}), {}, {});
  CHECK(b.total == doctest::Approx(80.0));
  REQUIRE(b.penalties.size() == 1);
  CHECK(b.penalties[0].kind == PenaltyKind::Drop);
  CHECK(b.penalties[0].count == 2);
  CHECK(b.penalties[0].deducted == doctest::Approx(20.0));
}

TEST_CASE("penalty lines follow the penalty kind order") {
  const auto b = finalize(efficiency(1.0, 0.1),
                          events({EventKind::OutOfView, EventKind::GlassBreak, EventKind::Drop,
                                  EventKind::ExcessiveForce, EventKind::ScenarioComplete}),
                          {}, {});
  REQUIRE(b.penalties.size() == 4);
  for (int i = 0; i < 4; ++i) {
    CHECK(b.penalties[i].kind == static_cast<PenaltyKind>(i));
  }
  CHECK(b.total == doctest::Approx(100.0 - 10 - 5 - 15 - 2));
}

TEST_CASE("the total is floored at zero") {
  std::vector<SessionEvent> ev(20, SessionEvent{0, EventKind::GlassBreak, "g", Side::Left});
  ev.push_back({1, EventKind::ScenarioComplete, "s", {}});
  CHECK(finalize(efficiency(1.0, 0.1), ev, {}, {}).total == 0.0);
}

TEST_CASE("tower detach and missing completion fail with zero") {
  const auto detached = finalize(efficiency(10.0, 0.5), events({EventKind::TowerDetach, EventKind::ScenarioFailed}), {}, {});
  CHECK(detached.status == ScoreStatus::Failed);
  CHECK(detached.failure_reason == "tower_detach");
  CHECK(detached.total == 0.0);

  const auto unfinished = finalize(efficiency(10.0, 0.5), events({EventKind::Touch}), {}, {});
  CHECK(unfinished.status == ScoreStatus::Failed);
  CHECK(unfinished.failure_reason == "incomplete");
  CHECK(unfinished.total == 0.0);
}

TEST_CASE("more penalties never raise the score") {
  std::mt19937_64 rng(11);
  std::uniform_int_distribution<int> kind(0, 3);
  std::vector<SessionEvent> ev{{0, EventKind::ScenarioComplete, "s", {}}};
  const EventKind penalties[] = {EventKind::Drop, EventKind::ExcessiveForce, EventKind::GlassBreak, EventKind::OutOfView};
  double last = finalize(efficiency(30.0, 1.0), ev, {}, {}).total;
  for (int i = 0; i < 40; ++i) {
    ev.push_back({i, penalties[kind(rng)], "x", Side::Left});
    const double now = finalize(efficiency(30.0, 1.0), ev, {}, {}).total;
    CHECK(now <= last);
    last = now;
  }
  double prev = 101.0;
  for (double t = 0.0; t < 300.0; t += 7.0) {
    const double now = finalize(efficiency(t, 1.0), events({EventKind::ScenarioComplete}), {}, {}).total;
    CHECK(now <= prev);
    prev = now;
  }
}

TEST_CASE("finalize agrees with the brute-force scorer") {
  std::mt19937_64 rng(12);
  std::uniform_int_distribution<int> n(0, 4);
  std::uniform_real_distribution<double> t(0.0, 250.0), m(0.0, 6.0);
  const EventKind pool[] = {EventKind::Drop,      EventKind::ExcessiveForce, EventKind::GlassBreak,
                            EventKind::OutOfView, EventKind::Touch,          EventKind::Grasp};
  for (int c = 0; c < 200; ++c) {
    std::vector<SessionEvent> ev;
    for (EventKind k : pool) {
      for (int i = n(rng); i > 0; --i) {
        ev.push_back({0, k, "x", Side::Left});
      }
    }
    if (c % 5 != 0) {
      ev.push_back({1, EventKind::ScenarioComplete, "s", {}});
    }
    if (c % 17 == 0) {
      ev.push_back({1, EventKind::TowerDetach, "tower", Side::Right});
    }
    const double elapsed = t(rng), motion = m(rng);
    const auto b = finalize(efficiency(elapsed, motion), ev, {}, {});
    CHECK(b.total == oracle::score(ev, elapsed, motion, 120.0, 0.5, 3.0, 20.0, {}));
  }
}

TEST_CASE("accumulate sums translation and scaled rotation") {
  EfficiencyState s;
  std::vector<Posed> a{Posed::Identity(), Posed::Translation({1, 0, 0})};
  s = accumulate(s, a, 0.01, 0.05);
  CHECK(s.motion_accum == 0.0);
  CHECK(s.elapsed == doctest::Approx(0.01));
  std::vector<Posed> b{Posed::Translation({0.0, 0.03, 0.04}),
                       Posed{exp_so3<double>(Eigen::Vector3d(0, 0, 0.2)), {1, 0, 0}}};
  s = accumulate(s, b, 0.01, 0.05);
  CHECK(s.motion_accum == doctest::Approx(0.05 + 0.05 * 0.2));
  s = accumulate(s, b, 0.01, 0.05);
  CHECK(s.motion_accum == doctest::Approx(0.06));
  CHECK(s.elapsed == doctest::Approx(0.03));
  CHECK_THROWS_AS(accumulate(s, b, 0.0, 0.05), std::invalid_argument);
}

TEST_CASE("weights and thresholds validation") {
  PenaltyWeights w;
  CHECK_NOTHROW(w.validate());
  w.drop = 5.0;
  CHECK_THROWS_AS(w.validate(), std::invalid_argument);
  w = PenaltyWeights{};
  w.out_of_view = -1.0;
  CHECK_THROWS_AS(w.validate(), std::invalid_argument);
  ScoreThresholds t;
  CHECK_NOTHROW(t.validate());
  t.time_budget = 0.0;
  CHECK_THROWS_AS(t.validate(), std::invalid_argument);
}

TEST_CASE("report document") {
  const auto b = finalize(efficiency(61.2345678, 1.5),
                          events({EventKind::Drop, EventKind::OutOfView, EventKind::ScenarioComplete}), {}, {});
  const ReportMetadata meta{"wrist_articulation_1", "s1", 0, 61240, 6124};
  const std::string text = export_report(b, meta);
  CHECK(text == export_report(b, meta));
  CHECK(text.back() == '\n');

  const auto doc = nlohmann::ordered_json::parse(text);
  std::vector<std::string> keys;
  for (const auto &item : doc.items()) {
    keys.push_back(item.key());
  }
  CHECK(keys == std::vector<std::string>{"format", "version", "scenario_id", "session_id", "status", "failure_reason",
                                         "timestamps", "efficiency", "penalties", "total"});
  CHECK(doc["format"] == "teletwin.report");
  CHECK(doc["status"] == "completed");
  CHECK(doc["failure_reason"].is_null());
  CHECK(doc["timestamps"]["ticks"] == 6124);
  CHECK(doc["efficiency"]["total_time"]["value_s"].get<double>() == 61.234568);
  CHECK(doc["penalties"].size() == 2);
  CHECK(doc["penalties"][0]["kind"] == "drop");
  CHECK(doc["total"].get<double>() == 88.0);

  const auto failed = finalize(efficiency(1.0, 0.1), events({EventKind::TowerDetach}), {}, {});
  CHECK(nlohmann::json::parse(export_report(failed, meta))["failure_reason"] == "tower_detach");
}

TEST_CASE("canonical numbers") {
  CHECK(canonical_number(1.23456789) == 1.234568);
  CHECK(canonical_number(-1e-9) == 0.0);
  CHECK(std::signbit(canonical_number(-1e-9)) == false);
}

}
