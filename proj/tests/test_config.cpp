#include <doctest.h>

#include "json.hpp"
#include "teletwin/config.hpp"
#include "teletwin/errors.hpp"

using namespace teletwin;
using nlohmann::json;

namespace {

std::string config_error_field(const std::string &doc) {
  try {
    load_config(doc);
  } catch (const ConfigError &e) {
    CHECK(e.category() == ErrorCategory::Config);
    return e.field();
  }
  FAIL("config was accepted: " << doc);
  return {};
}

} // namespace

TEST_SUITE("config") {

TEST_CASE("defaults are valid and place the arms side by side") {
  const auto cfg = EngineConfig::Default();
  CHECK_NOTHROW(cfg.validate());
  CHECK(cfg.tick_us() == 10000);
  CHECK(cfg.teleop.motion_scale == 0.25);
  CHECK(cfg.chains[0].joints[0].offset.translation.isApprox(Eigen::Vector3d(0.0, 0.15, 0.5)));
  CHECK(cfg.chains[1].joints[0].offset.translation.isApprox(Eigen::Vector3d(0.0, -0.15, 0.5)));
}

TEST_CASE("an empty document yields the defaults") {
  CHECK(dump_config(load_config("{}")) == dump_config(EngineConfig::Default()));
}

TEST_CASE("dump and load round-trip") {
  auto cfg = EngineConfig::Default();
  cfg.tick = 0.005;
  cfg.teleop.motion_scale = 0.4;
  cfg.ik.max_iterations = 80;
  cfg.pedals.press_height = 0.03;
  cfg.motion_beta = 0.1;
  cfg.chains[1].home[2] = 0.3;
  const std::string text = dump_config(cfg);
  const auto back = load_config(text);
  CHECK(dump_config(back) == text);
  CHECK(back.tick_us() == 5000);
  CHECK(back.chains[1].home[2] == 0.3);
  CHECK(back.pedals.regions.size() == cfg.pedals.regions.size());
}

TEST_CASE("partial overlay keeps the other defaults") {
  const auto cfg = load_config(R"({"teleop": {"motion_scale": 0.5}, "ik": {"max_iterations": 20}})");
  CHECK(cfg.teleop.motion_scale == 0.5);
  CHECK(cfg.ik.max_iterations == 20);
  CHECK(cfg.tick == 0.01);
  CHECK(cfg.teleop.grip_close_threshold == 0.8);
}

TEST_CASE("errors name the field") {
  CHECK(config_error_field("{") == "");
  CHECK(config_error_field(R"({"tick": 0})") == "tick");
  CHECK(config_error_field(R"({"version": 7})") == "version");
  CHECK(config_error_field(R"({"speed": 1})") == "speed");
  CHECK(config_error_field(R"({"teleop": {"motion_scale": 2.0}})") == "teleop");
  CHECK(config_error_field(R"({"teleop": {"motion_scale": "fast"}})") == "teleop.motion_scale");
  CHECK(config_error_field(R"({"ik": {"damping_lambda": -1}})") == "ik");
  CHECK(config_error_field(R"({"footboard": {"scale_gain": 0}})") == "footboard.scale_gain");
  CHECK(config_error_field(R"({"scoring": {"force_stiffness": 0}})") == "scoring.force_stiffness");

  json doc = json::parse(dump_config(EngineConfig::Default()));
  doc["chains"]["left"]["joints"][1]["axis"] = {0.0, 2.0, 0.0};
  CHECK(config_error_field(doc.dump()) == "chains.left");
  doc = json::parse(dump_config(EngineConfig::Default()));
  doc["footboard"]["pedals"][1]["min"] = {0.0, 0.0};
  CHECK(config_error_field(doc.dump()) == "footboard");
}

}
