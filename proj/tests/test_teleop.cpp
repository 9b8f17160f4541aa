#include <doctest.h>

#include <random>

#include "oracles.hpp"
#include "teletwin/teleop.hpp"

using namespace teletwin;
using Eigen::Vector3d;

namespace {

PedalState with(std::initializer_list<PedalId> down) {
  PedalState p;
  for (PedalId id : down) {
    p.pressed[static_cast<int>(id)] = true;
  }
  return p;
}

Posed random_pose(std::mt19937_64 &rng) { return {oracle::random_rotation(rng), Vector3d::Random()}; }

double diff(const Posed &a, const Posed &b) { return (a.matrix() - b.matrix()).cwiseAbs().maxCoeff(); }

} // namespace

TEST_SUITE("teleop") {

TEST_CASE("anchor stores both poses verbatim and is idempotent") {
  std::mt19937_64 rng(1);
  const Posed m = random_pose(rng), e = random_pose(rng);
  const auto a = anchor(m, e);
  CHECK(a.master_initial.matrix() == m.matrix());
  CHECK(a.ee_initial.matrix() == e.matrix());
  const auto b = anchor(m, e);
  CHECK(b.master_initial.matrix() == a.master_initial.matrix());
}

TEST_CASE("orientation mapping: identity, left increment and triple product") {
  std::mt19937_64 rng(2);
  for (int i = 0; i < 200; ++i) {
    const auto a = anchor(random_pose(rng), random_pose(rng));
    CHECK((desired_orientation(a, a.master_initial.rotation) - a.ee_initial.rotation).cwiseAbs().maxCoeff() < 1e-12);

    const Eigen::Matrix3d delta = oracle::random_rotation(rng);
    const Eigen::Matrix3d got = desired_orientation(a, Eigen::Matrix3d(delta * a.master_initial.rotation));
    CHECK((got - delta * a.ee_initial.rotation).cwiseAbs().maxCoeff() < 1e-12);

    const Eigen::Matrix3d now = oracle::random_rotation(rng);
    const oracle::Mat3 expected = oracle::mul(
        oracle::mul(oracle::to_array(now), oracle::transpose(oracle::to_array(a.master_initial.rotation))),
        oracle::to_array(a.ee_initial.rotation));
    CHECK(oracle::max_diff(expected, desired_orientation(a, now)) < 1e-12);
  }
}

TEST_CASE("position mapping is the scaled affine map") {
  const auto a = anchor(Posed::Translation({0.3, 0.1, 0.9}), Posed::Translation({0.2, -0.1, 0.1}));
  CHECK(desired_position(a, a.master_initial.translation, 0.25) == a.ee_initial.translation);
  CHECK((desired_position(a, a.master_initial.translation + Vector3d(0.02, 0, 0), 1.0) -
         (a.ee_initial.translation + Vector3d(0.02, 0, 0)))
            .norm() < 1e-15);
  CHECK((desired_position(a, a.master_initial.translation + Vector3d(0.04, 0, 0), 0.25) -
         (a.ee_initial.translation + Vector3d(0.01, 0, 0)))
            .norm() < 1e-15);

  const Vector3d d(0.03, -0.01, 0.02);
  const Vector3d once = desired_position(a, a.master_initial.translation + d, 0.25) - a.ee_initial.translation;
  const Vector3d twice = desired_position(a, a.master_initial.translation + 2 * d, 0.25) - a.ee_initial.translation;
  const Vector3d half_alpha = desired_position(a, a.master_initial.translation + d, 0.125) - a.ee_initial.translation;
  CHECK((twice - 2 * once).norm() < 1e-15);
  CHECK((half_alpha - 0.5 * once).norm() < 1e-15);
}

TEST_CASE("following with a static master keeps the anchored target") {
  std::mt19937_64 rng(3);
  const Posed master = random_pose(rng), ee = random_pose(rng);
  ArmTeleopState s = initial_arm_state(master, ee);
  CameraState cam;
  for (int i = 0; i < 5; ++i) {
    s = step_teleop(s, cam, master, 0.3, PedalState{}, TeleopConfig{}, false).arm;
    CHECK(s.mode == ArmMode::Following);
    CHECK(diff(s.ee_target, ee) < 1e-12);
    CHECK(s.grip_command == 0.3);
  }
}

TEST_CASE("clutch freezes the target and release resumes without a jump") {
  std::mt19937_64 rng(4);
  const Posed master0 = random_pose(rng), ee = random_pose(rng);
  ArmTeleopState s = initial_arm_state(master0, ee);
  CameraState cam;
  const TeleopConfig cfg;
  s = step_teleop(s, cam, master0, 1.0, PedalState{}, cfg, false).arm;
  s = step_teleop(s, cam, master0, 0.0, with({PedalId::Clutch}), cfg, false).arm;
  const Posed frozen = s.ee_target;
  Posed master = master0;
  master.translation += Vector3d(0.1, 0, 0);
  master.rotation = oracle::random_rotation(rng);
  s = step_teleop(s, cam, master, 0.0, with({PedalId::Clutch}), cfg, false).arm;
  CHECK(s.mode == ArmMode::Clutched);
  CHECK(diff(s.ee_target, frozen) == 0.0);
  CHECK(s.grip_command == 1.0);

  s = step_teleop(s, cam, master, 0.0, PedalState{}, cfg, false).arm;
  CHECK(s.mode == ArmMode::Following);
  CHECK(diff(s.ee_target, frozen) < 1e-12);

  master.translation += Vector3d(0.04, 0, 0);
  s = step_teleop(s, cam, master, 0.0, PedalState{}, cfg, false).arm;
  CHECK((s.ee_target.translation - (frozen.translation + Vector3d(0.01, 0, 0))).norm() < 1e-12);
}

TEST_CASE("camera driving moves the camera by alpha times the master translation") {
  const Posed master = Posed::Translation({0.0, -0.2, 1.0});
  const Posed ee = Posed::Translation({0.2, -0.15, 0.1});
  ArmTeleopState s = initial_arm_state(master, ee);
  CameraState cam;
  cam.pose = Posed{exp_so3<double>(Vector3d(3.0, 0.1, 0.0)), {0.2, 0.0, 0.45}};
  const Posed cam0 = cam.pose;
  const TeleopConfig cfg;

  TeleopStep st = step_teleop(s, cam, master, 0.0, with({PedalId::Camera, PedalId::Clutch}), cfg, true);
  CHECK(st.arm.mode == ArmMode::CameraDriving);
  Posed moved = master;
  const Vector3d delta(0.04, -0.02, 0.08);
  moved.translation += delta;
  st = step_teleop(st.arm, st.camera, moved, 0.0, with({PedalId::Camera}), cfg, true);
  CHECK((st.camera.pose.translation - (cam0.translation + cfg.motion_scale * delta)).norm() < 1e-12);
  CHECK((st.camera.pose.rotation - cam0.rotation).cwiseAbs().maxCoeff() < 1e-12);
  CHECK(diff(st.arm.ee_target, ee) == 0.0);

  // A master turn of 0.4 rad turns the camera by half that, about the same axis.
  Posed turned = moved;
  turned.rotation = exp_so3<double>(Vector3d(0.0, 0.0, 0.4)) * master.rotation;
  st = step_teleop(st.arm, st.camera, turned, 0.0, with({PedalId::Camera}), cfg, true);
  const Vector3d applied = log_so3<double>(st.camera.pose.rotation * cam0.rotation.transpose());
  CHECK((applied - Vector3d(0.0, 0.0, 0.2)).norm() < 1e-12);
}

TEST_CASE("an arm that does not drive the camera leaves it alone") {
  CameraState cam;
  cam.pose = Posed::Translation({0.1, 0.2, 0.3});
  const ArmTeleopState s = initial_arm_state(Posed::Identity(), Posed::Identity());
  const TeleopStep st =
      step_teleop(s, cam, Posed::Translation({1, 1, 1}), 0.0, with({PedalId::Camera}), TeleopConfig{}, false);
  CHECK(st.camera.pose.matrix() == cam.pose.matrix());
  CHECK(st.arm.mode == ArmMode::CameraDriving);
}

TEST_CASE("thirty degree toggle") {
  CameraState cam;
  cam.pose = Posed::Translation({0.1, 0.2, 0.3});
  CHECK(toggle_thirty_degree(cam, true).thirty_degree_mode);
  CHECK_FALSE(toggle_thirty_degree(toggle_thirty_degree(cam, true), true).thirty_degree_mode);
  CHECK_FALSE(toggle_thirty_degree(cam, false).thirty_degree_mode);
  CHECK(toggle_thirty_degree(cam, true).pose.matrix() == cam.pose.matrix());
}

TEST_CASE("config validation") {
  TeleopConfig c;
  CHECK_NOTHROW(c.validate());
  c.motion_scale = 1.5;
  CHECK_THROWS_AS(c.validate(), std::invalid_argument);
  c = TeleopConfig{};
  c.grip_close_threshold = -0.1;
  CHECK_THROWS_AS(c.validate(), std::invalid_argument);
}

}
