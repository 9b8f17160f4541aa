#include <doctest.h>

#include <numbers>
#include <random>

#include "oracles.hpp"
#include "teletwin/pose.hpp"

using namespace teletwin;
using Eigen::Vector3d;

namespace {
constexpr double kPi = std::numbers::pi;
}

TEST_SUITE("pose") {

TEST_CASE("composition with identity and associativity") {
  std::mt19937_64 rng(11);
  for (int i = 0; i < 50; ++i) {
    const Posed a{oracle::random_rotation(rng), Vector3d::Random()};
    const Posed b{oracle::random_rotation(rng), Vector3d::Random()};
    const Posed c{oracle::random_rotation(rng), Vector3d::Random()};
    const Posed ab_c = (a * b) * c;
    const Posed a_bc = a * (b * c);
    CHECK((ab_c.matrix() - a_bc.matrix()).cwiseAbs().maxCoeff() < 1e-12);
    CHECK((a * Posed::Identity()).matrix() == a.matrix());
    CHECK(((a * a.inverse()).matrix() - Eigen::Matrix4d::Identity()).cwiseAbs().maxCoeff() < 1e-12);
    CHECK(orthonormality_error<double>(ab_c.rotation) < 1e-9);
  }
}

TEST_CASE("homogeneous matrix round trip") {
  std::mt19937_64 rng(3);
  const Posed p{oracle::random_rotation(rng), {0.1, -0.2, 0.3}};
  const Posed q = Posed::FromMatrix(p.matrix());
  CHECK(q.matrix() == p.matrix());
  CHECK(p.matrix()(3, 3) == 1.0);
}

TEST_CASE("exp and log agree with AngleAxis") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> angle(1e-4, kPi - 1e-3);
  for (int i = 0; i < 200; ++i) {
    const Vector3d axis = Vector3d::Random().normalized();
    const double a = angle(rng);
    const Eigen::Matrix3d expected = Eigen::AngleAxisd(a, axis).toRotationMatrix();
    CHECK((exp_so3<double>(axis * a) - expected).cwiseAbs().maxCoeff() < 1e-12);
    CHECK((log_so3<double>(expected) - axis * a).norm() < 1e-9);
  }
}

TEST_CASE("log near identity and near pi") {
  CHECK(log_so3<double>(Eigen::Matrix3d::Identity()).norm() == 0.0);
  const Vector3d tiny(1e-9, -2e-9, 3e-9);
  CHECK((log_so3<double>(exp_so3<double>(tiny)) - tiny).norm() < 1e-15);
  const Vector3d axis = Vector3d(1.0, 2.0, -0.5).normalized();
  const double a = kPi - 1e-7;
  CHECK((log_so3<double>(exp_so3<double>(axis * a)) - axis * a).norm() < 1e-6);
}

TEST_CASE("rotation by exactly pi picks the axis with positive leading component") {
  const Eigen::Matrix3d rz = exp_so3<double>(Vector3d(0, 0, kPi));
  const Vector3d v = log_so3<double>(rz);
  CHECK(v.isApprox(Vector3d(0, 0, kPi), 1e-12));

  const Vector3d axis = Vector3d(-1.0, 1.0, 0.0).normalized();
  const Vector3d w = log_so3<double>(Eigen::AngleAxisd(kPi, axis).toRotationMatrix());
  // Both ±axis describe the same rotation; the positive-leading one is reported.
  CHECK(w.isApprox(-axis * kPi, 1e-9));
  CHECK(w.norm() == doctest::Approx(kPi));
}

TEST_CASE("pose vector round trip on the principal branch") {
  std::mt19937_64 rng(9);
  for (int i = 0; i < 100; ++i) {
    const Posed p{oracle::random_rotation(rng), Vector3d::Random()};
    if (rotation_angle<double>(p.rotation) > kPi - 1e-6) {
      continue;
    }
    const Posed q = from_pose_vector<double>(to_pose_vector(p));
    CHECK((q.matrix() - p.matrix()).cwiseAbs().maxCoeff() < 1e-12);
  }
}

TEST_CASE("pose_error examples") {
  std::mt19937_64 rng(4);
  const Posed current{oracle::random_rotation(rng), {0.2, 0.1, -0.3}};
  CHECK(pose_error(current, current).norm() < 1e-15);

  Posed shifted = current;
  shifted.translation += Vector3d(0.1, 0, 0);
  PoseVector<double> expected;
  expected << 0.1, 0, 0, 0, 0, 0;
  CHECK((pose_error(shifted, current) - expected).norm() < 1e-15);

  Posed turned = current;
  turned.rotation = Eigen::AngleAxisd(kPi / 2, Vector3d::UnitZ()).toRotationMatrix() * current.rotation;
  const PoseVector<double> e = pose_error(turned, current);
  CHECK(e.head<3>().norm() == 0.0);
  CHECK((e.tail<3>() - Vector3d(0, 0, kPi / 2)).norm() < 1e-12);
}

TEST_CASE("orthonormalize repairs drift and keeps handedness") {
  std::mt19937_64 rng(8);
  const Eigen::Matrix3d r = oracle::random_rotation(rng);
  Eigen::Matrix3d noisy = r + 1e-6 * Eigen::Matrix3d::Random();
  const Eigen::Matrix3d fixed = orthonormalize<double>(noisy);
  CHECK(orthonormality_error<double>(fixed) < 1e-14);
  CHECK(fixed.determinant() == doctest::Approx(1.0));
  CHECK((fixed - r).cwiseAbs().maxCoeff() < 1e-5);
  CHECK(orthonormalize<double>(-Eigen::Matrix3d::Identity()).determinant() == doctest::Approx(1.0));
}

TEST_CASE("quaternion conversion is w-first and sign-normalized") {
  const Eigen::Matrix3d r = rotation_from_quaternion(0.0, 1.0, 0.0, 0.0);
  CHECK((r - Eigen::Vector3d(1, -1, -1).asDiagonal().toDenseMatrix()).cwiseAbs().maxCoeff() < 1e-15);
  const Eigen::Vector4d q = quaternion_wxyz<double>(Eigen::AngleAxisd(0.3, Vector3d::UnitY()).toRotationMatrix());
  CHECK(q[0] == doctest::Approx(std::cos(0.15)));
  CHECK(q[2] == doctest::Approx(std::sin(0.15)));
  const Eigen::Vector4d flipped = quaternion_wxyz<double>(rotation_from_quaternion(-q[0], -q[1], -q[2], -q[3]));
  CHECK((flipped - q).norm() < 1e-12);
}

TEST_CASE("wrap_angle maps into (-pi, pi]") {
  CHECK(wrap_angle(kPi) == kPi);
  CHECK(wrap_angle(-kPi) == doctest::Approx(kPi));
  CHECK(wrap_angle(3 * kPi / 2) == doctest::Approx(-kPi / 2));
  CHECK(wrap_angle(0.5) == 0.5);
  CHECK(wrap_angle(-7.0) == doctest::Approx(-7.0 + 2 * kPi));
}

TEST_CASE("float instantiation") {
  const Pose<float> p{exp_so3<float>(Eigen::Vector3f(0.1f, 0.2f, 0.3f)), Eigen::Vector3f(1.f, 2.f, 3.f)};
  CHECK(orthonormality_error<float>(p.rotation) < 1e-5f);
  CHECK((p.cast<double>().translation - Vector3d(1, 2, 3)).norm() == 0.0);
}

}
