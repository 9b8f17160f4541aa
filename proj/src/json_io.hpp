// Field-level JSON readers shared by the file-format loaders.
#pragma once

#include <initializer_list>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Core>

#include "json.hpp"
#include "teletwin/pose.hpp"

namespace teletwin::json_io {

using nlohmann::json;
using nlohmann::ordered_json;

enum class IssueKind { MissingField, UnknownKey, InvalidValue };

struct FieldIssue : std::runtime_error {
  FieldIssue(IssueKind k, std::string p, const std::string &msg) : std::runtime_error(msg), kind(k), path(std::move(p)) {}
  IssueKind kind;
  std::string path;
};

inline std::string join(const std::string &path, std::string_view key) {
  return path.empty() ? std::string(key) : path + "." + std::string(key);
}

inline std::string index(const std::string &path, std::size_t i) { return path + "[" + std::to_string(i) + "]"; }

inline void expect_object(const json &j, const std::string &path) {
  if (!j.is_object()) {
    throw FieldIssue(IssueKind::InvalidValue, path, "expected an object");
  }
}

inline void expect_array(const json &j, const std::string &path) {
  if (!j.is_array()) {
    throw FieldIssue(IssueKind::InvalidValue, path, "expected an array");
  }
}

/// Rejects any key outside `allowed`.
inline void check_keys(const json &obj, std::initializer_list<std::string_view> allowed, const std::string &path) {
  expect_object(obj, path);
  for (const auto &item : obj.items()) {
    bool known = false;
    for (std::string_view a : allowed) {
      known = known || item.key() == a;
    }
    if (!known) {
      throw FieldIssue(IssueKind::UnknownKey, join(path, item.key()), "unknown key");
    }
  }
}

inline const json &require(const json &obj, std::string_view key, const std::string &path) {
  const auto it = obj.find(key);
  if (it == obj.end()) {
    throw FieldIssue(IssueKind::MissingField, join(path, key), "missing required field");
  }
  return *it;
}

inline double number(const json &j, const std::string &path) {
  if (!j.is_number()) {
    throw FieldIssue(IssueKind::InvalidValue, path, "expected a number");
  }
  return j.get<double>();
}

inline double positive(const json &j, const std::string &path) {
  const double v = number(j, path);
  if (!(v > 0.0)) {
    throw FieldIssue(IssueKind::InvalidValue, path, "must be positive");
  }
  return v;
}

inline std::int64_t integer(const json &j, const std::string &path) {
  if (!j.is_number_integer()) {
    throw FieldIssue(IssueKind::InvalidValue, path, "expected an integer");
  }
  return j.get<std::int64_t>();
}

inline bool boolean(const json &j, const std::string &path) {
  if (!j.is_boolean()) {
    throw FieldIssue(IssueKind::InvalidValue, path, "expected true or false");
  }
  return j.get<bool>();
}

inline std::string string(const json &j, const std::string &path) {
  if (!j.is_string()) {
    throw FieldIssue(IssueKind::InvalidValue, path, "expected a string");
  }
  return j.get<std::string>();
}

template <int N> Eigen::Matrix<double, N, 1> vector(const json &j, const std::string &path) {
  if (!j.is_array() || j.size() != static_cast<std::size_t>(N)) {
    throw FieldIssue(IssueKind::InvalidValue, path, "expected an array of " + std::to_string(N) + " numbers");
  }
  Eigen::Matrix<double, N, 1> v;
  for (int i = 0; i < N; ++i) {
    v[i] = number(j[static_cast<std::size_t>(i)], index(path, static_cast<std::size_t>(i)));
  }
  return v;
}

inline std::vector<double> numbers(const json &j, const std::string &path) {
  expect_array(j, path);
  std::vector<double> out;
  for (std::size_t i = 0; i < j.size(); ++i) {
    out.push_back(number(j[i], index(path, i)));
  }
  return out;
}

inline std::vector<std::string> strings(const json &j, const std::string &path) {
  expect_array(j, path);
  std::vector<std::string> out;
  for (std::size_t i = 0; i < j.size(); ++i) {
    out.push_back(string(j[i], index(path, i)));
  }
  return out;
}

/// {"translation": [x,y,z], "rotation_vector": [rx,ry,rz]}; both keys optional.
inline Posed pose(const json &j, const std::string &path) {
  check_keys(j, {"translation", "rotation_vector"}, path);
  Posed p;
  if (j.contains("translation")) {
    p.translation = vector<3>(j["translation"], join(path, "translation"));
  }
  if (j.contains("rotation_vector")) {
    p.rotation = exp_so3<double>(vector<3>(j["rotation_vector"], join(path, "rotation_vector")));
  }
  return p;
}

template <typename Derived> ordered_json array(const Eigen::MatrixBase<Derived> &v) {
  ordered_json a = ordered_json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    a.push_back(v[i]);
  }
  return a;
}

inline ordered_json pose_json(const Posed &p) {
  return {{"translation", array(p.translation)}, {"rotation_vector", array(log_so3<double>(p.rotation))}};
}

} // namespace teletwin::json_io
