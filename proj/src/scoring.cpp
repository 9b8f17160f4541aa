#include "teletwin/scoring.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <stdexcept>

#include "json.hpp"

namespace teletwin {

const char *to_string(PenaltyKind k) {
  switch (k) {
  case PenaltyKind::Drop:
    return "drop";
  case PenaltyKind::ExcessiveForce:
    return "excessive_force";
  case PenaltyKind::GlassBreak:
    return "glass_break";
  case PenaltyKind::OutOfView:
    return "out_of_view";
  }
  return "unknown";
}

std::optional<PenaltyKind> penalty_for(EventKind k) {
  switch (k) {
  case EventKind::Drop:
    return PenaltyKind::Drop;
  case EventKind::ExcessiveForce:
    return PenaltyKind::ExcessiveForce;
  case EventKind::GlassBreak:
    return PenaltyKind::GlassBreak;
  case EventKind::OutOfView:
    return PenaltyKind::OutOfView;
  default:
    return std::nullopt;
  }
}

double PenaltyWeights::weight(PenaltyKind k) const {
  switch (k) {
  case PenaltyKind::Drop:
    return drop;
  case PenaltyKind::ExcessiveForce:
    return excessive_force;
  case PenaltyKind::GlassBreak:
    return glass_break;
  case PenaltyKind::OutOfView:
    return out_of_view;
  }
  return 0.0;
}

bool PenaltyWeights::fails_immediately(EventKind k) const {
  return std::find(immediate_fail.begin(), immediate_fail.end(), k) != immediate_fail.end();
}

void PenaltyWeights::validate() const {
  if (drop < 0.0 || excessive_force < 0.0 || glass_break < 0.0 || out_of_view < 0.0) {
    throw std::invalid_argument("weights: all penalty weights must be non-negative");
  }
  if (!(drop > excessive_force)) {
    throw std::invalid_argument("weights: drop must weigh more than excessive_force");
  }
}

void ScoreThresholds::validate() const {
  if (!(time_budget > 0.0) || !(motion_budget > 0.0) || !(force_limit > 0.0) || !(time_slope > 0.0) ||
      !(motion_slope > 0.0)) {
    throw std::invalid_argument("thresholds: all values must be positive");
  }
}

EfficiencyState accumulate(EfficiencyState state, std::span<const Posed> frames, double dt, double beta) {
  if (!(dt > 0.0)) {
    throw std::invalid_argument("accumulate: dt must be positive");
  }
  state.elapsed += dt;
  if (state.last_frames.size() == frames.size()) {
    for (std::size_t i = 0; i < frames.size(); ++i) {
      const Posed &prev = state.last_frames[i];
      const Posed &now = frames[i];
      state.motion_accum += (now.translation - prev.translation).norm() +
                            beta * rotation_angle<double>(now.rotation * prev.rotation.transpose());
    }
  }
  state.last_frames.assign(frames.begin(), frames.end());
  return state;
}

double efficiency_points(double value, double budget, double slope) {
  if (value <= budget) {
    return kEfficiencyMaxPoints;
  }
  return std::max(0.0, kEfficiencyMaxPoints - slope * (value - budget));
}

const char *to_string(ScoreStatus s) { return s == ScoreStatus::Completed ? "completed" : "failed"; }

ScoreBreakdown finalize(const EfficiencyState &eff, std::span<const SessionEvent> events,
                        const ScoreThresholds &thresholds, const PenaltyWeights &weights) {
  ScoreBreakdown b;
  b.elapsed = eff.elapsed;
  b.motion = eff.motion_accum;
  b.time_budget = thresholds.time_budget;
  b.motion_budget = thresholds.motion_budget;
  b.total_time = efficiency_points(eff.elapsed, thresholds.time_budget, thresholds.time_slope);
  b.economy_of_motion = efficiency_points(eff.motion_accum, thresholds.motion_budget, thresholds.motion_slope);

  std::array<int, kPenaltyKinds> counts{};
  bool completed = false;
  const SessionEvent *fatal = nullptr;
  for (const SessionEvent &e : events) {
    if (const auto p = penalty_for(e.kind)) {
      ++counts[static_cast<int>(*p)];
    }
    if (e.kind == EventKind::ScenarioComplete) {
      completed = true;
    }
    if (!fatal && weights.fails_immediately(e.kind)) {
      fatal = &e;
    }
  }

  double deductions = 0.0;
  for (int k = 0; k < kPenaltyKinds; ++k) {
    if (counts[k] == 0) {
      continue;
    }
    const auto kind = static_cast<PenaltyKind>(k);
    const double w = weights.weight(kind);
    b.penalties.push_back({kind, counts[k], w, w * counts[k]});
    deductions += w * counts[k];
  }

  if (fatal) {
    b.status = ScoreStatus::Failed;
    b.failure_reason = to_string(fatal->kind);
    b.total = 0.0;
  } else if (!completed) {
    b.status = ScoreStatus::Failed;
    b.failure_reason = "incomplete";
    b.total = 0.0;
  } else {
    b.status = ScoreStatus::Completed;
    b.total = std::max(0.0, b.total_time + b.economy_of_motion - deductions);
  }
  return b;
}

double canonical_number(double v) {
  const double r = std::round(v * 1e6) / 1e6;
  return r == 0.0 ? 0.0 : r;
}

std::string export_report(const ScoreBreakdown &breakdown, const ReportMetadata &meta) {
  using nlohmann::ordered_json;
  ordered_json doc;
  doc["format"] = "teletwin.report";
  doc["version"] = 1;
  doc["scenario_id"] = meta.scenario_id;
  doc["session_id"] = meta.session_id;
  doc["status"] = to_string(breakdown.status);
  doc["failure_reason"] = breakdown.failure_reason.empty() ? ordered_json(nullptr) : ordered_json(breakdown.failure_reason);
  doc["timestamps"] = {{"start_ms", meta.start_ms}, {"end_ms", meta.end_ms}, {"ticks", meta.ticks}};

  ordered_json efficiency;
  efficiency["total_time"] = {{"value_s", canonical_number(breakdown.elapsed)},
                              {"budget_s", canonical_number(breakdown.time_budget)},
                              {"points", canonical_number(breakdown.total_time)}};
  efficiency["economy_of_motion"] = {{"value_m", canonical_number(breakdown.motion)},
                                     {"budget_m", canonical_number(breakdown.motion_budget)},
                                     {"points", canonical_number(breakdown.economy_of_motion)}};
  doc["efficiency"] = efficiency;

  ordered_json penalties = ordered_json::array();
  for (const PenaltyLine &p : breakdown.penalties) {
    penalties.push_back({{"kind", to_string(p.kind)},
                         {"count", p.count},
                         {"weight", canonical_number(p.weight)},
                         {"deducted", canonical_number(p.deducted)}});
  }
  doc["penalties"] = penalties;
  doc["total"] = canonical_number(breakdown.total);
  return doc.dump(2) + "\n";
}

} // namespace teletwin
