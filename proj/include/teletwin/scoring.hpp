#pragma once

#include <span>
#include <string>
#include <vector>

#include "teletwin/events.hpp"
#include "teletwin/pose.hpp"

namespace teletwin {

enum class PenaltyKind { Drop, ExcessiveForce, GlassBreak, OutOfView };
inline constexpr int kPenaltyKinds = 4;

const char *to_string(PenaltyKind k);
std::optional<PenaltyKind> penalty_for(EventKind k);

struct PenaltyWeights {
  double drop = 10.0;
  double excessive_force = 5.0;
  double glass_break = 15.0;
  double out_of_view = 2.0;
  /// Any of these event kinds fails the exercise outright.
  std::vector<EventKind> immediate_fail{EventKind::TowerDetach};

  double weight(PenaltyKind k) const;
  bool fails_immediately(EventKind k) const;
  /// Throws std::invalid_argument unless all weights are ≥ 0 and drop > excessive_force.
  void validate() const;
};

struct ScoreThresholds {
  double time_budget = 120.0;  // s
  double motion_budget = 3.0;  // m-equivalent
  double force_limit = 3.0;    // force-proxy units
  double time_slope = 0.5;     // points per second over budget
  double motion_slope = 20.0;  // points per m-equivalent over budget

  void validate() const;
};

inline constexpr double kEfficiencyMaxPoints = 50.0;

struct EfficiencyState {
  double elapsed = 0.0;      // s
  double motion_accum = 0.0; // m + beta·rad, summed over tracked frames
  std::vector<Posed> last_frames;
};

/// elapsed += dt; motion_accum += Σ |Δp| + beta·|Δangle| over frames matched
/// by position in the list. The first call only records the frames.
EfficiencyState accumulate(EfficiencyState state, std::span<const Posed> frames, double dt, double beta);

/// 50 within budget, then 50 − slope·overrun, floored at 0.
double efficiency_points(double value, double budget, double slope);

enum class ScoreStatus { Completed, Failed };

const char *to_string(ScoreStatus s);

struct PenaltyLine {
  PenaltyKind kind = PenaltyKind::Drop;
  int count = 0;
  double weight = 0.0;
  double deducted = 0.0;
};

struct ScoreBreakdown {
  double elapsed = 0.0;
  double motion = 0.0;
  double time_budget = 0.0;
  double motion_budget = 0.0;
  double total_time = 0.0;        // points
  double economy_of_motion = 0.0; // points
  std::vector<PenaltyLine> penalties; // only kinds that occurred, in PenaltyKind order
  ScoreStatus status = ScoreStatus::Failed;
  std::string failure_reason; // empty when completed
  double total = 0.0;
};

/// Score := Σ efficiency − Σ penalty deductions, floored at 0. Sessions
/// without a ScenarioComplete event, or with an immediate-fail event, are
/// Failed and score 0.
ScoreBreakdown finalize(const EfficiencyState &eff, std::span<const SessionEvent> events,
                        const ScoreThresholds &thresholds, const PenaltyWeights &weights);

struct ReportMetadata {
  std::string scenario_id;
  std::string session_id;
  std::int64_t start_ms = 0;
  std::int64_t end_ms = 0;
  std::int64_t ticks = 0;
};

/// Canonical JSON report: fixed key order, numbers rounded to 1e-6, trailing newline.
std::string export_report(const ScoreBreakdown &breakdown, const ReportMetadata &meta);

/// Rounds to six decimals; the serialized form of every real number.
double canonical_number(double v);

} // namespace teletwin
