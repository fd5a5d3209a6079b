#ifndef URLSPREAD_HAWKES_FIT_HPP
#define URLSPREAD_HAWKES_FIT_HPP

#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "urlspread/hawkes_model.hpp"

namespace urlspread {

// Knobs for the EM fit. Defaults are chosen so that a fresh FitConfig{} is
// the supported configuration: W starts away from the all-background fixed
// point, omega is learned per cascade, and the parent horizon truncates
// kernel mass only far below double precision at omega near 1/hour.
struct FitConfig {
  int max_iters = 200;
  double rel_ll_tolerance = 1e-6;
  bool learn_omega = true;      // false: omega stays fixed at omega_init
  double omega_init = 1.0;      // 1/hour
  double init_w = 0.1;          // uniform starting branching weight
  double parent_horizon_hours = 720.0;
  std::size_t min_events_to_fit = 2;
  double max_w_clamp = 10.0;

  void validate() const;  // throws std::invalid_argument
};

// Posterior parent assignment per event: background probability p_i0 plus a
// sparse map over candidate parents j (t_j < t_i, within the horizon).
// Each event's row sums to one.
struct ResponsibilityTable {
  std::vector<double> background;
  std::vector<std::vector<std::pair<std::size_t, double>>> parents;

  std::size_t size() const { return background.size(); }
};

// An event with zero intensity (mu = 0 and no candidate parent with positive
// weight) has no valid parent distribution.
struct DegenerateCascadeError : std::runtime_error {
  explicit DegenerateCascadeError(std::vector<std::size_t> evs)
      : std::runtime_error("degenerate cascade: " + std::to_string(evs.size()) +
                           " event(s) with zero intensity"),
        events(std::move(evs)) {}
  std::vector<std::size_t> events;
};

ResponsibilityTable responsibilities(const HawkesModel& model, const IndexedCascade& cascade,
                                     double parent_horizon_hours = 720.0);
ResponsibilityTable responsibilities(const HawkesModel& model, const Cascade& cascade,
                                     double parent_horizon_hours = 720.0);

struct EmStep {
  HawkesModel model;
  double log_lik = 0.0;
};

// One E+M sweep. The mu/W updates maximize the expected complete-data
// log-likelihood exactly; a learned-omega update is accepted only when it
// does not lower the observed log-likelihood (geometric backtracking toward
// the previous omega otherwise), so the returned log-likelihood never drops
// below the input model's. Cascades shorter than min_events_to_fit collapse
// to the background-only model mu_k = N_k/T_k, W = 0.
EmStep em_step(const HawkesModel& model, const Cascade& cascade, const FitConfig& config = {});

struct FittedModel {
  HawkesModel model;
  double log_lik = 0.0;
  int iterations = 0;
  ResponsibilityTable responsibilities;
  std::vector<std::string> flags;   // "background_only", "max_iters", "supercritical", "w_clamped"
  std::vector<double> ll_path;      // log-likelihood after each iteration
};

// EM fit of one cascade. Deterministic given (cascade, config). Stops when
// the relative log-likelihood improvement falls below rel_ll_tolerance or at
// max_iters. Throws std::invalid_argument on an empty cascade.
FittedModel fit(const Cascade& cascade, const FitConfig& config = {});

// mu_k = N_k / T_k, W = 0: the model used for cascades too short to fit.
HawkesModel background_only_model(const Cascade& cascade, double omega = 1.0);

}  // namespace urlspread

#endif
