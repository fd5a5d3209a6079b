#ifndef URLSPREAD_HAWKES_MODEL_HPP
#define URLSPREAD_HAWKES_MODEL_HPP

#include <stdexcept>
#include <string>
#include <vector>

#include "urlspread/events.hpp"

namespace urlspread {

// Multivariate Hawkes process with a shared exponential kernel.
//
//   lambda_k(t) = mu[k] + sum_{i: t_i < t} w[c_i][k] * omega * exp(-omega (t - t_i))
//
// The kernel omega*exp(-omega s) integrates to one, so w[a][b] is directly
// the expected number of direct child events in community b per event in
// community a (row = source, column = destination). Rates are events/hour,
// omega is 1/hour. Immutable in practice: all operations take it by const
// reference and are safe to call concurrently.
struct HawkesModel {
  std::vector<std::string> communities;
  std::vector<double> mu;
  std::vector<std::vector<double>> w;
  double omega = 1.0;

  std::size_t size() const { return communities.size(); }
  int index_of(const std::string& community) const;  // -1 when absent

  // Checks shape and sign constraints; throws std::invalid_argument.
  void validate() const;
};

std::string model_to_json(const HawkesModel& model);
HawkesModel model_from_json(const std::string& text);

struct SupercriticalError : std::runtime_error {
  explicit SupercriticalError(double rho)
      : std::runtime_error("supercritical model: spectral radius " + std::to_string(rho)),
        spectral_radius(rho) {}
  double spectral_radius;
};

// Cascade bound to a model's community ordering: event times plus community
// indices, windows as parallel arrays. Built once, shared by everything that
// iterates events.
struct IndexedCascade {
  std::vector<double> t;         // sorted ascending
  std::vector<int> community;    // index into model.communities
  std::vector<double> window_start;  // per community index
  std::vector<double> window_end;

  std::size_t size() const { return t.size(); }
  double window_length(int k) const { return window_end[k] - window_start[k]; }

  // Throws std::invalid_argument when an event's community is not in the
  // model or a model community has no window in the cascade.
  static IndexedCascade make(const HawkesModel& model, const Cascade& cascade);
};

// Conditional intensity of community k at time t, using strictly earlier
// events only (left-continuous). Throws std::invalid_argument for a
// community not in the model.
double intensity(const HawkesModel& model, const Cascade& cascade, double t,
                 const std::string& community);

// All per-event intensities lambda_{c_i}(t_i) in one O(N*K) sweep; events at
// identical times do not see each other.
std::vector<double> event_intensities(const HawkesModel& model, const IndexedCascade& cascade);

// Same, by direct O(N^2) summation. Exists as an independent check of the
// recursive sweep.
std::vector<double> event_intensities_naive(const HawkesModel& model,
                                            const IndexedCascade& cascade);

// Mass of the unit-mass kernel started at event_time that falls inside
// [window_start, window_end]; zero when the event is past the window end.
double kernel_mass_in_window(double omega, double event_time, double window_start,
                             double window_end);

// Integral of lambda_k over community k's window, summed over k.
double compensator(const HawkesModel& model, const IndexedCascade& cascade);
std::vector<double> compensator_by_community(const HawkesModel& model,
                                             const IndexedCascade& cascade);

struct LogLikelihood {
  double value = 0.0;
  // Events whose intensity vanished (mu = 0 and no prior excitation); when
  // non-empty, value is -inf and the result is degenerate.
  std::vector<std::size_t> zero_intensity_events;

  bool degenerate() const { return !zero_intensity_events.empty(); }
};

LogLikelihood log_likelihood(const HawkesModel& model, const IndexedCascade& cascade);
LogLikelihood log_likelihood(const HawkesModel& model, const Cascade& cascade);

// Spectral radius of the branching matrix w.
double spectral_radius(const HawkesModel& model);

// Long-run event rates r = mu + W^T r for a subcritical model; throws
// SupercriticalError when the spectral radius reaches 1.
std::vector<double> stationary_rates(const HawkesModel& model);

}  // namespace urlspread

#endif
