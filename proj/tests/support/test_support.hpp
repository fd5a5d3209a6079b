#ifndef URLSPREAD_TEST_SUPPORT_HPP
#define URLSPREAD_TEST_SUPPORT_HPP

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "urlspread/events.hpp"
#include "urlspread/hawkes_model.hpp"
#include "urlspread/rng.hpp"

namespace urlspread::test {

inline double uniform(Xoshiro256pp& rng, double lo, double hi) {
  return lo + (hi - lo) * rng.next_double();
}

inline std::vector<std::string> community_names(std::size_t k) {
  static const std::vector<std::string> names = {"A", "B", "C", "D", "E", "F"};
  return {names.begin(), names.begin() + k};
}

inline HawkesModel random_model(Xoshiro256pp& rng, std::size_t k) {
  HawkesModel model;
  model.communities = community_names(k);
  model.mu.resize(k);
  model.w.assign(k, std::vector<double>(k, 0.0));
  for (auto& m : model.mu) m = uniform(rng, 0.02, 0.5);
  for (auto& row : model.w)
    for (auto& v : row) v = uniform(rng, 0.0, 0.8 / static_cast<double>(k));
  model.omega = uniform(rng, 0.5, 2.0);
  return model;
}

inline ObservationWindows random_windows(Xoshiro256pp& rng, std::size_t k,
                                         double min_len = 20.0, double max_len = 200.0) {
  ObservationWindows windows;
  for (const auto& name : community_names(k)) {
    const double start = uniform(rng, 0.0, 10.0);
    windows[name] = {start, start + uniform(rng, min_len, max_len)};
  }
  return windows;
}

// Arbitrary events thrown uniformly into each community's window; not drawn
// from any model, which is exactly what conservation-style properties need.
inline Cascade random_cascade(Xoshiro256pp& rng, const ObservationWindows& windows,
                              std::size_t max_events, const std::string& url = "u") {
  std::vector<std::string> names;
  for (const auto& [name, w] : windows) names.push_back(name);
  const std::size_t n = 1 + rng.next_below(max_events);
  std::vector<Event> events;
  events.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    const auto& name = names[rng.next_below(names.size())];
    const Window& w = windows.at(name);
    events.push_back({url, name, uniform(rng, w.start_hours, w.end_hours)});
  }
  auto table = make_event_table(events, windows);
  auto cascades = build_cascades(table, windows);
  return cascades.front();
}

// Trapezoidal integral of the intensity over every community window, split at
// event times so each piece is smooth. Deliberately routed through the public
// intensity() evaluator: an independent check of the closed-form compensator.
inline double trapezoid_compensator(const HawkesModel& model, const Cascade& cascade,
                                    double max_step) {
  double total = 0.0;
  for (const auto& community : model.communities) {
    const Window& window = cascade.windows.at(community);
    std::vector<double> cuts{window.start_hours};
    for (const auto& ev : cascade.events)
      if (ev.t > window.start_hours && ev.t < window.end_hours) cuts.push_back(ev.t);
    cuts.push_back(window.end_hours);
    std::sort(cuts.begin(), cuts.end());
    for (std::size_t s = 0; s + 1 < cuts.size(); ++s) {
      const double a = cuts[s], b = cuts[s + 1];
      if (b <= a) continue;
      const auto steps = static_cast<std::size_t>(std::ceil((b - a) / max_step));
      const double h = (b - a) / static_cast<double>(steps);
      // Evaluate just inside the segment ends; lambda is right-discontinuous
      // at event times and the integrand is the left-continuous version.
      double sum = 0.5 * (intensity(model, cascade, std::nextafter(a, b), community) +
                          intensity(model, cascade, b, community));
      for (std::size_t step = 1; step < steps; ++step)
        sum += intensity(model, cascade, a + h * static_cast<double>(step), community);
      total += sum * h;
    }
  }
  return total;
}

// Two-sided Kolmogorov-Smirnov distance against Uniform(0,1).
inline double ks_uniform(std::vector<double> samples) {
  std::sort(samples.begin(), samples.end());
  const double n = static_cast<double>(samples.size());
  double d = 0.0;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const double hi = (static_cast<double>(i) + 1.0) / n - samples[i];
    const double lo = samples[i] - static_cast<double>(i) / n;
    d = std::max(d, std::max(hi, lo));
  }
  return d;
}

}  // namespace urlspread::test

#endif
