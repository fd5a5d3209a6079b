#include "urlspread/hawkes_sim.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "urlspread/rng.hpp"

namespace urlspread {

namespace {

double exp_draw(Xoshiro256pp& rng) {
  // -log(1-u) with u in [0,1): argument stays in (0,1].
  return -std::log1p(-rng.next_double());
}

}  // namespace

SimResult simulate(const SimSpec& spec) {
  spec.model.validate();
  if (spec.windows.empty()) throw std::invalid_argument("simulate: no windows");
  const double rho = spectral_radius(spec.model);
  if (rho >= 1.0) throw SupercriticalError(rho);

  const std::size_t k = spec.model.size();
  std::vector<double> window_start(k), window_end(k);
  for (std::size_t i = 0; i < k; ++i) {
    auto it = spec.windows.find(spec.model.communities[i]);
    if (it == spec.windows.end())
      throw std::invalid_argument("simulate: no window for community '" +
                                  spec.model.communities[i] + "'");
    if (!(it->second.start_hours < it->second.end_hours))
      throw std::invalid_argument("simulate: window start >= end for '" +
                                  spec.model.communities[i] + "'");
    window_start[i] = it->second.start_hours;
    window_end[i] = it->second.end_hours;
  }

  // Window boundaries split time into segments with a fixed active set, so
  // the decaying-intensity bound stays valid inside each segment.
  std::vector<double> boundaries;
  boundaries.reserve(2 * k);
  boundaries.insert(boundaries.end(), window_start.begin(), window_start.end());
  boundaries.insert(boundaries.end(), window_end.begin(), window_end.end());
  std::sort(boundaries.begin(), boundaries.end());
  boundaries.erase(std::unique(boundaries.begin(), boundaries.end()), boundaries.end());

  Xoshiro256pp rng(spec.seed);
  std::vector<double> decayed(k, 0.0);  // per-source sum of exp(-omega (t - t_j))
  std::vector<double> lambda(k, 0.0);
  SimResult result;
  result.cascade.url_id = spec.url_id;
  result.cascade.windows = spec.windows;

  double t = boundaries.front();
  const double horizon = boundaries.back();

  auto decay_to = [&](double target) {
    if (target <= t) return;
    const double factor = std::exp(-spec.model.omega * (target - t));
    for (auto& d : decayed) d *= factor;
    t = target;
  };
  auto intensities_at = [&](double time, double& total) {
    total = 0.0;
    for (std::size_t b = 0; b < k; ++b) {
      if (time < window_start[b] || time >= window_end[b]) {
        lambda[b] = 0.0;
        continue;
      }
      double excitation = 0.0;
      for (std::size_t a = 0; a < k; ++a) excitation += spec.model.w[a][b] * decayed[a];
      lambda[b] = spec.model.mu[b] + spec.model.omega * excitation;
      total += lambda[b];
    }
  };

  std::size_t boundary_idx = 1;
  while (t < horizon) {
    const double segment_end =
        boundary_idx < boundaries.size() ? boundaries[boundary_idx] : horizon;
    double bound;
    intensities_at(t, bound);
    while (t < segment_end) {
      if (bound <= 0.0) break;
      const double step = exp_draw(rng) / bound;
      if (t + step >= segment_end) break;
      decay_to(t + step);
      double total;
      intensities_at(t, total);
      const double u = rng.next_double() * bound;
      if (u < total) {
        // Accepted; u is uniform on [0, total), reuse it to pick the community.
        double cum = 0.0;
        std::size_t chosen = k - 1;
        for (std::size_t b = 0; b < k; ++b) {
          cum += lambda[b];
          if (u < cum) {
            chosen = b;
            break;
          }
        }
        result.cascade.events.push_back({spec.url_id, spec.model.communities[chosen], t});
        decayed[chosen] += 1.0;
        if (result.cascade.events.size() >= spec.max_events) {
          result.truncated = true;
          return result;
        }
        intensities_at(t, total);
      }
      bound = total;
    }
    decay_to(segment_end);
    ++boundary_idx;
  }
  return result;
}

}  // namespace urlspread
