#include "urlspread/hawkes_fit.hpp"

#include <algorithm>
#include <cmath>

namespace urlspread {

namespace {

// Candidate parents of event i: the index range [lo, tie_lo) where tie_lo is
// the first event of i's tie group (strict t_j < t_i) and lo the first event
// within the horizon.
struct ParentRanges {
  std::vector<std::size_t> lo;
  std::vector<std::size_t> tie_lo;
};

ParentRanges parent_ranges(const IndexedCascade& cascade, double horizon) {
  const std::size_t n = cascade.size();
  ParentRanges ranges;
  ranges.lo.resize(n);
  ranges.tie_lo.resize(n);
  const auto begin = cascade.t.begin();
  for (std::size_t i = 0; i < n; ++i) {
    ranges.lo[i] = static_cast<std::size_t>(
        std::lower_bound(begin, begin + i, cascade.t[i] - horizon) - begin);
    ranges.tie_lo[i] =
        static_cast<std::size_t>(std::lower_bound(begin, begin + i, cascade.t[i]) - begin);
  }
  return ranges;
}

// Accumulated E-step sufficient statistics; responsibilities themselves are
// only materialized when the caller asks for the full table.
struct EStepStats {
  std::vector<double> background_sum;            // per destination community
  std::vector<std::vector<double>> pair_sum;     // [source][destination]
  double p_sum = 0.0;                            // sum of all p_ij
  double p_dt_sum = 0.0;                         // sum of p_ij * (t_i - t_j)
  std::vector<std::size_t> zero_intensity_events;
};

EStepStats e_step(const HawkesModel& model, const IndexedCascade& cascade,
                  const ParentRanges& ranges, ResponsibilityTable* table) {
  const std::size_t n = cascade.size();
  const std::size_t k = model.size();
  EStepStats stats;
  stats.background_sum.assign(k, 0.0);
  stats.pair_sum.assign(k, std::vector<double>(k, 0.0));
  if (table) {
    table->background.assign(n, 0.0);
    table->parents.assign(n, {});
  }
  std::vector<double> weight;  // scratch: kernel weight per candidate parent
  for (std::size_t i = 0; i < n; ++i) {
    const int dst = cascade.community[i];
    const std::size_t lo = ranges.lo[i];
    const std::size_t hi = ranges.tie_lo[i];
    weight.assign(hi - lo, 0.0);
    double denom = model.mu[dst];
    for (std::size_t j = lo; j < hi; ++j) {
      const double dt = cascade.t[i] - cascade.t[j];
      const double wj =
          model.w[cascade.community[j]][dst] * model.omega * std::exp(-model.omega * dt);
      weight[j - lo] = wj;
      denom += wj;
    }
    if (denom <= 0.0) {
      stats.zero_intensity_events.push_back(i);
      continue;
    }
    const double p_background = model.mu[dst] / denom;
    stats.background_sum[dst] += p_background;
    if (table) table->background[i] = p_background;
    for (std::size_t j = lo; j < hi; ++j) {
      const double p = weight[j - lo] / denom;
      if (p == 0.0) continue;
      stats.pair_sum[cascade.community[j]][dst] += p;
      stats.p_sum += p;
      stats.p_dt_sum += p * (cascade.t[i] - cascade.t[j]);
      if (table) table->parents[i].emplace_back(j, p);
    }
  }
  return stats;
}

// Closed-form maximizers of the expected complete-data log-likelihood for mu
// and W, with omega held fixed. Returns true when the W clamp was hit.
bool m_step_mu_w(const EStepStats& stats, const IndexedCascade& cascade,
                 const FitConfig& config, HawkesModel& model) {
  const std::size_t k = model.size();
  for (std::size_t b = 0; b < k; ++b)
    model.mu[b] = stats.background_sum[b] / cascade.window_length(static_cast<int>(b));
  bool clamped = false;
  for (std::size_t a = 0; a < k; ++a) {
    // Expected kernel mass that a source event in a exposes to each
    // destination window; the denominator of the branching-weight update.
    std::vector<double> exposure(k, 0.0);
    for (std::size_t j = 0; j < cascade.size(); ++j) {
      if (cascade.community[j] != static_cast<int>(a)) continue;
      for (std::size_t b = 0; b < k; ++b)
        exposure[b] += kernel_mass_in_window(model.omega, cascade.t[j],
                                             cascade.window_start[b], cascade.window_end[b]);
    }
    for (std::size_t b = 0; b < k; ++b) {
      double w = exposure[b] > 0.0 ? stats.pair_sum[a][b] / exposure[b] : 0.0;
      if (w > config.max_w_clamp) {
        w = config.max_w_clamp;
        clamped = true;
      }
      model.w[a][b] = w;
    }
  }
  return clamped;
}

struct EmSweep {
  HawkesModel model;
  double log_lik = 0.0;
  bool clamped = false;
};

EmSweep em_sweep(const HawkesModel& model, const IndexedCascade& cascade,
                 const ParentRanges& ranges, const FitConfig& config) {
  EmSweep out;
  out.model = model;
  const EStepStats stats = e_step(model, cascade, ranges, nullptr);
  if (!stats.zero_intensity_events.empty())
    throw DegenerateCascadeError(stats.zero_intensity_events);
  out.clamped = m_step_mu_w(stats, cascade, config, out.model);
  out.log_lik = log_likelihood(out.model, cascade).value;

  if (config.learn_omega && stats.p_dt_sum > 0.0) {
    double proposal = stats.p_sum / stats.p_dt_sum;
    const double omega_old = out.model.omega;
    // Accept only if the observed log-likelihood does not drop; the closed
    // form ignores the window-edge dependence of the kernel mass on omega.
    for (int attempt = 0; attempt < 6 && proposal > 0.0; ++attempt) {
      HawkesModel candidate = out.model;
      candidate.omega = proposal;
      const double candidate_ll = log_likelihood(candidate, cascade).value;
      if (candidate_ll >= out.log_lik) {
        out.model = std::move(candidate);
        out.log_lik = candidate_ll;
        break;
      }
      proposal = std::sqrt(proposal * omega_old);
    }
  }
  return out;
}

}  // namespace

void FitConfig::validate() const {
  if (max_iters < 1) throw std::invalid_argument("fit config: max_iters must be >= 1");
  if (!(rel_ll_tolerance > 0.0))
    throw std::invalid_argument("fit config: rel_ll_tolerance must be > 0");
  if (!(omega_init > 0.0)) throw std::invalid_argument("fit config: omega_init must be > 0");
  if (!(init_w > 0.0)) throw std::invalid_argument("fit config: init_w must be > 0");
  if (!(parent_horizon_hours > 0.0))
    throw std::invalid_argument("fit config: parent_horizon_hours must be > 0");
  if (!(max_w_clamp > 0.0)) throw std::invalid_argument("fit config: max_w_clamp must be > 0");
}

ResponsibilityTable responsibilities(const HawkesModel& model, const IndexedCascade& cascade,
                                     double parent_horizon_hours) {
  const ParentRanges ranges = parent_ranges(cascade, parent_horizon_hours);
  ResponsibilityTable table;
  const EStepStats stats = e_step(model, cascade, ranges, &table);
  if (!stats.zero_intensity_events.empty())
    throw DegenerateCascadeError(stats.zero_intensity_events);
  return table;
}

ResponsibilityTable responsibilities(const HawkesModel& model, const Cascade& cascade,
                                     double parent_horizon_hours) {
  return responsibilities(model, IndexedCascade::make(model, cascade), parent_horizon_hours);
}

HawkesModel background_only_model(const Cascade& cascade, double omega) {
  HawkesModel model;
  for (const auto& [community, window] : cascade.windows)
    model.communities.push_back(community);
  const std::size_t k = model.communities.size();
  model.mu.assign(k, 0.0);
  model.w.assign(k, std::vector<double>(k, 0.0));
  model.omega = omega;
  const auto counts = cascade.counts_by_community();
  for (std::size_t i = 0; i < k; ++i) {
    const auto& community = model.communities[i];
    const double length = cascade.windows.at(community).length();
    auto it = counts.find(community);
    model.mu[i] = it == counts.end() ? 0.0 : static_cast<double>(it->second) / length;
  }
  return model;
}

EmStep em_step(const HawkesModel& model, const Cascade& cascade, const FitConfig& config) {
  config.validate();
  const IndexedCascade indexed = IndexedCascade::make(model, cascade);
  if (indexed.size() < config.min_events_to_fit) {
    HawkesModel bg = background_only_model(cascade, model.omega);
    const double ll = log_likelihood(bg, cascade).value;
    return {std::move(bg), ll};
  }
  const ParentRanges ranges = parent_ranges(indexed, config.parent_horizon_hours);
  EmSweep sweep = em_sweep(model, indexed, ranges, config);
  return {std::move(sweep.model), sweep.log_lik};
}

FittedModel fit(const Cascade& cascade, const FitConfig& config) {
  config.validate();
  if (cascade.events.empty()) throw std::invalid_argument("empty cascade");

  FittedModel fitted;
  if (cascade.events.size() < config.min_events_to_fit) {
    fitted.model = background_only_model(cascade, config.omega_init);
    const IndexedCascade indexed = IndexedCascade::make(fitted.model, cascade);
    fitted.log_lik = log_likelihood(fitted.model, indexed).value;
    fitted.responsibilities.background.assign(indexed.size(), 1.0);
    fitted.responsibilities.parents.assign(indexed.size(), {});
    fitted.flags.push_back("background_only");
    return fitted;
  }

  // Start halfway to the observed per-community rates with a small uniform
  // coupling; W = 0 exactly is a fixed point of the updates.
  HawkesModel model = background_only_model(cascade, config.omega_init);
  for (auto& m : model.mu) m *= 0.5;
  for (auto& row : model.w) std::fill(row.begin(), row.end(), config.init_w);

  const IndexedCascade indexed = IndexedCascade::make(model, cascade);
  const ParentRanges ranges = parent_ranges(indexed, config.parent_horizon_hours);

  double prev_ll = log_likelihood(model, indexed).value;
  bool converged = false;
  bool clamped = false;
  int iters = 0;
  for (int iter = 0; iter < config.max_iters; ++iter) {
    EmSweep sweep = em_sweep(model, indexed, ranges, config);
    model = std::move(sweep.model);
    clamped = clamped || sweep.clamped;
    fitted.ll_path.push_back(sweep.log_lik);
    ++iters;
    const double improvement =
        (sweep.log_lik - prev_ll) / std::max(1.0, std::abs(prev_ll));
    prev_ll = sweep.log_lik;
    if (improvement < config.rel_ll_tolerance) {
      converged = true;
      break;
    }
  }

  fitted.model = std::move(model);
  fitted.log_lik = prev_ll;
  fitted.iterations = iters;
  fitted.responsibilities =
      responsibilities(fitted.model, indexed, config.parent_horizon_hours);
  if (!converged) fitted.flags.push_back("max_iters");
  if (clamped) fitted.flags.push_back("w_clamped");
  if (spectral_radius(fitted.model) >= 1.0) fitted.flags.push_back("supercritical");
  return fitted;
}

}  // namespace urlspread
