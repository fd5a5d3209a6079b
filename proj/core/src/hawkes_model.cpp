#include "urlspread/hawkes_model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>
#include <json.hpp>

namespace urlspread {

namespace {

using nlohmann::json;

}  // namespace

int HawkesModel::index_of(const std::string& community) const {
  auto it = std::find(communities.begin(), communities.end(), community);
  if (it == communities.end()) return -1;
  return static_cast<int>(it - communities.begin());
}

void HawkesModel::validate() const {
  const std::size_t k = communities.size();
  if (k == 0) throw std::invalid_argument("model: no communities");
  if (mu.size() != k) throw std::invalid_argument("model: mu size mismatch");
  if (w.size() != k) throw std::invalid_argument("model: W row count mismatch");
  for (const auto& row : w)
    if (row.size() != k) throw std::invalid_argument("model: W column count mismatch");
  for (double m : mu)
    if (!(m >= 0.0)) throw std::invalid_argument("model: mu must be >= 0");
  for (const auto& row : w)
    for (double v : row)
      if (!(v >= 0.0)) throw std::invalid_argument("model: W entries must be >= 0");
  if (!(omega > 0.0)) throw std::invalid_argument("model: omega must be > 0");
}

std::string model_to_json(const HawkesModel& model) {
  json obj;
  obj["communities"] = model.communities;
  obj["mu"] = model.mu;
  obj["W"] = model.w;
  obj["omega"] = model.omega;
  return obj.dump();
}

HawkesModel model_from_json(const std::string& text) {
  json obj = json::parse(text);
  HawkesModel model;
  model.communities = obj.at("communities").get<std::vector<std::string>>();
  model.mu = obj.at("mu").get<std::vector<double>>();
  model.w = obj.at("W").get<std::vector<std::vector<double>>>();
  model.omega = obj.at("omega").get<double>();
  model.validate();
  return model;
}

IndexedCascade IndexedCascade::make(const HawkesModel& model, const Cascade& cascade) {
  model.validate();
  IndexedCascade out;
  const std::size_t k = model.size();
  out.window_start.resize(k);
  out.window_end.resize(k);
  for (std::size_t i = 0; i < k; ++i) {
    auto it = cascade.windows.find(model.communities[i]);
    if (it == cascade.windows.end())
      throw std::invalid_argument("cascade has no window for model community '" +
                                  model.communities[i] + "'");
    if (!(it->second.start_hours < it->second.end_hours))
      throw std::invalid_argument("window start >= end for community '" +
                                  model.communities[i] + "'");
    out.window_start[i] = it->second.start_hours;
    out.window_end[i] = it->second.end_hours;
  }
  out.t.reserve(cascade.events.size());
  out.community.reserve(cascade.events.size());
  for (const auto& ev : cascade.events) {
    int idx = model.index_of(ev.community);
    if (idx < 0)
      throw std::invalid_argument("community not in model: " + ev.community);
    out.t.push_back(ev.t);
    out.community.push_back(idx);
  }
  if (!std::is_sorted(out.t.begin(), out.t.end()))
    throw std::invalid_argument("cascade events are not time-sorted");
  return out;
}

double intensity(const HawkesModel& model, const Cascade& cascade, double t,
                 const std::string& community) {
  model.validate();
  int k = model.index_of(community);
  if (k < 0) throw std::invalid_argument("community not in model: " + community);
  double rate = model.mu[k];
  for (const auto& ev : cascade.events) {
    if (!(ev.t < t)) continue;
    int src = model.index_of(ev.community);
    if (src < 0) throw std::invalid_argument("community not in model: " + ev.community);
    rate += model.w[src][k] * model.omega * std::exp(-model.omega * (t - ev.t));
  }
  return rate;
}

std::vector<double> event_intensities(const HawkesModel& model,
                                      const IndexedCascade& cascade) {
  const std::size_t n = cascade.size();
  const std::size_t k = model.size();
  std::vector<double> lambdas(n);
  // decayed[a] = sum over strictly earlier events in a of exp(-omega (t - t_j)).
  std::vector<double> decayed(k, 0.0);
  std::size_t i = 0;
  double prev_t = 0.0;
  bool have_prev = false;
  while (i < n) {
    const double t = cascade.t[i];
    if (have_prev && t > prev_t) {
      const double decay = std::exp(-model.omega * (t - prev_t));
      for (auto& d : decayed) d *= decay;
    }
    // Events in a tie group share the same history and exclude each other.
    std::size_t group_end = i;
    while (group_end < n && cascade.t[group_end] == t) ++group_end;
    for (std::size_t j = i; j < group_end; ++j) {
      const int dst = cascade.community[j];
      double excitation = 0.0;
      for (std::size_t a = 0; a < k; ++a) excitation += model.w[a][dst] * decayed[a];
      lambdas[j] = model.mu[dst] + model.omega * excitation;
    }
    for (std::size_t j = i; j < group_end; ++j) decayed[cascade.community[j]] += 1.0;
    prev_t = t;
    have_prev = true;
    i = group_end;
  }
  return lambdas;
}

std::vector<double> event_intensities_naive(const HawkesModel& model,
                                            const IndexedCascade& cascade) {
  const std::size_t n = cascade.size();
  std::vector<double> lambdas(n);
  for (std::size_t i = 0; i < n; ++i) {
    double rate = model.mu[cascade.community[i]];
    for (std::size_t j = 0; j < n; ++j) {
      if (!(cascade.t[j] < cascade.t[i])) continue;
      rate += model.w[cascade.community[j]][cascade.community[i]] * model.omega *
              std::exp(-model.omega * (cascade.t[i] - cascade.t[j]));
    }
    lambdas[i] = rate;
  }
  return lambdas;
}

double kernel_mass_in_window(double omega, double event_time, double window_start,
                             double window_end) {
  if (event_time >= window_end) return 0.0;
  const double tail = std::exp(-omega * (window_end - event_time));
  if (event_time >= window_start) return 1.0 - tail;
  // Source fired before the window opened; only the in-window slice counts.
  return std::exp(-omega * (window_start - event_time)) - tail;
}

std::vector<double> compensator_by_community(const HawkesModel& model,
                                             const IndexedCascade& cascade) {
  const std::size_t k = model.size();
  std::vector<double> total(k);
  for (std::size_t b = 0; b < k; ++b)
    total[b] = model.mu[b] * cascade.window_length(static_cast<int>(b));
  for (std::size_t j = 0; j < cascade.size(); ++j) {
    const int src = cascade.community[j];
    for (std::size_t b = 0; b < k; ++b) {
      total[b] += model.w[src][b] * kernel_mass_in_window(model.omega, cascade.t[j],
                                                          cascade.window_start[b],
                                                          cascade.window_end[b]);
    }
  }
  return total;
}

double compensator(const HawkesModel& model, const IndexedCascade& cascade) {
  double sum = 0.0;
  for (double v : compensator_by_community(model, cascade)) sum += v;
  return sum;
}

LogLikelihood log_likelihood(const HawkesModel& model, const IndexedCascade& cascade) {
  for (std::size_t i = 0; i < cascade.size(); ++i) {
    const int c = cascade.community[i];
    if (cascade.t[i] < cascade.window_start[c] || cascade.t[i] > cascade.window_end[c])
      throw std::invalid_argument("event outside its community window");
  }
  LogLikelihood result;
  const auto lambdas = event_intensities(model, cascade);
  double log_sum = 0.0;
  for (std::size_t i = 0; i < lambdas.size(); ++i) {
    if (lambdas[i] <= 0.0) {
      result.zero_intensity_events.push_back(i);
    } else {
      log_sum += std::log(lambdas[i]);
    }
  }
  if (result.degenerate()) {
    result.value = -std::numeric_limits<double>::infinity();
    return result;
  }
  result.value = log_sum - compensator(model, cascade);
  return result;
}

LogLikelihood log_likelihood(const HawkesModel& model, const Cascade& cascade) {
  return log_likelihood(model, IndexedCascade::make(model, cascade));
}

double spectral_radius(const HawkesModel& model) {
  const auto k = static_cast<Eigen::Index>(model.size());
  Eigen::MatrixXd m(k, k);
  for (Eigen::Index i = 0; i < k; ++i)
    for (Eigen::Index j = 0; j < k; ++j) m(i, j) = model.w[i][j];
  if (k == 1) return std::abs(m(0, 0));
  Eigen::EigenSolver<Eigen::MatrixXd> solver(m, /*computeEigenvectors=*/false);
  return solver.eigenvalues().cwiseAbs().maxCoeff();
}

std::vector<double> stationary_rates(const HawkesModel& model) {
  model.validate();
  const double rho = spectral_radius(model);
  if (rho >= 1.0) throw SupercriticalError(rho);
  const auto k = static_cast<Eigen::Index>(model.size());
  Eigen::MatrixXd a = Eigen::MatrixXd::Identity(k, k);
  for (Eigen::Index i = 0; i < k; ++i)
    for (Eigen::Index j = 0; j < k; ++j) a(i, j) -= model.w[j][i];  // I - W^T
  Eigen::VectorXd mu(k);
  for (Eigen::Index i = 0; i < k; ++i) mu(i) = model.mu[i];
  Eigen::VectorXd r = a.partialPivLu().solve(mu);
  return std::vector<double>(r.data(), r.data() + k);
}

}  // namespace urlspread
