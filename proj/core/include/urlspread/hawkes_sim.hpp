#ifndef URLSPREAD_HAWKES_SIM_HPP
#define URLSPREAD_HAWKES_SIM_HPP

#include <cstdint>
#include <string>

#include "urlspread/hawkes_model.hpp"

namespace urlspread {

struct SimSpec {
  HawkesModel model;
  ObservationWindows windows;
  std::uint64_t seed = 0;
  std::size_t max_events = 1'000'000;
  std::string url_id = "sim";
};

struct SimResult {
  Cascade cascade;
  bool truncated = false;  // hit max_events before the horizon
};

// Samples one cascade by thinning: propose from the current total intensity
// (a valid bound until the next event or window boundary, because the
// exponential kernel only decays), accept with the intensity ratio, and pick
// the community with the same uniform draw rescaled. The draw sequence is
// fixed, so a SimSpec determines the cascade byte-for-byte via the
// xoshiro256++ stream. Requires a subcritical model; throws
// SupercriticalError otherwise.
SimResult simulate(const SimSpec& spec);

}  // namespace urlspread

#endif
