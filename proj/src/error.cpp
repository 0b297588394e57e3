#include "lisim/error.hpp"

#include <array>
#include <utility>

namespace lisim {

const char* to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::invalid_input: return "invalid input";
    case ErrorKind::domain: return "domain error";
    case ErrorKind::degenerate: return "degenerate parameter";
    case ErrorKind::temperature_range: return "temperature out of range";
    case ErrorKind::singular: return "singular geometry";
    case ErrorKind::profile: return "profile validity";
    case ErrorKind::no_solution: return "no solution";
    case ErrorKind::capacity: return "capacity infeasible";
    case ErrorKind::window: return "window error";
    case ErrorKind::convergence: return "convergence failure";
    case ErrorKind::io: return "io error";
  }
  return "unknown";
}

std::string describe_flags(std::uint32_t flags) {
  static const std::array<std::pair<std::uint32_t, const char*>, 10> names{{
      {flag::ds_clamped, "ds_clamped"},
      {flag::css_clamped, "css_clamped"},
      {flag::bulk_saturated, "bulk_saturated"},
      {flag::ce_clamped, "ce_clamped"},
      {flag::ocp_extrapolated, "ocp_extrapolated"},
      {flag::smoothed, "smoothed"},
      {flag::corrected, "corrected"},
      {flag::correction_out_of_range, "correction_out_of_range"},
      {flag::correction_limited, "correction_limited"},
      {flag::model_error, "model_error"},
  }};
  std::string out;
  for (const auto& [bit, name] : names) {
    if (flags & bit) {
      if (!out.empty()) out += '|';
      out += name;
    }
  }
  return out;
}

}  // namespace lisim
