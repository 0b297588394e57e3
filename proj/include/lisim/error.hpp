#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace lisim {

enum class ErrorKind {
  invalid_input,
  domain,
  degenerate,
  temperature_range,
  singular,
  profile,
  no_solution,
  capacity,
  window,
  convergence,
  io,
};

const char* to_string(ErrorKind kind) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}
  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

// Per-step diagnostic bits carried in StepRecord::flags.
namespace flag {
inline constexpr std::uint32_t ds_clamped = 1u << 0;
inline constexpr std::uint32_t css_clamped = 1u << 1;
inline constexpr std::uint32_t bulk_saturated = 1u << 2;
inline constexpr std::uint32_t ce_clamped = 1u << 3;
inline constexpr std::uint32_t ocp_extrapolated = 1u << 4;
inline constexpr std::uint32_t smoothed = 1u << 5;
inline constexpr std::uint32_t corrected = 1u << 6;
inline constexpr std::uint32_t correction_out_of_range = 1u << 7;
inline constexpr std::uint32_t correction_limited = 1u << 8;
inline constexpr std::uint32_t model_error = 1u << 9;
}  // namespace flag

std::string describe_flags(std::uint32_t flags);

}  // namespace lisim
