#pragma once

#include <doctest.h>

#include <cmath>
#include <map>
#include <string>

#include "lisim/engine.hpp"
#include "lisim/init.hpp"
#include "lisim/ocp.hpp"
#include "lisim/param_file.hpp"

namespace lisim::test {

inline bool close_rel(double a, double b, double rel) {
  return std::abs(a - b) <= rel * std::max(std::abs(a), std::abs(b));
}

struct Cell {
  CellParameters p;
  OcpPair ocp;
  StoichiometryWindow w;
};

// Loaded once per preset per test binary.
inline const Cell& cell(const std::string& name) {
  static std::map<std::string, Cell> cache;
  auto it = cache.find(name);
  if (it == cache.end()) {
    CellParameters p = preset(name);
    OcpPair ocp = load_ocp_pair(p);
    const StoichiometryWindow w = solve_window(p, ocp);
    it = cache.emplace(name, Cell{std::move(p), std::move(ocp), w}).first;
  }
  return it->second;
}

}  // namespace lisim::test
