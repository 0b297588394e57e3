#include "lisim/param_file.hpp"

#include <yaml-cpp/yaml.h>

#include <cstdlib>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

#include "lisim/error.hpp"

#ifndef LISIM_DEFAULT_DATA_DIR
#define LISIM_DEFAULT_DATA_DIR "data"
#endif

namespace lisim {

namespace {

using Setter = std::function<void(CellParameters&, const YAML::Node&)>;

double as_double(const YAML::Node& n, const std::string& key) {
  try {
    return n.as<double>();
  } catch (const YAML::Exception&) {
    throw Error(ErrorKind::invalid_input, "parameter '" + key + "' is not a number");
  }
}

std::map<std::string, Setter> flat_keys(const std::string& section) {
  auto field = [](auto getter) {
    return Setter([getter](CellParameters& p, const YAML::Node& n) {
      getter(p) = as_double(n, "value");
    });
  };
  std::map<std::string, Setter> m;
  if (section == "geometry") {
    m["mass"] = field([](CellParameters& p) -> double& { return p.mass; });
    m["L_neg"] = field([](CellParameters& p) -> double& { return p.neg.thickness; });
    m["L_sep"] = field([](CellParameters& p) -> double& { return p.sep.thickness; });
    m["L_pos"] = field([](CellParameters& p) -> double& { return p.pos.thickness; });
    m["A_neg"] = field([](CellParameters& p) -> double& { return p.neg.area; });
    m["A_sep"] = field([](CellParameters& p) -> double& { return p.sep.area; });
    m["A_pos"] = field([](CellParameters& p) -> double& { return p.pos.area; });
    m["A_surface"] = field([](CellParameters& p) -> double& { return p.surface_area; });
  } else if (section == "transport") {
    m["sigma_neg"] = field([](CellParameters& p) -> double& { return p.neg.sigma; });
    m["sigma_pos"] = field([](CellParameters& p) -> double& { return p.pos.sigma; });
    m["t_plus"] = field([](CellParameters& p) -> double& { return p.t_plus; });
    m["R_contact"] = field([](CellParameters& p) -> double& { return p.contact_resistance; });
    m["R_film_neg"] = field([](CellParameters& p) -> double& { return p.neg.film_resistance; });
    m["R_film_pos"] = field([](CellParameters& p) -> double& { return p.pos.film_resistance; });
  } else if (section == "material") {
    m["Rs_neg"] = field([](CellParameters& p) -> double& { return p.neg.particle_radius; });
    m["Rs_pos"] = field([](CellParameters& p) -> double& { return p.pos.particle_radius; });
    m["as_neg"] = field([](CellParameters& p) -> double& { return p.neg.specific_area; });
    m["as_pos"] = field([](CellParameters& p) -> double& { return p.pos.specific_area; });
    m["cs_max_neg"] = field([](CellParameters& p) -> double& { return p.neg.cs_max; });
    m["cs_max_pos"] = field([](CellParameters& p) -> double& { return p.pos.cs_max; });
    m["eps_e_neg"] = field([](CellParameters& p) -> double& { return p.neg.eps_e; });
    m["eps_e_sep"] = field([](CellParameters& p) -> double& { return p.sep.eps_e; });
    m["eps_e_pos"] = field([](CellParameters& p) -> double& { return p.pos.eps_e; });
    m["eps_s_neg"] = field([](CellParameters& p) -> double& { return p.neg.eps_s; });
    m["eps_s_pos"] = field([](CellParameters& p) -> double& { return p.pos.eps_s; });
    m["ce0"] = field([](CellParameters& p) -> double& { return p.ce0; });
    m["ocp_neg"] = [](CellParameters& p, const YAML::Node& n) { p.neg.ocp = n.as<std::string>(); };
    m["ocp_pos"] = [](CellParameters& p, const YAML::Node& n) { p.pos.ocp = n.as<std::string>(); };
  } else if (section == "thermal") {
    m["Cp"] = field([](CellParameters& p) -> double& { return p.heat_capacity; });
    m["hc"] = field([](CellParameters& p) -> double& { return p.heat_transfer; });
  } else if (section == "constants") {
    m["F"] = field([](CellParameters& p) -> double& { return p.faraday; });
    m["R"] = field([](CellParameters& p) -> double& { return p.gas_constant; });
    m["bruggeman"] = field([](CellParameters& p) -> double& { return p.bruggeman; });
    m["ks_neg"] = field([](CellParameters& p) -> double& { return p.neg.ks; });
    m["ks_pos"] = field([](CellParameters& p) -> double& { return p.pos.ks; });
    m["alpha_a"] = field([](CellParameters& p) -> double& { return p.alpha_a; });
    m["alpha_c"] = field([](CellParameters& p) -> double& { return p.alpha_c; });
  } else if (section == "operating") {
    m["V_min"] = field([](CellParameters& p) -> double& { return p.operating.v_min; });
    m["V_max"] = field([](CellParameters& p) -> double& { return p.operating.v_max; });
    m["capacity_mAh"] =
        field([](CellParameters& p) -> double& { return p.operating.capacity_mAh; });
  }
  return m;
}

void apply_varying_electrode(VaryingParamCoeffs& v, const YAML::Node& node, const std::string& side) {
  if (!node.IsMap()) throw Error(ErrorKind::invalid_input, "varying." + side + " must be a map");
  const std::map<std::string, double VaryingParamCoeffs::*> keys{
      {"Ea_kDs", &VaryingParamCoeffs::Ea_kDs}, {"Ea_bDs", &VaryingParamCoeffs::Ea_bDs},
      {"kDs_ref", &VaryingParamCoeffs::kDs_ref}, {"bDs_ref", &VaryingParamCoeffs::bDs_ref},
      {"Ea_kr", &VaryingParamCoeffs::Ea_kr},     {"kr_ref", &VaryingParamCoeffs::kr_ref}};
  for (const auto& kv : node) {
    const auto key = kv.first.as<std::string>();
    auto it = keys.find(key);
    if (it == keys.end()) {
      throw Error(ErrorKind::invalid_input, "unknown key varying." + side + "." + key);
    }
    v.*(it->second) = as_double(kv.second, "varying." + side + "." + key);
  }
}

void apply_varying(CellParameters& p, const YAML::Node& node) {
  for (const auto& kv : node) {
    const auto key = kv.first.as<std::string>();
    if (key == "T_ref") {
      p.T_ref = as_double(kv.second, "varying.T_ref");
    } else if (key == "activity") {
      if (!kv.second.IsSequence() || kv.second.size() != 3) {
        throw Error(ErrorKind::invalid_input, "varying.activity must be a list of three numbers");
      }
      p.activity = {as_double(kv.second[0], "activity"), as_double(kv.second[1], "activity"),
                    as_double(kv.second[2], "activity")};
    } else if (key == "neg") {
      apply_varying_electrode(p.neg.varying, kv.second, key);
    } else if (key == "pos") {
      apply_varying_electrode(p.pos.varying, kv.second, key);
    } else {
      throw Error(ErrorKind::invalid_input, "unknown key varying." + key);
    }
  }
}

CellParameters parse_node(const YAML::Node& root, int depth) {
  if (!root.IsMap()) throw Error(ErrorKind::invalid_input, "parameter document must be a map");
  if (depth > 4) throw Error(ErrorKind::invalid_input, "parameter `base` chain too deep");
  CellParameters p;
  if (auto base = root["base"]) {
    const auto name = base.as<std::string>();
    const auto file = data_dir() / "params" / (name + ".yaml");
    if (!std::filesystem::exists(file)) {
      throw Error(ErrorKind::invalid_input, "unknown base preset '" + name + "'");
    }
    p = parse_node(YAML::LoadFile(file.string()), depth + 1);
  }
  for (const auto& kv : root) {
    const auto section = kv.first.as<std::string>();
    if (section == "base") continue;
    if (section == "name") {
      p.name = kv.second.as<std::string>();
      continue;
    }
    if (section == "varying") {
      apply_varying(p, kv.second);
      continue;
    }
    auto keys = flat_keys(section);
    if (keys.empty()) throw Error(ErrorKind::invalid_input, "unknown section '" + section + "'");
    if (!kv.second.IsMap()) throw Error(ErrorKind::invalid_input, section + " must be a map");
    for (const auto& entry : kv.second) {
      const auto key = entry.first.as<std::string>();
      auto it = keys.find(key);
      if (it == keys.end()) {
        throw Error(ErrorKind::invalid_input, "unknown key " + section + "." + key);
      }
      it->second(p, entry.second);
    }
  }
  return p;
}

}  // namespace

std::filesystem::path data_dir() {
  if (const char* env = std::getenv("LISIM_DATA_DIR"); env && *env) return env;
  return LISIM_DEFAULT_DATA_DIR;
}

std::vector<std::string> preset_names() { return {"ncm523", "ncm811", "lfpo"}; }

CellParameters parse_parameters(const std::string& yaml_text) {
  try {
    CellParameters p = parse_node(YAML::Load(yaml_text), 0);
    p.validate();
    return p;
  } catch (const YAML::Exception& e) {
    throw Error(ErrorKind::invalid_input, std::string("parameter file: ") + e.what());
  }
}

CellParameters load_parameters(const std::filesystem::path& file) {
  std::ifstream in(file);
  if (!in) throw Error(ErrorKind::io, "cannot open parameter file " + file.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_parameters(ss.str());
}

CellParameters preset(std::string_view name) {
  const auto file = data_dir() / "params" / (std::string(name) + ".yaml");
  if (!std::filesystem::exists(file)) {
    throw Error(ErrorKind::invalid_input, "unknown preset '" + std::string(name) + "'");
  }
  return load_parameters(file);
}

CellParameters resolve_parameters(std::string_view name_or_path) {
  const std::filesystem::path path{std::string(name_or_path)};
  if (std::filesystem::exists(path) && std::filesystem::is_regular_file(path)) {
    return load_parameters(path);
  }
  return preset(name_or_path);
}

}  // namespace lisim
