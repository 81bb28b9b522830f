#pragma once

#include <json.hpp>
#include <string>

#include "mdimlab/affine_map.hpp"
#include "mdimlab/branch_counts.hpp"
#include "mdimlab/common.hpp"
#include "mdimlab/horseshoe.hpp"
#include "mdimlab/truncated_system.hpp"

namespace mdimlab {

using json = nlohmann::json;

// { "ambient": [lo,hi], "branches": [{"dom":[a,b],"slope":s,"intercept":c}] }
inline json to_json(const PiecewiseAffineMap& map) {
  json branches = json::array();
  for (const auto& b : map.branches())
    branches.push_back({{"dom", {b.lo, b.hi}},
                        {"slope", b.slope},
                        {"intercept", b.intercept}});
  return {{"ambient", {map.ambient_lo(), map.ambient_hi()}},
          {"branches", branches}};
}

inline PiecewiseAffineMap pam_from_json(const json& j) {
  if (!j.contains("ambient") || !j.contains("branches"))
    throw InputError("map description needs 'ambient' and 'branches'");
  std::vector<AffineBranch> branches;
  for (const auto& b : j.at("branches"))
    branches.push_back(AffineBranch{b.at("dom").at(0).get<double>(),
                                    b.at("dom").at(1).get<double>(),
                                    b.at("slope").get<double>(),
                                    b.at("intercept").get<double>()});
  return PiecewiseAffineMap(j.at("ambient").at(0).get<double>(),
                            j.at("ambient").at(1).get<double>(),
                            std::move(branches));
}

inline json to_json(const MdimEstimate& est) {
  json pe = json::array();
  for (const auto& [eps, ratio] : est.per_epsilon) pe.push_back({eps, ratio});
  return {{"lower", est.lower}, {"upper", est.upper}, {"per_epsilon", pe}};
}

inline json to_json(const GrowthEstimate& est) {
  return {{"lower_rate", est.lower_rate},
          {"upper_rate", est.upper_rate},
          {"n_min", est.n_min},
          {"n_max", est.n_max},
          {"epsilon", est.eps}};
}

// { "n":…, "eps":…, "J":[[lo,hi],…], "subboxes":[…], "checks":{…}, "pass":… }
inline json to_json(const HorseshoeCertificate& cert) {
  auto box_json = [](const Box& b) {
    json sides = json::array();
    for (const auto& s : b.sides) sides.push_back({s[0], s[1]});
    return sides;
  };
  json subboxes = json::array();
  for (const auto& sb : cert.subboxes) subboxes.push_back(box_json(sb));
  return {{"n", cert.dim},
          {"eps", cert.eps},
          {"J", box_json(cert.box)},
          {"subboxes", subboxes},
          {"checks",
           {{"size", cert.checks.size_ok},
            {"subbox_sizes", cert.checks.subbox_sizes_ok},
            {"disjoint", cert.checks.disjoint_ok},
            {"containment", cert.checks.containment_ok}}},
          {"pass", cert.pass}};
}

// System references of the form {"system":"phi_sr","s":1,"r":1.0,"K":20};
// recognized names: tent3, phi_sr, varphi, psi134.
inline TruncatedIntervalSystem system_from_json(const json& spec) {
  if (!spec.contains("system")) throw InputError("missing 'system' name");
  std::string name = spec.at("system").get<std::string>();
  if (name == "tent3") return TruncatedIntervalSystem::from_map(tent3(), "tent3");
  if (name == "phi_sr")
    return make_phi_sr(spec.value("s", 1), spec.value("r", 1.0),
                       spec.value("K", 20));
  if (name == "varphi") return make_varphi(spec.value("K", 20));
  if (name == "psi134") return make_psi134(spec.value("K", 20));
  throw InputError("unknown system: " + name);
}

}  // namespace mdimlab
