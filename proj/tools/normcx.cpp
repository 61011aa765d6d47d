// Copyright 2026 The Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Command-line front end. Every subcommand prints one JSON report on
// stdout. Exit codes: 0 success, 1 validation or verification failure,
// 2 input error.

#include <openssl/evp.h>

#include <chrono>
#include <cstdint>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "normcx/io.hpp"
#include "normcx/normcx.hpp"

namespace {

using normcx::io::json;
using namespace normcx;

constexpr int kOk = 0;
constexpr int kFailed = 1;
constexpr int kInputError = 2;

std::string sha256_hex(const std::string& data) {
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  EVP_Digest(data.data(), data.size(), md, &len, EVP_sha256(), nullptr);
  std::ostringstream out;
  for (unsigned int i = 0; i < len; ++i) {
    out << std::hex << std::setw(2) << std::setfill('0') << int{md[i]};
  }
  return out.str();
}

/// Collects the report for one command: input digests, results, verdict
/// and (only on request) wall-clock timings.
class Report {
 public:
  Report(std::string command, bool timings)
      : timings_(timings), start_(std::chrono::steady_clock::now()) {
    j_["command"] = std::move(command);
    j_["inputs"] = json::array();
  }

  json load(const std::string& path) {
    const std::string text = io::read_file(path);
    j_["inputs"].push_back({{"path", path}, {"sha256", sha256_hex(text)}});
    return io::parse_json(text, path);
  }

  void note_input(const std::string& name, const std::string& value) {
    j_["inputs"].push_back({{"path", name}, {"sha256", sha256_hex(value)}});
  }

  json& results() { return j_["results"]; }

  int finish(bool ok, const std::string& verdict) {
    j_["verdict"] = verdict;
    if (timings_) {
      const auto us = std::chrono::duration_cast<std::chrono::microseconds>(
                          std::chrono::steady_clock::now() - start_)
                          .count();
      j_["timings"] = {{"total_us", us}};
    }
    std::cout << j_.dump(2) << "\n";
    return ok ? kOk : kFailed;
  }

 private:
  json j_;
  bool timings_;
  std::chrono::steady_clock::time_point start_;
};

struct Options {
  std::string fan, ip = "dot", z, matroid, building = "max", oracle = "none";
  std::string zfile, ipfile;
  std::size_t samples = 1000000, trials = 5;
  std::uint64_t seed = 1;
  bool symbolic = false, timings = false;
};

InnerProduct load_ip(Report& r, const std::string& arg, std::size_t n) {
  if (arg == "dot") {
    r.note_input("dot", "dot");
    return InnerProduct::dot(n);
  }
  InnerProduct ip = io::inner_product_from_json(r.load(arg));
  if (ip.dim() != n) {
    throw Error(ErrorKind::kBadDimension, "inner product has dimension " +
                                              std::to_string(ip.dim()) +
                                              ", fan needs " + std::to_string(n));
  }
  return ip;
}

/// Loads a fan and stops with exit code 1 when it fails validation.
std::optional<io::WeightedFan> load_valid_fan(Report& r, const std::string& path,
                                              int& exit_code) {
  auto wf = io::fan_from_json(r.load(path));
  const auto rep = validate(wf.fan);
  if (!rep.valid()) {
    json v = json::array();
    for (const auto& x : rep.violations) {
      v.push_back({{"kind", std::string(to_string(x.kind))}, {"message", x.message}});
    }
    r.results()["violations"] = std::move(v);
    exit_code = r.finish(false, "invalid fan");
    return std::nullopt;
  }
  return wf;
}

std::vector<Flat> load_building(Report& r, const Matroid& m,
                                const std::string& arg) {
  if (arg == "max") return maximal_building_set(m);
  return io::building_set_from_json(m, r.load(arg));
}

int cmd_fan_validate(const Options& o) {
  Report r("fan-validate", o.timings);
  auto wf = io::fan_from_json(r.load(o.fan));
  const auto rep = validate(wf.fan);
  json v = json::array();
  for (const auto& x : rep.violations) {
    v.push_back({{"kind", std::string(to_string(x.kind))}, {"message", x.message}});
  }
  r.results()["violations"] = std::move(v);
  if (rep.valid()) {
    r.results()["dim"] = wf.fan.dim();
    r.results()["rays"] = wf.fan.num_rays();
    r.results()["max_cones"] = wf.fan.max_cones().size();
    const auto bal = check_balancing(wf.fan, wf.weights);
    r.results()["balanced"] = bal.balanced();
  }
  return r.finish(rep.valid(), rep.valid() ? "valid" : "invalid");
}

int cmd_cubical(const Options& o) {
  Report r("cubical", o.timings);
  int code = 0;
  auto wf = load_valid_fan(r, o.fan, code);
  if (!wf) return code;
  const InnerProduct ip = load_ip(r, o.ip, wf->fan.ambient_dim());
  const ZValue z = io::z_from_json(wf->fan, r.load(o.z));
  const auto res = is_cubical(wf->fan, ip, z);
  r.results() = io::to_json(wf->fan, res);
  return r.finish(true, std::string(to_string(res.verdict)));
}

int cmd_cubical_cone(const Options& o) {
  Report r("cubical-cone", o.timings);
  int code = 0;
  auto wf = load_valid_fan(r, o.fan, code);
  if (!wf) return code;
  const InnerProduct ip = load_ip(r, o.ip, wf->fan.ambient_dim());
  r.results()["inequalities"] = io::to_json(wf->fan, cubical_cone(wf->fan, ip));
  return r.finish(true, "ok");
}

int cmd_volume(const Options& o) {
  if (o.oracle != "none" && o.oracle != "triangulation" &&
      o.oracle != "montecarlo") {
    throw Error(ErrorKind::kInput, "unknown oracle '" + o.oracle + "'");
  }
  Report r("volume", o.timings);
  int code = 0;
  auto wf = load_valid_fan(r, o.fan, code);
  if (!wf) return code;
  const Fan& fan = wf->fan;
  const InnerProduct ip = load_ip(r, o.ip, fan.ambient_dim());
  const ZValue z = io::z_from_json(fan, r.load(o.z));
  const Rational total = complex_volume(fan, wf->weights, ip, z);
  json cones = json::array();
  bool match = true;
  Rational oracle_total;
  double mc_total = 0, mc_var = 0;
  std::uint64_t seed = o.seed;
  for (const Cone& sigma : fan.max_cones()) {
    json c{{"cone", fan.ids_of(sigma)},
           {"weight", io::to_json(wf->weights.at(fan, sigma))},
           {"volume", io::to_json(cone_volume(fan, ip, z, sigma))}};
    const Rational w = wf->weights.at(fan, sigma);
    if (o.oracle == "triangulation") {
      const Rational v = volume_oracle_triangulation(fan, ip, z, sigma);
      c["oracle"] = io::to_json(v);
      oracle_total += w * v;
    } else if (o.oracle == "montecarlo") {
      const auto e = volume_oracle_montecarlo(fan, ip, z, sigma, o.samples, seed++);
      c["montecarlo_estimate"] = e.estimate;
      c["montecarlo_std_error"] = e.std_error;
      mc_total += w.to_double() * e.estimate;
      mc_var += w.to_double() * w.to_double() * e.std_error * e.std_error;
    }
    cones.push_back(std::move(c));
  }
  r.results()["cones"] = std::move(cones);
  r.results()["volume"] = io::to_json(total);
  if (o.oracle == "triangulation") {
    r.results()["oracle_volume"] = io::to_json(oracle_total);
    match = oracle_total == total;
    r.results()["match"] = match;
  } else if (o.oracle == "montecarlo") {
    MonteCarloEstimate e;
    e.estimate = mc_total;
    e.std_error = std::sqrt(mc_var);
    r.results()["montecarlo_estimate"] = e.estimate;
    r.results()["montecarlo_std_error"] = e.std_error;
    r.results()["montecarlo_samples_per_cone"] = o.samples;
    r.results()["seed"] = o.seed;
    match = e.agrees_with(total);
    r.results()["match"] = match;
  }
  return r.finish(match, match ? "ok" : "oracle mismatch");
}

int cmd_volpoly(const Options& o) {
  Report r("volpoly", o.timings);
  int code = 0;
  auto wf = load_valid_fan(r, o.fan, code);
  if (!wf) return code;
  const InnerProduct ip = load_ip(r, o.ip, wf->fan.ambient_dim());
  if (!o.zfile.empty()) {
    const ZValue z = io::z_from_json(wf->fan, r.load(o.zfile));
    r.results()["value"] =
        io::to_json(volume_polynomial_eval(wf->fan, wf->weights, ip, z));
  }
  if (o.symbolic || o.zfile.empty()) {
    const MultiPoly p = volume_polynomial_symbolic(wf->fan, wf->weights, ip);
    r.results()["polynomial"] = io::to_json(p);
    r.results()["text"] = p.str();
  }
  return r.finish(true, "ok");
}

int cmd_bergman(const Options& o) {
  Report r("bergman", o.timings);
  const Matroid m = io::matroid_from_json(r.load(o.matroid));
  const auto report = validate_matroid(m);
  if (!report.valid()) {
    r.results()["violations"] = report.violations;
    return r.finish(false, "invalid matroid");
  }
  const auto building = load_building(r, m, o.building);
  if (!is_building_set(m, building)) {
    r.results()["building_set"] = io::building_set_to_json(m, building);
    return r.finish(false, "invalid building set");
  }
  const Fan fan = bergman_fan(m, building);
  r.results()["rank"] = m.rank();
  r.results()["fan"] = io::fan_to_json(fan);
  return r.finish(true, "ok");
}

int cmd_certify(const Options& o) {
  Report r("certify", o.timings);
  const Matroid m = io::matroid_from_json(r.load(o.matroid));
  const auto building = load_building(r, m, o.building);
  const auto cert = construct_cubical_z(m, building);
  r.results() = io::to_json(m, cert);
  return r.finish(true, "Cubical");
}

int cmd_verify(const Options& o) {
  Report r("verify", o.timings);
  const json input = r.load(o.fan);
  std::optional<io::WeightedFan> wf;
  std::optional<ZValue> z;
  if (input.is_object() && (input.contains("ground") || input.contains("graph"))) {
    const Matroid m = io::matroid_from_json(input);
    const auto building = load_building(r, m, o.building);
    const auto cert = construct_cubical_z(m, building);
    wf = io::WeightedFan{cert.bergman.fan, WeightFunction::constant(cert.bergman.fan)};
    z = cert.z;
    r.results()["m"] = cert.m.get_str();
  } else {
    wf = io::fan_from_json(input);
    const auto rep = validate(wf->fan);
    if (!rep.valid()) {
      r.results()["violations"] = rep.violations.front().message;
      return r.finish(false, "invalid fan");
    }
    if (o.zfile.empty()) throw Error(ErrorKind::kInput, "verify on a fan needs --z");
  }
  const Fan& fan = wf->fan;
  if (!o.zfile.empty()) z = io::z_from_json(fan, r.load(o.zfile));
  r.results()["z"] = io::z_to_json(fan, *z);

  SplitMix64 rng(o.seed);
  std::vector<InnerProduct> products{load_ip(r, o.ip, fan.ambient_dim())};
  for (std::size_t t = 0; t < o.trials; ++t) {
    products.push_back(random_cubical_inner_product(fan, *z, rng));
  }
  json trials = json::array();
  bool all = true;
  std::optional<Rational> common;
  for (std::size_t t = 0; t < products.size(); ++t) {
    std::optional<MonteCarloOptions> mc;
    if (o.oracle == "montecarlo") mc = MonteCarloOptions{o.samples, o.seed + t};
    const auto rep = verify_main_theorem(fan, wf->weights, products[t], *z, mc);
    json tj{{"inner_product", io::to_json(products[t])["matrix"]},
            {"chow_degree", io::to_json(rep.chow_degree)},
            {"volume_polynomial", io::to_json(rep.volume_polynomial)},
            {"normal_volume", io::to_json(rep.normal_volume)},
            {"triangulation_volume", io::to_json(rep.triangulation_volume)},
            {"exact_match", rep.exact_match()}};
    if (rep.montecarlo) {
      tj["montecarlo_estimate"] = rep.montecarlo->estimate;
      tj["montecarlo_std_error"] = rep.montecarlo->std_error;
    }
    if (!common) common = rep.normal_volume;
    const bool ok = rep.ok() && rep.normal_volume == *common;
    all = all && ok;
    tj["ok"] = ok;
    trials.push_back(std::move(tj));
  }
  r.results()["seed"] = o.seed;
  r.results()["trials"] = std::move(trials);
  r.results()["volume"] = io::to_json(*common);
  return r.finish(all, all ? "verified" : "mismatch");
}

int exit_code_for(ErrorKind k) {
  switch (k) {
    case ErrorKind::kInput:
    case ErrorKind::kNonSquare:
    case ErrorKind::kBadDimension:
    case ErrorKind::kUnknownCone:
    case ErrorKind::kMissingWeight:
    case ErrorKind::kGradeTooHigh:
    case ErrorKind::kWrongGrade:
      return kInputError;
    default:
      return kFailed;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Exact normal complex volumes and Chow-ring volume polynomials"};
  app.require_subcommand(1);
  Options o;
  auto timings = [&](CLI::App* c) {
    c->add_flag("--timings", o.timings, "Include wall-clock timings in the report");
  };
  auto fan_arg = [&](CLI::App* c) {
    c->add_option("fan", o.fan, "Fan JSON file")->required();
  };
  auto ip_arg = [&](CLI::App* c) {
    c->add_option("ip", o.ip, "Inner product JSON file, or 'dot'")->required();
  };
  std::function<int()> run;

  auto* validate_cmd = app.add_subcommand("fan-validate", "Check the fan axioms");
  fan_arg(validate_cmd);
  timings(validate_cmd);
  validate_cmd->callback([&] { run = [&] { return cmd_fan_validate(o); }; });

  auto* cub = app.add_subcommand("cubical", "Classify z as Cubical, PseudoCubical or Neither");
  fan_arg(cub);
  ip_arg(cub);
  cub->add_option("z", o.z, "z JSON file")->required();
  timings(cub);
  cub->callback([&] { run = [&] { return cmd_cubical(o); }; });

  auto* cone = app.add_subcommand("cubical-cone", "Export the inequalities of the cubical cone");
  fan_arg(cone);
  ip_arg(cone);
  timings(cone);
  cone->callback([&] { run = [&] { return cmd_cubical_cone(o); }; });

  auto* vol = app.add_subcommand("volume", "Exact normal complex volume");
  fan_arg(vol);
  ip_arg(vol);
  vol->add_option("z", o.z, "z JSON file")->required();
  vol->add_option("--oracle", o.oracle, "none, triangulation or montecarlo");
  vol->add_option("--seed", o.seed, "Monte Carlo seed");
  vol->add_option("--samples", o.samples, "Monte Carlo samples per cone");
  timings(vol);
  vol->callback([&] { run = [&] { return cmd_volume(o); }; });

  auto* vp = app.add_subcommand("volpoly", "Volume polynomial, symbolic or evaluated");
  fan_arg(vp);
  vp->add_option("ip", o.ip, "Inner product JSON file, or 'dot' (default)");
  vp->add_flag("--symbolic", o.symbolic, "Print the polynomial");
  vp->add_option("--z", o.zfile, "Evaluate at this z JSON file");
  timings(vp);
  vp->callback([&] { run = [&] { return cmd_volpoly(o); }; });

  auto* berg = app.add_subcommand("bergman", "Bergman fan of a matroid");
  berg->add_option("matroid", o.matroid, "Matroid JSON file")->required();
  berg->add_option("--building-set", o.building, "'max' or a building set JSON file");
  timings(berg);
  berg->callback([&] { run = [&] { return cmd_bergman(o); }; });

  auto* cert = app.add_subcommand("certify", "Construct and certify a cubical value on a Bergman fan");
  cert->add_option("matroid", o.matroid, "Matroid JSON file")->required();
  cert->add_option("--building-set", o.building, "'max' or a building set JSON file");
  timings(cert);
  cert->callback([&] { run = [&] { return cmd_certify(o); }; });

  auto* ver = app.add_subcommand("verify", "Compare Chow degree and normal complex volume exactly");
  ver->add_option("input", o.fan, "Fan or matroid JSON file")->required();
  ver->add_option("--z", o.zfile, "z JSON file (required for fans)");
  ver->add_option("--ip", o.ip, "Base inner product JSON file, or 'dot'");
  ver->add_option("--trials", o.trials, "Number of random inner products");
  ver->add_option("--seed", o.seed, "Seed for inner products and Monte Carlo");
  ver->add_option("--building-set", o.building, "'max' or a building set JSON file");
  ver->add_option("--oracle", o.oracle, "none or montecarlo");
  ver->add_option("--samples", o.samples, "Monte Carlo samples per cone");
  timings(ver);
  ver->callback([&] { run = [&] { return cmd_verify(o); }; });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kOk : kInputError;
  }
  try {
    return run();
  } catch (const Error& e) {
    std::cerr << e.what() << "\n";
    return exit_code_for(e.kind());
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kInputError;
  }
}
