#include "specvol/config.hpp"

#include <fstream>
#include <initializer_list>
#include <sstream>

#include "specvol/error.hpp"

namespace specvol {
namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& key, const std::string& msg) {
  throw ConfigError("config key '" + key + "': " + msg);
}

void allow_only(const json& obj, const std::string& prefix,
                std::initializer_list<const char*> keys) {
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    bool known = false;
    for (const char* k : keys) known = known || it.key() == k;
    if (!known) fail(prefix + it.key(), "unknown key");
  }
}

const json& object_at(const json& parent, const char* key, const std::string& path) {
  const json& v = parent.at(key);
  if (!v.is_object()) fail(path, "expected an object");
  return v;
}

double number(const json& obj, const char* key, const std::string& prefix, double fallback) {
  if (!obj.contains(key)) return fallback;
  const json& v = obj.at(key);
  if (!v.is_number()) fail(prefix + key, "expected a number");
  return v.get<double>();
}

std::uint64_t unsigned_int(const json& obj, const char* key, const std::string& prefix,
                           std::uint64_t fallback) {
  if (!obj.contains(key)) return fallback;
  const json& v = obj.at(key);
  if (v.is_number_unsigned()) return v.get<std::uint64_t>();
  if (v.is_number_integer() && v.get<std::int64_t>() >= 0) {
    return static_cast<std::uint64_t>(v.get<std::int64_t>());
  }
  fail(prefix + key, "expected a non-negative integer");
}

std::string text(const json& obj, const char* key, const std::string& prefix,
                 const std::string& fallback) {
  if (!obj.contains(key)) return fallback;
  const json& v = obj.at(key);
  if (!v.is_string()) fail(prefix + key, "expected a string");
  return v.get<std::string>();
}

LatentModel parse_model(const json& m) {
  const std::string type = text(m, "type", "model.", "heston");
  if (type == "heston") {
    allow_only(m, "model.", {"type", "mu", "kappa", "alpha", "gamma", "rho", "x0", "nu0"});
    HestonParams p;
    p.mu = number(m, "mu", "model.", p.mu);
    p.kappa = number(m, "kappa", "model.", p.kappa);
    p.alpha = number(m, "alpha", "model.", p.alpha);
    p.gamma = number(m, "gamma", "model.", p.gamma);
    p.rho = number(m, "rho", "model.", p.rho);
    p.x0 = number(m, "x0", "model.", p.x0);
    p.nu0 = number(m, "nu0", "model.", p.nu0);
    return p;
  }
  if (type == "brownian") {
    allow_only(m, "model.", {"type", "sig2"});
    return BrownianModel{number(m, "sig2", "model.", 0.01)};
  }
  if (type == "ou") {
    allow_only(m, "model.", {"type", "sig2", "theta"});
    return OuModel{number(m, "sig2", "model.", 0.01), number(m, "theta", "model.", -1.0)};
  }
  fail("model.type", "expected heston, brownian or ou, got '" + type + "'");
}

NoiseSpec parse_noise(const json& n) {
  const std::string type = text(n, "type", "noise.", "white");
  if (type == "white") {
    allow_only(n, "noise.", {"type", "sig2"});
    return NoiseSpec::white(number(n, "sig2", "noise.", 0.0005 * 0.0005));
  }
  if (type == "ma") {
    allow_only(n, "noise.", {"type", "theta", "sig2_eta"});
    if (!n.contains("theta") || !n.at("theta").is_array()) {
      fail("noise.theta", "expected an array of MA coefficients");
    }
    std::vector<double> theta;
    for (const auto& t : n.at("theta")) {
      if (!t.is_number()) fail("noise.theta", "expected numbers");
      theta.push_back(t.get<double>());
    }
    return NoiseSpec::ma(std::move(theta), number(n, "sig2_eta", "noise.", 0.0005 * 0.0005));
  }
  fail("noise.type", "expected white or ma, got '" + type + "'");
}

} // namespace

ExperimentConfig config_from_json(const json& j) {
  if (!j.is_object()) throw ConfigError("config: top level must be a JSON object");
  allow_only(j, "", {"name", "model", "grid", "noise", "estimators", "paths", "master_seed",
                     "noise_model", "fit", "tsrv_k", "tsrv_noise"});
  ExperimentConfig cfg;
  cfg.name = text(j, "name", "", cfg.name);

  if (j.contains("model")) cfg.model = parse_model(object_at(j, "model", "model"));

  if (j.contains("grid")) {
    const json& g = object_at(j, "grid", "grid");
    allow_only(g, "grid.", {"N", "T", "days"});
    const auto n = unsigned_int(g, "N", "grid.", cfg.grid.n());
    if (g.contains("T") && g.contains("days")) fail("grid", "give either T or days, not both");
    double duration = cfg.grid.duration();
    if (g.contains("T")) duration = number(g, "T", "grid.", duration);
    if (g.contains("days")) duration = number(g, "days", "grid.", 1.0) / kDaysPerYear;
    try {
      cfg.grid = Grid(static_cast<std::size_t>(n), duration);
    } catch (const InvariantViolation& e) {
      fail("grid", e.what());
    }
  }

  if (j.contains("noise")) cfg.noise = parse_noise(object_at(j, "noise", "noise"));

  if (j.contains("estimators")) {
    const json& e = j.at("estimators");
    if (!e.is_array()) fail("estimators", "expected an array of tags");
    cfg.estimators.clear();
    for (const auto& t : e) {
      if (!t.is_string()) fail("estimators", "expected string tags");
      try {
        cfg.estimators.push_back(parse_estimator(t.get<std::string>()));
      } catch (const ConfigError& err) {
        fail("estimators", err.what());
      }
    }
  }

  cfg.paths = static_cast<std::size_t>(unsigned_int(j, "paths", "", cfg.paths));
  cfg.master_seed = unsigned_int(j, "master_seed", "", cfg.master_seed);

  if (j.contains("noise_model")) {
    try {
      cfg.noise_model = NoiseModelChoice::parse(text(j, "noise_model", "", "white"));
    } catch (const ConfigError& err) {
      fail("noise_model", err.what());
    }
  }

  if (j.contains("fit")) {
    const json& f = object_at(j, "fit", "fit");
    allow_only(f, "fit.", {"rel_tol", "max_evals_per_dim", "multistarts", "q_max", "polish"});
    cfg.fit.rel_tol = number(f, "rel_tol", "fit.", cfg.fit.rel_tol);
    cfg.fit.max_evals_per_dim =
        static_cast<std::size_t>(unsigned_int(f, "max_evals_per_dim", "fit.", cfg.fit.max_evals_per_dim));
    cfg.fit.multistarts =
        static_cast<std::size_t>(unsigned_int(f, "multistarts", "fit.", cfg.fit.multistarts));
    cfg.fit.q_max = static_cast<std::size_t>(unsigned_int(f, "q_max", "fit.", cfg.fit.q_max));
    if (f.contains("polish")) {
      if (!f.at("polish").is_boolean()) fail("fit.polish", "expected a boolean");
      cfg.fit.polish = f.at("polish").get<bool>();
    }
  }

  if (j.contains("tsrv_k") && !j.at("tsrv_k").is_null()) {
    cfg.tsrv_k = static_cast<std::size_t>(unsigned_int(j, "tsrv_k", "", 1));
  }
  const std::string plugin = text(j, "tsrv_noise", "", "whittle");
  if (plugin == "realized") {
    cfg.tsrv_noise = TsrvNoisePlugin::realized;
  } else if (plugin == "whittle") {
    cfg.tsrv_noise = TsrvNoisePlugin::whittle;
  } else {
    fail("tsrv_noise", "expected realized or whittle, got '" + plugin + "'");
  }

  try {
    cfg.validate();
  } catch (const ConfigError& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
  return cfg;
}

ExperimentConfig load_config(const std::filesystem::path& file) {
  std::ifstream in(file);
  if (!in) throw ConfigError("cannot open config file '" + file.string() + "'");
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError("config '" + file.string() + "': JSON parse error at byte " +
                      std::to_string(e.byte) + ": " + e.what());
  }
  return config_from_json(j);
}

json config_to_json(const ExperimentConfig& cfg) {
  json j;
  j["name"] = cfg.name;
  std::visit(
      [&](const auto& m) {
        using M = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<M, HestonParams>) {
          j["model"] = {{"type", "heston"}, {"mu", m.mu},       {"kappa", m.kappa},
                        {"alpha", m.alpha}, {"gamma", m.gamma}, {"rho", m.rho},
                        {"x0", m.x0},       {"nu0", m.nu0}};
        } else if constexpr (std::is_same_v<M, BrownianModel>) {
          j["model"] = {{"type", "brownian"}, {"sig2", m.sig2}};
        } else {
          j["model"] = {{"type", "ou"}, {"sig2", m.sig2}, {"theta", m.theta}};
        }
      },
      cfg.model);
  j["grid"] = {{"N", cfg.grid.n()}, {"T", cfg.grid.duration()}};
  if (cfg.noise.is_white()) {
    j["noise"] = {{"type", "white"}, {"sig2", cfg.noise.sig2}};
  } else {
    j["noise"] = {{"type", "ma"}, {"theta", cfg.noise.theta}, {"sig2_eta", cfg.noise.sig2}};
  }
  j["estimators"] = json::array();
  for (auto e : cfg.estimators) j["estimators"].push_back(std::string(to_string(e)));
  j["paths"] = cfg.paths;
  j["master_seed"] = cfg.master_seed;
  j["noise_model"] = cfg.noise_model.str();
  j["fit"] = {{"rel_tol", cfg.fit.rel_tol},
              {"max_evals_per_dim", cfg.fit.max_evals_per_dim},
              {"multistarts", cfg.fit.multistarts},
              {"q_max", cfg.fit.q_max},
              {"polish", cfg.fit.polish}};
  if (cfg.tsrv_k) j["tsrv_k"] = *cfg.tsrv_k;
  j["tsrv_noise"] = cfg.tsrv_noise == TsrvNoisePlugin::whittle ? "whittle" : "realized";
  return j;
}

} // namespace specvol
