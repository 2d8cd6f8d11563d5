#include "pfc3d/config.hpp"

#include <cctype>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "pfc3d/error.hpp"

namespace pfc3d {

const char* to_string(Purpose p) {
  switch (p) {
    case Purpose::run: return "run";
    case Purpose::converge: return "converge";
    case Purpose::complexity: return "complexity";
  }
  return "?";
}

namespace {

using nlohmann::json;

const std::set<std::string> kKnownKeys = {
    "m",           "grids",        "L",           "epsilon",          "tau",
    "tau_over_h",  "n_steps",      "t_final",     "init",             "seed",
    "bootstrap",   "nu1",          "nu2",         "smoothing",        "tol",
    "max_cycles",  "coarsest_m",   "smoother",    "coarse_sweeps",    "prolongation",
    "residual_norm", "snapshot_every", "energy_log_every", "output_dir", "stability_slack",
    "export_vtk",  "fail_on_nonconvergence",
};

class Reader {
 public:
  Reader(const std::string& text, std::string origin) : text_(text), origin_(std::move(origin)) {
    try {
      obj_ = json::parse(text);
    } catch (const json::parse_error& e) {
      fail_at(line_of_offset(e.byte == 0 ? 0 : e.byte - 1), "", std::string("invalid JSON: ") + e.what());
    }
    if (!obj_.is_object()) fail_at(0, "", "top level must be a JSON object");
    for (const auto& [key, value] : obj_.items()) {
      if (!kKnownKeys.count(key)) fail(key, "unknown key");
    }
  }

  bool has(const std::string& key) const { return obj_.contains(key); }

  [[noreturn]] void fail(const std::string& key, const std::string& msg) const {
    fail_at(line_of_key(key), key, msg);
  }

  void require(const std::string& key, const std::string& why = "") const {
    if (!has(key)) fail(key, "missing required key" + (why.empty() ? "" : " (" + why + ")"));
  }

  void forbid(const std::string& key, const std::string& why) const {
    if (has(key)) fail(key, why);
  }

  double number(const std::string& key) const {
    const json& v = obj_.at(key);
    if (!v.is_number()) fail(key, "expected a number");
    const double d = v.get<double>();
    if (!std::isfinite(d)) fail(key, "must be finite");
    return d;
  }

  long long integer(const std::string& key) const {
    const json& v = obj_.at(key);
    if (!v.is_number_integer()) fail(key, "expected an integer");
    return v.get<long long>();
  }

  int positive_int(const std::string& key, int min = 1) const {
    const long long v = integer(key);
    if (v < min || v > 1 << 30) fail(key, "must be an integer >= " + std::to_string(min));
    return static_cast<int>(v);
  }

  std::uint64_t u64(const std::string& key) const {
    const json& v = obj_.at(key);
    if (v.is_number_unsigned()) return v.get<std::uint64_t>();
    if (v.is_number_integer()) fail(key, "must be a non-negative integer");
    fail(key, "expected an unsigned integer");
  }

  std::string string(const std::string& key) const {
    const json& v = obj_.at(key);
    if (!v.is_string()) fail(key, "expected a string");
    return v.get<std::string>();
  }

  bool boolean(const std::string& key) const {
    const json& v = obj_.at(key);
    if (!v.is_boolean()) fail(key, "expected true or false");
    return v.get<bool>();
  }

  std::vector<int> int_list(const std::string& key) const {
    const json& v = obj_.at(key);
    if (!v.is_array() || v.empty()) fail(key, "expected a non-empty array of integers");
    std::vector<int> out;
    for (const auto& e : v) {
      if (!e.is_number_integer() || e.get<long long>() < 2) fail(key, "entries must be integers >= 2");
      out.push_back(e.get<int>());
    }
    return out;
  }

  std::vector<std::pair<int, int>> pair_list(const std::string& key) const {
    const json& v = obj_.at(key);
    if (!v.is_array() || v.empty()) fail(key, "expected a non-empty array of [nu1, nu2] pairs");
    std::vector<std::pair<int, int>> out;
    for (const auto& e : v) {
      if (!e.is_array() || e.size() != 2 || !e[0].is_number_integer() || !e[1].is_number_integer() ||
          e[0].get<int>() < 0 || e[1].get<int>() < 0 || e[0].get<int>() + e[1].get<int>() < 1) {
        fail(key, "entries must be pairs of non-negative integers with a positive sum");
      }
      out.emplace_back(e[0].get<int>(), e[1].get<int>());
    }
    return out;
  }

  template <class Enum>
  Enum choice(const std::string& key, std::initializer_list<std::pair<const char*, Enum>> options) const {
    const std::string s = string(key);
    std::string names;
    for (const auto& [name, value] : options) {
      if (s == name) return value;
      names += names.empty() ? name : std::string(", ") + name;
    }
    fail(key, "must be one of " + names + " (got \"" + s + "\")");
  }

 private:
  int line_of_offset(std::size_t offset) const {
    int line = 1;
    for (std::size_t i = 0; i < offset && i < text_.size(); ++i)
      if (text_[i] == '\n') ++line;
    return line;
  }

  // Line of the first `"key"` used as an object key in the raw text, or 0.
  int line_of_key(const std::string& key) const {
    const std::string quoted = "\"" + key + "\"";
    for (std::size_t pos = text_.find(quoted); pos != std::string::npos;
         pos = text_.find(quoted, pos + 1)) {
      std::size_t q = pos + quoted.size();
      while (q < text_.size() && std::isspace(static_cast<unsigned char>(text_[q]))) ++q;
      if (q < text_.size() && text_[q] == ':') return line_of_offset(pos);
    }
    return 0;
  }

  [[noreturn]] void fail_at(int line, const std::string& key, const std::string& msg) const {
    std::ostringstream os;
    os << origin_;
    if (line > 0) os << ":" << line;
    os << ": ";
    if (!key.empty()) os << "key '" << key << "': ";
    os << msg;
    throw ConfigError(os.str());
  }

  const std::string& text_;
  std::string origin_;
  json obj_;
};

int steps_for(const Reader& r, double t_final, double tau) {
  const double n = t_final / tau;
  const double rounded = std::round(n);
  if (rounded < 1.0 || std::fabs(n - rounded) > 1e-9 * rounded) {
    r.fail("t_final", "must be a positive whole multiple of tau");
  }
  return static_cast<int>(rounded);
}

}  // namespace

ExperimentConfig parse_config_text(const std::string& text, Purpose purpose, const std::string& origin) {
  const Reader r(text, origin);
  ExperimentConfig ec;
  ec.purpose = purpose;
  RunConfig& c = ec.run;

  // Grid.
  if (purpose == Purpose::run) {
    r.require("m");
    r.forbid("grids", "not used by run; give m");
    c.m = r.positive_int("m", 2);
  } else {
    r.require("grids");
    r.forbid("m", std::string("not used by ") + to_string(purpose) + "; give grids");
    ec.grids = r.int_list("grids");
    c.m = ec.grids.front();
  }

  r.require("L");
  c.L = r.number("L");
  if (!(c.L > 0.0)) r.fail("L", "must be > 0");
  r.require("epsilon");
  c.epsilon = r.number("epsilon");

  // Time step and horizon.
  if (purpose == Purpose::converge) {
    r.require("tau_over_h");
    r.require("t_final");
    r.forbid("tau", "conflicts with tau_over_h");
    r.forbid("n_steps", "conflicts with t_final");
    ec.tau_over_h = r.number("tau_over_h");
    if (!(ec.tau_over_h > 0.0)) r.fail("tau_over_h", "must be > 0");
    ec.t_final = r.number("t_final");
    if (!(ec.t_final > 0.0)) r.fail("t_final", "must be > 0");
    c.tau = ec.tau_over_h * c.L / c.m;
    c.n_steps = steps_for(r, ec.t_final, c.tau);
  } else {
    r.forbid("tau_over_h", std::string("not used by ") + to_string(purpose) + "; give tau");
    r.require("tau");
    c.tau = r.number("tau");
    if (!(c.tau > 0.0)) r.fail("tau", "must be > 0");
    if (r.has("n_steps") == r.has("t_final")) {
      r.fail(r.has("n_steps") ? "t_final" : "n_steps", "exactly one of n_steps and t_final is required");
    }
    if (r.has("n_steps")) {
      c.n_steps = r.positive_int("n_steps");
    } else {
      ec.t_final = r.number("t_final");
      c.n_steps = steps_for(r, ec.t_final, c.tau);
    }
    if (ec.t_final == 0.0) ec.t_final = c.t_final();
  }

  // Initial data.
  r.require("init");
  c.init = r.choice<InitKind>("init", {{"smooth", InitKind::smooth}, {"random", InitKind::random}});
  if (c.init == InitKind::random) {
    r.require("seed", "init is random");
    c.seed = r.u64("seed");
  } else if (r.has("seed")) {
    c.seed = r.u64("seed");
  }
  if (r.has("bootstrap")) {
    c.bootstrap = r.choice<Bootstrap>(
        "bootstrap", {{"copy", Bootstrap::copy}, {"first_order", Bootstrap::first_order}});
  }

  // Multigrid.
  if (purpose == Purpose::complexity && r.has("smoothing")) {
    r.forbid("nu1", "conflicts with smoothing");
    r.forbid("nu2", "conflicts with smoothing");
    ec.smoothing = r.pair_list("smoothing");
    c.mg.nu1 = ec.smoothing.front().first;
    c.mg.nu2 = ec.smoothing.front().second;
  } else {
    if (purpose != Purpose::complexity) r.forbid("smoothing", "only used by complexity");
    r.require("nu1");
    r.require("nu2");
    c.mg.nu1 = r.positive_int("nu1", 0);
    c.mg.nu2 = r.positive_int("nu2", 0);
    if (c.mg.nu1 + c.mg.nu2 < 1) r.fail("nu2", "nu1 + nu2 must be >= 1");
    ec.smoothing = {{c.mg.nu1, c.mg.nu2}};
  }
  r.require("tol");
  c.mg.tol = r.number("tol");
  if (!(c.mg.tol > 0.0)) r.fail("tol", "must be > 0");
  if (r.has("max_cycles")) c.mg.max_cycles = r.positive_int("max_cycles");
  if (r.has("coarsest_m")) c.mg.coarsest_m = r.positive_int("coarsest_m", 1);
  if (r.has("coarse_sweeps")) c.mg.coarse_sweeps = r.positive_int("coarse_sweeps");
  if (r.has("smoother")) {
    c.mg.order = r.choice<SmootherOrder>(
        "smoother", {{"lexicographic", SmootherOrder::lexicographic}, {"red_black", SmootherOrder::red_black}});
  }
  if (r.has("prolongation")) {
    c.mg.prolongation = r.choice<Prolongation>(
        "prolongation", {{"constant", Prolongation::constant}, {"trilinear", Prolongation::trilinear}});
  }
  if (r.has("residual_norm")) {
    c.mg.norm = r.choice<ResidualNorm>("residual_norm", {{"l2", ResidualNorm::l2}, {"linf", ResidualNorm::linf}});
  }
  const std::vector<int> grids = purpose == Purpose::run ? std::vector<int>{c.m} : ec.grids;
  for (int m : grids) {
    try {
      c.mg.validate(m);
    } catch (const ContractError& e) {
      r.fail(r.has("coarsest_m") ? "coarsest_m" : (purpose == Purpose::run ? "m" : "grids"), e.what());
    }
  }

  // Output cadence.
  if (r.has("snapshot_every")) c.snapshot_every = r.positive_int("snapshot_every");
  if (r.has("energy_log_every")) c.energy_log_every = r.positive_int("energy_log_every");
  if (r.has("output_dir")) c.output_dir = r.string("output_dir");
  if (r.has("stability_slack")) {
    c.stability_slack = r.number("stability_slack");
    if (c.stability_slack < 0.0) r.fail("stability_slack", "must be >= 0");
  }
  if (r.has("export_vtk")) c.export_structured_points = r.boolean("export_vtk");
  if (r.has("fail_on_nonconvergence")) c.fail_on_nonconvergence = r.boolean("fail_on_nonconvergence");

  try {
    c.validate();
  } catch (const ConfigError& e) {
    throw ConfigError(origin + ": " + e.what());
  }
  return ec;
}

ExperimentConfig parse_config(const std::filesystem::path& path, Purpose purpose) {
  std::ifstream in(path);
  if (!in) throw ConfigError(path.string() + ": cannot open config file");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config_text(ss.str(), purpose, path.string());
}

}  // namespace pfc3d
