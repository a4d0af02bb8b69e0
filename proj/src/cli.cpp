#include "minklab/cli.hpp"

#include <openssl/evp.h>

#include <CLI11.hpp>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <map>
#include <sstream>

#include "minklab/distribution.hpp"
#include "minklab/errors.hpp"
#include "minklab/flows.hpp"
#include "minklab/haar.hpp"
#include "minklab/lattice.hpp"
#include "minklab/minima.hpp"
#include "minklab/reduction.hpp"
#include "minklab/siegel.hpp"

namespace minklab::cli {

using nlohmann::json;

namespace {

// Every command's parameters with their defaults. Types here drive parsing.
const std::map<std::string, json>& command_defaults() {
  static const std::map<std::string, json> table = {
      {"minima", {{"basis", ""}, {"oracle", false}, {"bound", 3}}},
      {"reduce", {{"basis", ""}, {"method", "minkowski"}}},
      {"dual", {{"basis", ""}}},
      {"sample", {{"dim", 2}, {"count", 1000}, {"sampler", "auto"}, {"tilt", json::array()}}},
      {"siegel-check",
       {{"dim", 2}, {"k", 1}, {"radius", 0.5}, {"count", 100000}, {"sampler", "siegel"}}},
      {"estimate-phi",
       {{"dim", 2},
        {"i", 1},
        {"deltas", {0.05, 0.075, 0.1, 0.15, 0.2, 0.25, 0.3}},
        {"count", 200000},
        {"sampler", "auto"},
        {"tilt", json::array()},
        {"csv", ""}}},
      {"estimate-tail",
       {{"dim", 2},
        {"i", 2},
        {"deltas", {0.05, 0.075, 0.1, 0.15, 0.2, 0.25, 0.3}},
        {"count", 200000},
        {"sampler", "auto"},
        {"tilt", json::array()},
        {"csv", ""}}},
      {"flow-law",
       {{"dim", 2},
        {"i", 1},
        {"kind", "diagonal"},
        {"z", {1.0, -1.0}},
        {"nilpotent", json::array()},
        {"tmax", 1e4},
        {"seeds", 50},
        {"grid", 95}}},
      {"hit-time",
       {{"dim", 2},
        {"i", 1},
        {"kind", "diagonal"},
        {"z", {1.0, -1.0}},
        {"nilpotent", json::array()},
        {"levels", {1.0, 1.5, 2.0, 2.5}},
        {"seeds", 100},
        {"mmax", 200000},
        {"basis", ""}}},
      {"constants", {{"dim", 3}, {"k", 2}}},
  };
  return table;
}

std::string command_help(const std::string& command) {
  static const std::map<std::string, std::string> help{
      {"minima", "successive minima and attaining vectors of a basis file"},
      {"reduce", "Minkowski or quasi-minimal basis of a basis file"},
      {"dual", "dual basis of a basis file"},
      {"sample", "Haar-random unimodular lattices as JSON lines"},
      {"siegel-check", "Monte Carlo check of the mean value of primitive tuple counts"},
      {"estimate-phi", "estimate mu{lambda_i <= delta} and fit its exponent"},
      {"estimate-tail", "upper tail of lambda_i with the dual-lattice sandwich"},
      {"flow-law", "running log-law ratios along a flow orbit"},
      {"hit-time", "hitting times of shrinking neighbourhoods of the cusp"},
      {"constants", "volume constants and the mean value constant"},
  };
  const auto it = help.find(command);
  return it == help.end() ? std::string() : it->second;
}

const json& defaults_for(const std::string& command) {
  const auto& table = command_defaults();
  auto it = table.find(command);
  if (it == table.end()) throw SchemaError("unknown command '" + command + "'");
  return it->second;
}

bool same_kind(const json& value, const json& def) {
  if (def.is_boolean()) return value.is_boolean();
  if (def.is_number_integer()) return value.is_number_integer();
  if (def.is_number()) return value.is_number();
  if (def.is_string()) return value.is_string();
  if (def.is_array()) {
    if (!value.is_array()) return false;
    for (const auto& x : value)
      if (!x.is_number()) return false;
    return true;
  }
  return false;
}

// Defaults overlaid with the given params; unknown keys and wrong types are schema errors.
json effective_params(const std::string& command, const json& params) {
  json merged = defaults_for(command);
  if (!params.is_object()) throw SchemaError("params must be a JSON object");
  for (const auto& [key, value] : params.items()) {
    if (!merged.contains(key)) {
      throw SchemaError("unknown parameter '" + key + "' for command '" + command + "'");
    }
    if (!same_kind(value, merged[key])) {
      throw SchemaError("parameter '" + key + "' has the wrong type");
    }
    merged[key] = value;
  }
  return merged;
}

std::string sha256_hex(const std::string& data) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  EVP_Digest(data.data(), data.size(), digest, &len, EVP_sha256(), nullptr);
  std::ostringstream out;
  for (unsigned int i = 0; i < len; ++i) {
    out << std::hex << std::setw(2) << std::setfill('0') << static_cast<int>(digest[i]);
  }
  return out.str();
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw SchemaError("cannot open '" + path + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

std::vector<double> doubles(const json& j) { return j.get<std::vector<double>>(); }

int positive_int(const json& params, const char* key) {
  const long v = params[key].get<long>();
  if (v < 1 || v > 2'000'000'000L) throw InvalidRange(std::string(key) + " must be positive");
  return static_cast<int>(v);
}

std::optional<SamplerKind> sampler_option(const json& params) {
  const std::string name = params["sampler"].get<std::string>();
  if (name == "auto") return std::nullopt;
  return sampler_from_string(name);
}

FlowSpec flow_from_params(const json& params) {
  const int d = params["dim"].get<int>();
  const std::string kind = params["kind"].get<std::string>();
  if (kind == "diagonal") {
    const auto z = doubles(params["z"]);
    if (static_cast<int>(z.size()) != d) throw InvalidRange("--z needs dim entries");
    return FlowSpec::diagonal(Eigen::Map<const Vector>(z.data(), d));
  }
  if (kind == "unipotent") {
    const auto n = doubles(params["nilpotent"]);
    if (static_cast<int>(n.size()) != d * d) {
      throw InvalidRange("--nilpotent needs dim*dim entries, row-major");
    }
    Matrix m(d, d);
    for (int r = 0; r < d; ++r)
      for (int c = 0; c < d; ++c) m(r, c) = n[r * d + c];
    return FlowSpec::unipotent(m);
  }
  throw InvalidRange("--kind must be diagonal or unipotent");
}

struct Output {
  json report;                      // written to out_path or stdout
  std::string text;                 // raw text instead of report (JSON lines, CSV)
  std::vector<std::pair<std::string, std::string>> side_files;
};

Output run_command(const std::string& command, const json& p, std::uint64_t seed, int jobs,
                   const std::string& out_path) {
  Output o;
  if (command == "minima") {
    const LatticeBasis basis = load_basis(p["basis"].get<std::string>());
    const MinimaProfile profile = p["oracle"].get<bool>()
                                      ? brute_force_minima(basis, p["bound"].get<int>())
                                      : successive_minima(basis);
    o.report = minima_to_json(profile);
    o.report["method"] = p["oracle"].get<bool>() ? "brute_force" : "enumeration";
  } else if (command == "reduce") {
    const LatticeBasis basis = load_basis(p["basis"].get<std::string>());
    const std::string method = p["method"].get<std::string>();
    const auto minima = successive_minima(basis).values;
    if (method == "minkowski") {
      const LatticeBasis reduced = minkowski_reduce(basis);
      json ratios = json::array();
      for (int j = 0; j < reduced.dim(); ++j) ratios.push_back(reduced.column(j).norm() / minima[j]);
      o.report = {{"basis", basis_to_json(reduced)}, {"ratios", ratios}};
    } else if (method == "quasi") {
      const QuasiMinimalBasis q = quasi_minimal_basis(basis);
      Matrix cols(basis.dim(), basis.dim());
      json coeffs = json::array();
      for (int j = 0; j < basis.dim(); ++j) {
        cols.col(j) = q.vectors[j].embedding;
        coeffs.push_back(int_vector_to_json(q.vectors[j].coeffs));
      }
      o.report = {{"basis", basis_to_json(LatticeBasis(cols))},
                  {"coefficients", coeffs},
                  {"ratios", q.ratios},
                  {"bound", quasi_minimal_constant(basis.dim())}};
    } else {
      throw InvalidRange("--method must be minkowski or quasi");
    }
    o.report["minima"] = minima;
  } else if (command == "dual") {
    const LatticeBasis basis = load_basis(p["basis"].get<std::string>());
    const LatticeBasis d = dual(basis);
    o.report = {{"basis", basis_to_json(d)}, {"covolume", covolume(d)}};
  } else if (command == "sample") {
    const int d = p["dim"].get<int>();
    SamplerConfig config;
    config.dim = d;
    const auto kind = sampler_option(p);
    config.kind = kind ? *kind : (d == 2 ? SamplerKind::exact_d2 : SamplerKind::siegel);
    config.tilt = doubles(p["tilt"]);
    const SampleEnsemble ensemble = sample_ensemble(config, positive_int(p, "count"), seed, jobs);
    o.report = ensemble.header();
    std::ostringstream lines;
    for (const auto& s : ensemble.samples) {
      lines << json{{"basis", basis_to_json(s.basis)}, {"weight", s.weight}}.dump() << '\n';
    }
    o.text = lines.str();
  } else if (command == "siegel-check") {
    const SiegelCheck check = siegel_mc_check(
        p["dim"].get<int>(), p["k"].get<int>(), p["radius"].get<double>(), positive_int(p, "count"),
        seed, sampler_from_string(p["sampler"].get<std::string>()), jobs);
    o.report = check.to_json();
  } else if (command == "estimate-phi" || command == "estimate-tail") {
    EstimateOptions options;
    options.sampler = sampler_option(p);
    options.tilt = doubles(p["tilt"]);
    options.jobs = jobs;
    const auto deltas = doubles(p["deltas"]);
    const int d = p["dim"].get<int>();
    const int i = p["i"].get<int>();
    const int count = positive_int(p, "count");
    std::string csv;
    if (command == "estimate-phi") {
      const ExperimentReport report = estimate_phi(d, i, deltas, count, seed, options);
      o.report = report.to_json();
      csv = report.to_csv();
    } else {
      const TailReport report = estimate_tail(d, i, deltas, count, seed, options);
      o.report = report.to_json();
      csv = report.primal.to_csv();
    }
    const std::string csv_path = p["csv"].get<std::string>();
    if (!csv_path.empty()) o.side_files.emplace_back(csv_path, csv);
  } else if (command == "flow-law") {
    const FlowSpec spec = flow_from_params(p);
    const int i = p["i"].get<int>();
    const auto traces = log_law_ensemble(spec, i, p["tmax"].get<double>(), positive_int(p, "grid"),
                                         positive_int(p, "seeds"), seed, jobs);
    const double limit = 1.0 / (spec.dim() * i);
    std::ostringstream csv;
    csv.precision(17);
    csv << "seed,t,delta_i,running_ratio\n";
    json finals = json::array();
    int in_band = 0;
    for (const auto& [s, trace] : traces) {
      for (std::size_t k = 0; k < trace.times.size(); ++k) {
        csv << s << ',' << trace.times[k] << ',' << trace.delta_values[k] << ','
            << trace.running_ratio[k] << '\n';
      }
      const double last = trace.running_ratio.back();
      finals.push_back(last);
      if (last >= 0.5 * limit && last <= 1.5 * limit) ++in_band;
    }
    o.report = {{"limit", limit},
                {"final_running_ratio", finals},
                {"band", {0.5 * limit, 1.5 * limit}},
                {"in_band_share", static_cast<double>(in_band) / traces.size()}};
    const bool csv_out = out_path.size() >= 4 && out_path.substr(out_path.size() - 4) == ".csv";
    if (csv_out) {
      o.text = csv.str();
    } else {
      o.report["trace_csv"] = csv.str();
    }
  } else if (command == "hit-time") {
    const FlowSpec spec = flow_from_params(p);
    const int i = p["i"].get<int>();
    const auto levels = doubles(p["levels"]);
    const long m_max = p["mmax"].get<long>();
    const std::string basis_path = p["basis"].get<std::string>();
    if (!basis_path.empty()) {
      const LatticeBasis basis = load_basis(basis_path);
      json hits = json::array();
      for (double t : levels) {
        const auto m = hitting_time(spec, basis, i, std::exp(-t), m_max);
        hits.push_back(m ? json(*m) : json(nullptr));
      }
      o.report = {{"levels", levels}, {"hitting_times", hits}};
    } else {
      o.report = hitting_time_regression(spec, i, levels, positive_int(p, "seeds"), seed, m_max, jobs)
                     .to_json();
    }
  } else if (command == "constants") {
    const VolumeConstants c = volume_constants(p["dim"].get<int>(), p["k"].get<int>());
    o.report = {{"vol_k", c.vol_k}, {"vol_x", c.vol_x}, {"c_dk", c.c_dk}};
  } else {
    throw SchemaError("unknown command '" + command + "'");
  }
  return o;
}

std::string input_hash(const RunConfig& config, const json& params) {
  std::string data = json{{"command", config.command}, {"params", params}, {"seed", config.seed}}.dump();
  if (params.contains("basis") && !params["basis"].get<std::string>().empty()) {
    data += read_file(params["basis"].get<std::string>());
  }
  return sha256_hex(data);
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw SchemaError("cannot write '" + path + "'");
  f << text;
}

}  // namespace

json RunConfig::to_json() const {
  // jobs is left out: reports must not depend on the worker count.
  return {{"command", command}, {"params", params}, {"seed", seed}, {"out_path", out_path}};
}

RunConfig RunConfig::from_json(const json& j) {
  if (!j.is_object()) throw SchemaError("config must be a JSON object");
  RunConfig c;
  for (const auto& [key, value] : j.items()) {
    if (key == "command" && value.is_string()) {
      c.command = value.get<std::string>();
    } else if (key == "params" && value.is_object()) {
      c.params = value;
    } else if (key == "seed" && value.is_number_unsigned()) {
      c.seed = value.get<std::uint64_t>();
    } else if (key == "seed" && value.is_number_integer() && value.get<long long>() >= 0) {
      c.seed = value.get<std::uint64_t>();
    } else if (key == "jobs" && value.is_number_integer()) {
      c.jobs = value.get<int>();
    } else if (key == "out_path" && value.is_string()) {
      c.out_path = value.get<std::string>();
    } else {
      throw SchemaError("config: unknown key or wrong type for '" + key + "'");
    }
  }
  defaults_for(c.command);
  return c;
}

int run(const RunConfig& config, std::ostream& out, std::ostream& err) {
  try {
    if (config.jobs < 1) throw InvalidRange("--jobs must be at least 1");
    const json params = effective_params(config.command, config.params);
    RunConfig effective = config;
    effective.params = params;
    Output o = run_command(config.command, params, config.seed, config.jobs, config.out_path);

    json provenance = {{"config", effective.to_json()}, {"input_hash", input_hash(config, params)}};
    std::string body;
    if (!o.text.empty()) {
      if (config.command == "sample") {
        json header = o.report;
        header.update(provenance);
        body = header.dump() + "\n" + o.text;
      } else {
        body = o.text;
        json meta = o.report;
        meta.update(provenance);
        o.side_files.emplace_back(config.out_path + ".meta.json", meta.dump(2) + "\n");
      }
    } else {
      json report = provenance;
      report["result"] = o.report;
      body = report.dump(2) + "\n";
    }
    if (config.out_path.empty()) {
      out << body;
    } else {
      write_file(config.out_path, body);
    }
    for (const auto& [path, text] : o.side_files) {
      if (path == ".meta.json") continue;
      write_file(path, text);
    }
    return kExitOk;
  } catch (const FeasibilityError& e) {
    err << "feasibility error: " << e.what() << '\n';
    return kExitFeasibility;
  } catch (const ValidationError& e) {
    err << "validation error: " << e.what() << '\n';
    return kExitValidation;
  } catch (const json::exception& e) {
    err << "validation error: " << e.what() << '\n';
    return kExitValidation;
  }
}

int main(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"minklab: successive minima, Haar lattices and Siegel-type experiments"};
  app.require_subcommand(0, 1);
  app.fallthrough();

  std::uint64_t seed = 0;
  int jobs = 1;
  std::string out_path;
  std::string config_path;
  app.add_option("--seed", seed, "RNG seed");
  app.add_option("--jobs", jobs, "worker threads");
  app.add_option("--out", out_path, "output file (default: stdout)");
  app.add_option("--config", config_path, "replay a config (or a report embedding one)");

  // One string option per parameter; converted using the type of its default.
  std::map<std::string, std::map<std::string, std::string>> raw;
  std::map<std::string, std::map<std::string, bool>> flags;
  std::map<std::string, CLI::App*> subs;
  for (const auto& [command, defaults] : command_defaults()) {
    CLI::App* sub = app.add_subcommand(command, command_help(command));
    subs[command] = sub;
    for (const auto& [key, def] : defaults.items()) {
      if (def.is_boolean()) {
        sub->add_flag("--" + key, flags[command][key]);
      } else {
        sub->add_option("--" + key, raw[command][key])->default_str(def.is_string() ? def.get<std::string>() : def.dump());
      }
    }
  }

  std::vector<std::string> argv(args.rbegin(), args.rend());
  try {
    app.parse(argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "usage error: " << e.what() << '\n';
    return kExitValidation;
  }

  RunConfig config;
  try {
    if (!config_path.empty()) {
      json j;
      try {
        j = json::parse(read_file(config_path));
      } catch (const json::exception& e) {
        throw SchemaError("config file is not valid JSON: " + std::string(e.what()));
      }
      if (j.is_object() && j.contains("config")) j = j["config"];
      config = RunConfig::from_json(j);
      config.jobs = jobs;
      if (!out_path.empty()) config.out_path = out_path;
      return run(config, out, err);
    }

    CLI::App* chosen = nullptr;
    for (const auto& [command, sub] : subs)
      if (sub->parsed()) chosen = sub;
    if (chosen == nullptr) {
      err << "usage error: a command is required\n" << app.help();
      return kExitValidation;
    }
    config.command = chosen->get_name();
    config.seed = seed;
    config.jobs = jobs;
    config.out_path = out_path;
    const json& defaults = defaults_for(config.command);
    for (const auto& [key, def] : defaults.items()) {
      if (def.is_boolean()) {
        if (flags[config.command][key]) config.params[key] = true;
        continue;
      }
      if (chosen->count("--" + key) == 0) continue;
      const std::string& text = raw[config.command][key];
      try {
        if (def.is_string()) {
          config.params[key] = text;
        } else if (def.is_number_integer()) {
          std::size_t used = 0;
          const double v = std::stod(text, &used);
          if (used != text.size() || v != std::floor(v)) throw std::invalid_argument(text);
          config.params[key] = static_cast<long>(v);
        } else if (def.is_number()) {
          std::size_t used = 0;
          config.params[key] = std::stod(text, &used);
          if (used != text.size()) throw std::invalid_argument(text);
        } else {
          json list = json::array();
          std::stringstream ss(text);
          std::string item;
          while (std::getline(ss, item, ',')) {
            std::size_t used = 0;
            list.push_back(std::stod(item, &used));
            if (used != item.size()) throw std::invalid_argument(item);
          }
          config.params[key] = list;
        }
      } catch (const std::logic_error&) {
        throw SchemaError("cannot parse --" + key + " '" + text + "'");
      }
    }
  } catch (const ValidationError& e) {
    err << "validation error: " << e.what() << '\n';
    return kExitValidation;
  }
  return run(config, out, err);
}

}  // namespace minklab::cli
