// densbound: compute density upper bounds, tabulate the reflected-kernel
// density, run seeded simulations, and run the verification suites.
//
// Exit codes: 0 success, 2 invalid input, 3 internal dominance violation,
// 4 drift-bound violation, 5 verification failure.

#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "densbound/bounds.hpp"
#include "densbound/drbm.hpp"
#include "densbound/probe.hpp"
#include "densbound/sim.hpp"
#include "densbound/verify.hpp"

using json = nlohmann::ordered_json;
using namespace densbound;

namespace {

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string utc_timestamp() {
  const auto now = std::chrono::system_clock::now();
  const std::time_t t = std::chrono::system_clock::to_time_t(now);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&t));
  return buf;
}

// RFC-4180: quote a field if it contains comma, quote or newline.
std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

struct Output {
  std::string path;    // empty = stdout
  std::string format;  // csv | json

  void write(const std::string& body) const {
    if (path.empty()) {
      std::cout << body;
      return;
    }
    std::filesystem::path p(path);
    if (p.is_relative()) {
      if (const char* dir = std::getenv("DENSBOUND_OUTDIR")) p = std::filesystem::path(dir) / p;
    }
    std::ofstream f(p);
    if (!f) throw std::invalid_argument("cannot open output path: " + p.string());
    f << body;
  }
};

// key=value pairs of the merged configuration, embedded in every document.
using Config = std::vector<std::pair<std::string, std::string>>;

std::string csv_document(const std::string& command, const Config& cfg,
                         const std::vector<std::string>& header,
                         const std::vector<std::vector<std::string>>& rows) {
  std::ostringstream os;
  os << "# densbound " << command << "\n";
  os << "# timestamp=" << utc_timestamp() << "\n";
  for (const auto& [k, v] : cfg) os << "# " << k << "=" << v << "\n";
  for (std::size_t i = 0; i < header.size(); ++i)
    os << (i ? "," : "") << csv_field(header[i]);
  os << "\n";
  for (const auto& row : rows) {
    for (std::size_t i = 0; i < row.size(); ++i) os << (i ? "," : "") << csv_field(row[i]);
    os << "\n";
  }
  return os.str();
}

std::string json_document(const std::string& command, const Config& cfg, json result) {
  json doc;
  doc["command"] = command;
  doc["timestamp"] = utc_timestamp();
  json c = json::object();
  for (const auto& [k, v] : cfg) c[k] = v;
  doc["config"] = c;
  doc["result"] = std::move(result);
  return doc.dump(2) + "\n";
}

std::vector<double> parse_vector(const std::string& s) {
  std::vector<double> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    out.push_back(std::stod(item));
  }
  return out;
}

struct GlobalOpts {
  std::string out;
  std::string format;
  std::uint64_t seed = 1;
  int threads = 0;
};

// ------------------------------------------------------------------ bound

int cmd_bound(bool use_global, bool sharp, int d, double C, double t, double l,
              const std::string& x0_s, const std::string& x_s, double tail_tol,
              const GlobalOpts& g) {
  const std::vector<double> x0 = parse_vector(x0_s);
  const std::vector<double> x = parse_vector(x_s);
  Config cfg{{"mode", use_global ? "global" : "local"},
             {"d", std::to_string(d)},
             {"C", fmt(C)},
             {"t", fmt(t)},
             {"x0", x0_s},
             {"x", x_s}};
  if (!use_global) {
    cfg.emplace_back("l", fmt(l));
    cfg.emplace_back("sharp", sharp ? "true" : "false");
    cfg.emplace_back("tail_tol", fmt(tail_tol));
  }

  json result;
  std::vector<std::vector<std::string>> rows;
  bool cross_check_failed = false;
  if (use_global) {
    const auto gb = bounds::global_density_bound(x0, x, t, C, d);
    result["value"] = gb.value;
    result["crude"] = gb.crude;
    rows.push_back({fmt(gb.value), fmt(gb.crude)});
    const Output out{g.out, g.format};
    out.write(g.format == "csv" ? csv_document("bound", cfg, {"value", "crude"}, rows)
                                : json_document("bound", cfg, result));
    return 0;
  }

  const bounds::LocalBoundInput in{x0, x, t, C, l, d};
  const auto rep = bounds::local_density_bound(in);
  result["a"] = rep.a;
  result["z"] = rep.z;
  result["factor"] = rep.factor;
  result["product"] = rep.product;
  if (sharp) {
    const auto sb = bounds::sharp_local_bound(in, {tail_tol, 1000000});
    result["sharp"] = {{"value", sb.value}, {"certified_error", sb.certified_error}};
    cross_check_failed = sb.value > rep.product + sb.certified_error;
    result["sharp_le_closed_form"] = !cross_check_failed;
  }
  for (int j = 0; j < d; ++j)
    rows.push_back({std::to_string(j), fmt(rep.a[j]), fmt(rep.z[j]), fmt(rep.factor[j]),
                    fmt(rep.product)});
  const Output out{g.out, g.format};
  out.write(g.format == "csv"
                ? csv_document("bound", cfg, {"j", "a", "z", "factor", "product"}, rows)
                : json_document("bound", cfg, result));
  return cross_check_failed ? 3 : 0;
}

// ------------------------------------------------------------------- drbm

int cmd_drbm(const std::string& C_s, const std::string& l_s, const std::string& t_s,
             const std::string& x_s, double tail_tol, long n_max, const GlobalOpts& g) {
  const auto Cs = parse_vector(C_s);
  const auto ls = parse_vector(l_s);
  const auto ts = parse_vector(t_s);
  const auto xs = parse_vector(x_s);
  if (Cs.empty() || ls.empty() || ts.empty() || xs.empty())
    throw std::invalid_argument("empty grid: every one of --C --l --t --x needs a value");

  Config cfg{{"C", C_s}, {"l", l_s}, {"t", t_s},
             {"x", x_s}, {"tail_tol", fmt(tail_tol)}, {"n_max", std::to_string(n_max)}};

  bool dominance_violated = false;
  std::vector<std::vector<std::string>> rows;
  json jrows = json::array();
  for (double C : Cs)
    for (double l : ls)
      for (double t : ts)
        for (double x : xs) {
          const drbm::DrbmParams p{C, l, t, x};
          p.validate();
          const auto s = drbm::transition_density_at_zero(p, {tail_tol, n_max});
          const double bound = drbm::density_upper_bound(p);
          const double I = drbm::integral_I(p);
          const double F = drbm::euler_maclaurin_error_F(p);
          const bool flag = s.value - s.tail_bound > bound;
          dominance_violated |= flag;
          rows.push_back({fmt(C), fmt(l), fmt(t), fmt(x), fmt(s.value),
                          std::to_string(s.n_terms), fmt(s.tail_bound), fmt(bound), fmt(I),
                          fmt(F), flag ? "1" : "0"});
          jrows.push_back({{"C", C}, {"l", l}, {"t", t}, {"x", x}, {"series", s.value},
                           {"n_terms", s.n_terms}, {"tail_bound", s.tail_bound},
                           {"bound", bound}, {"I", I}, {"F", F}, {"flag", flag}});
        }

  const Output out{g.out, g.format};
  out.write(g.format == "json"
                ? json_document("drbm", cfg, jrows)
                : csv_document("drbm", cfg,
                               {"C", "l", "t", "x", "series", "n_terms", "tail_bound", "bound",
                                "I", "F", "flag"},
                               rows));
  return dominance_violated ? 3 : 0;
}

// --------------------------------------------------------------- simulate

int cmd_simulate(const std::string& preset, double C, const std::string& center_s,
                 const std::string& x0_s, int d, double dt, double horizon, long n_paths,
                 double l, const std::string& mode, int bins, const GlobalOpts& g) {
  Config cfg{{"preset", preset}, {"C", fmt(C)},   {"center", center_s},
             {"x0", x0_s},       {"d", std::to_string(d)}, {"dt", fmt(dt)},
             {"t", fmt(horizon)}, {"n_paths", std::to_string(n_paths)},
             {"l", fmt(l)},      {"mode", mode},  {"bins", std::to_string(bins)},
             {"seed", std::to_string(g.seed)}};

  const sim::SimConfig sc{dt, horizon, n_paths, g.seed, d};
  sim::PathBatch batch;
  if (preset == "drbm") {
    const std::vector<double> x0 = parse_vector(x0_s);
    if (d != 1 || x0.size() != 1)
      throw std::invalid_argument("drbm preset requires d = 1 and a scalar --x0");
    batch = sim::simulate_drbm({C, l, horizon, x0[0]}, sc, g.threads);
  } else {
    const std::vector<double> x0 = parse_vector(x0_s);
    std::vector<double> center = parse_vector(center_s);
    if (center.empty()) center.assign(d, 0.0);
    const auto model = sim::preset_drift(preset, C, center, d);
    batch = sim::euler_maruyama(x0, model, sc, g.threads);
  }

  const Output out{g.out, g.format};
  if (mode == "histogram") {
    if (bins < 1) throw std::invalid_argument("histogram mode needs --bins >= 1");
    if (d != 1) throw std::invalid_argument("histogram mode requires d = 1");
    double lo = batch.terminal[0], hi = batch.terminal[0];
    for (double v : batch.terminal) {
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
    if (preset == "drbm") {
      lo = 0.0;
      hi = l;
    }
    std::vector<long> counts(bins, 0);
    for (double v : batch.terminal) {
      int b = static_cast<int>((v - lo) / (hi - lo) * bins);
      b = std::clamp(b, 0, bins - 1);
      ++counts[b];
    }
    std::vector<std::vector<std::string>> rows;
    json jrows = json::array();
    for (int b = 0; b < bins; ++b) {
      const double b0 = lo + (hi - lo) * b / bins;
      const double b1 = lo + (hi - lo) * (b + 1) / bins;
      rows.push_back({fmt(b0), fmt(b1), std::to_string(counts[b])});
      jrows.push_back({{"lo", b0}, {"hi", b1}, {"count", counts[b]}});
    }
    out.write(g.format == "json"
                  ? json_document("simulate", cfg, jrows)
                  : csv_document("simulate", cfg, {"bin_lo", "bin_hi", "count"}, rows));
    return 0;
  }

  // terminal samples
  std::vector<std::string> header{"path"};
  for (int j = 0; j < d; ++j) header.push_back("x" + std::to_string(j));
  std::vector<std::vector<std::string>> rows;
  rows.reserve(batch.n_paths);
  for (long i = 0; i < batch.n_paths; ++i) {
    std::vector<std::string> row{std::to_string(i)};
    for (int j = 0; j < d; ++j) row.push_back(fmt(batch.terminal[i * d + j]));
    rows.push_back(std::move(row));
  }
  if (g.format == "json") {
    json jrows = json::array();
    for (long i = 0; i < batch.n_paths; ++i) {
      json r = json::array();
      for (int j = 0; j < d; ++j) r.push_back(batch.terminal[i * d + j]);
      jrows.push_back(std::move(r));
    }
    out.write(json_document("simulate", cfg, jrows));
  } else {
    out.write(csv_document("simulate", cfg, header, rows));
  }
  return 0;
}

// ----------------------------------------------------------------- verify

int cmd_verify(const std::string& suite, double scale, const GlobalOpts& g) {
  const auto checks = verify::run_suite(suite, {scale, g.threads});
  Config cfg{{"suite", suite}, {"scale", fmt(scale)},
             {"threads", std::to_string(g.threads)}};
  json jchecks = json::array();
  std::vector<std::vector<std::string>> rows;
  for (const auto& c : checks) {
    jchecks.push_back({{"criterion", c.criterion}, {"name", c.name}, {"pass", c.pass},
                       {"measured", c.measured}, {"tolerance", c.tolerance},
                       {"detail", c.detail}});
    rows.push_back({std::to_string(c.criterion), c.name, c.pass ? "pass" : "FAIL",
                    fmt(c.measured), fmt(c.tolerance), c.detail});
  }
  const bool ok = verify::all_passed(checks);
  json result{{"checks", jchecks}, {"all_pass", ok}};
  const Output out{g.out, g.format};
  out.write(g.format == "csv"
                ? csv_document("verify", cfg,
                               {"criterion", "name", "status", "measured", "tolerance",
                                "detail"},
                               rows)
                : json_document("verify", cfg, result));
  return ok ? 0 : 5;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Explicit density upper bounds for Ito processes with irregular drift"};
  app.require_subcommand(1);
  app.fallthrough();  // global flags may appear after the subcommand
  app.set_config("--config")->description("configuration file (TOML/INI); flags override it");

  GlobalOpts g;
  app.add_option("--out", g.out, "output path (stdout if omitted); relative paths resolve against $DENSBOUND_OUTDIR");
  app.add_option("--format", g.format, "csv | json")->check(CLI::IsMember({"csv", "json"}));
  app.add_option("--seed", g.seed, "RNG seed");
  app.add_option("--threads", g.threads, "simulation threads (never affects numbers)");

  // bound
  auto* bound = app.add_subcommand("bound", "density upper bound for an Ito process");
  bool use_global = false, use_local = false, sharp = false;
  int d = 1;
  double C = 1.0, t = 1.0, l = 1.0, tail_tol = 1e-10;
  std::string x0_s = "0", x_s = "0";
  bound->add_flag("--global", use_global, "globally bounded drift (no geometry)");
  bound->add_flag("--local", use_local, "locally bounded drift on a box of half-width l");
  bound->add_flag("--sharp", sharp, "also report the series-based bound");
  bound->add_option("--d", d);
  bound->add_option("--C", C);
  bound->add_option("--t", t);
  bound->add_option("--l", l);
  bound->add_option("--x0", x0_s, "comma-separated initial state");
  bound->add_option("--x", x_s, "comma-separated evaluation point");
  bound->add_option("--tail-tol", tail_tol);

  // drbm
  auto* drbm_cmd = app.add_subcommand("drbm", "tabulate the reflected-kernel density and bounds");
  std::string Cg, lg, tg, xg;
  double dtail = 1e-10;
  long n_max = 1000000;
  drbm_cmd->add_option("--C", Cg, "comma-separated drift bounds");
  drbm_cmd->add_option("--l", lg, "comma-separated interval lengths");
  drbm_cmd->add_option("--t", tg, "comma-separated times");
  drbm_cmd->add_option("--x", xg, "comma-separated start points");
  drbm_cmd->add_option("--tail-tol", dtail);
  drbm_cmd->add_option("--n-max", n_max);

  // simulate
  auto* simulate = app.add_subcommand("simulate", "seeded Monte Carlo simulation");
  std::string preset = "zero", center_s, sx0 = "0", mode = "samples";
  double sC = 1.0, dt = 1e-3, horizon = 1.0, sl = 1.0;
  long n_paths = 10000;
  int sd = 1, bins = 0;
  simulate->add_option("--preset", preset, "zero|constant|bang-bang|running-max|drbm");
  simulate->add_option("--C", sC);
  simulate->add_option("--center", center_s, "bang-bang center (defaults to the origin)");
  simulate->add_option("--x0", sx0);
  simulate->add_option("--d", sd);
  simulate->add_option("--dt", dt);
  simulate->add_option("--t", horizon);
  simulate->add_option("--n-paths", n_paths);
  simulate->add_option("--l", sl, "interval length for the drbm preset");
  simulate->add_option("--mode", mode)->check(CLI::IsMember({"samples", "histogram"}));
  simulate->add_option("--bins", bins);

  // verify
  auto* verify_cmd = app.add_subcommand("verify", "run a verification suite");
  std::string suite = "all";
  double scale = 1.0;
  verify_cmd->add_option("--suite", suite, "identities|dominance|comparison|montecarlo|all");
  verify_cmd->add_option("--scale", scale, "Monte Carlo size multiplier");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  if (g.format.empty()) g.format = app.got_subcommand("verify") ? "json" : "csv";

  try {
    if (app.got_subcommand("bound")) {
      if (use_global == use_local)
        throw std::invalid_argument("exactly one of --global / --local is required");
      return cmd_bound(use_global, sharp, d, C, t, l, x0_s, x_s, tail_tol, g);
    }
    if (app.got_subcommand("drbm"))
      return cmd_drbm(Cg, lg, tg, xg, dtail, n_max, g);
    if (app.got_subcommand("simulate"))
      return cmd_simulate(preset, sC, center_s, sx0, sd, dt, horizon, n_paths, sl, mode, bins, g);
    if (app.got_subcommand("verify"))
      return cmd_verify(suite, scale, g);
  } catch (const sim::DriftBoundViolation& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 4;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::domain_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
