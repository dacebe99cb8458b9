// Command-line front end. Talks to the numerics only through rigged.h.

#include <unistd.h>

#include <cctype>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "rigged/rigged.h"

namespace {

using json = nlohmann::ordered_json;

constexpr int kExitOk = 0;
constexpr int kExitChecksFailed = 1;
constexpr int kExitInvalid = 2;
constexpr int kExitSolver = 3;

struct Failure {
  int code;
  std::string message;
};

struct RunConfig {
  double v1 = 10.0, v2 = 4.0, a = 1.0, b = 2.0, c = 1.0;
  double k_max = 0.0;  // 0 selects the library default
  int nodes = 2048;
  double r_max = 10.0;
  int r_nodes = 501;
  double tol_root = 0.0, tol_quad = 0.0, tol_match = 0.0;  // 0 keeps defaults
  std::string format;
  std::string path;
};

double parse_number(const std::string& key, const std::string& text) {
  try {
    std::size_t used = 0;
    const double v = std::stod(text, &used);
    if (used != text.size()) throw std::invalid_argument(text);
    if (!std::isfinite(v)) throw std::invalid_argument(text);
    return v;
  } catch (const std::exception&) {
    throw Failure{kExitInvalid, key + ": not a number: '" + text + "'"};
  }
}

int parse_count(const std::string& key, const std::string& text) {
  const double v = parse_number(key, text);
  if (v != std::floor(v) || v < 2 || v > 1e8) {
    throw Failure{kExitInvalid, key + ": must be an integer >= 2"};
  }
  return static_cast<int>(v);
}

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string::npos) return "";
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

RunConfig load_config(const std::string& path) {
  RunConfig cfg;
  if (path.empty()) return cfg;
  std::ifstream in(path);
  if (!in) throw Failure{kExitInvalid, "cannot read config '" + path + "'"};
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw Failure{kExitInvalid, path + ":" + std::to_string(line_no) + ": expected key = value"};
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    auto positive = [&](double& slot) {
      slot = parse_number(key, value);
      if (!(slot > 0.0)) throw Failure{kExitInvalid, key + ": must be > 0"};
    };
    if (key == "potential.v1") cfg.v1 = parse_number(key, value);
    else if (key == "potential.v2") cfg.v2 = parse_number(key, value);
    else if (key == "potential.a") cfg.a = parse_number(key, value);
    else if (key == "potential.b") cfg.b = parse_number(key, value);
    else if (key == "potential.c") cfg.c = parse_number(key, value);
    else if (key == "grid.k_max") positive(cfg.k_max);
    else if (key == "grid.nodes") cfg.nodes = parse_count(key, value);
    else if (key == "grid.r_max") positive(cfg.r_max);
    else if (key == "grid.r_nodes") cfg.r_nodes = parse_count(key, value);
    else if (key == "tol.root") positive(cfg.tol_root);
    else if (key == "tol.quad") positive(cfg.tol_quad);
    else if (key == "tol.match") positive(cfg.tol_match);
    else if (key == "output.format") cfg.format = value;
    else if (key == "output.path") cfg.path = value;
    else throw Failure{kExitInvalid, path + ":" + std::to_string(line_no) + ": unknown key '" + key + "'"};
  }
  return cfg;
}

int exit_code_for(rigged_status s) {
  return s == RIGGED_INVALID_ARGUMENT ? kExitInvalid : kExitSolver;
}

void check(rigged_status s, const std::string& context) {
  if (s != RIGGED_OK) {
    throw Failure{exit_code_for(s),
                  context + ": " + rigged_status_name(s) + ": " + rigged_last_error()};
  }
}

class Potential {
 public:
  explicit Potential(const RunConfig& cfg) {
    check(rigged_potential_create(cfg.v1, cfg.v2, cfg.a, cfg.b, cfg.c, &p_), "potential");
  }
  ~Potential() { rigged_potential_destroy(p_); }
  Potential(const Potential&) = delete;
  Potential& operator=(const Potential&) = delete;
  rigged_potential* get() const { return p_; }

 private:
  rigged_potential* p_ = nullptr;
};

std::string number(double x) {
  if (!std::isfinite(x)) return "nan";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.16e", x);
  return buf;
}

// Writes to stdout, or to `path` via a temporary file and rename.
void emit(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    std::cout.flush();
    return;
  }
  const std::filesystem::path target(path);
  const std::filesystem::path tmp =
      target.string() + ".tmp." + std::to_string(static_cast<long>(::getpid()));
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Failure{kExitInvalid, "cannot write '" + tmp.string() + "'"};
    out << text;
    out.flush();
    if (!out) throw Failure{kExitInvalid, "write failed for '" + tmp.string() + "'"};
  }
  std::error_code ec;
  std::filesystem::rename(tmp, target, ec);
  if (ec) {
    std::filesystem::remove(tmp, ec);
    throw Failure{kExitInvalid, "cannot move output into '" + path + "'"};
  }
}

std::string pick_format(const std::string& flag, const RunConfig& cfg,
                        const std::string& fallback) {
  const std::string f = !flag.empty() ? flag : (!cfg.format.empty() ? cfg.format : fallback);
  if (f != "csv" && f != "json") {
    throw Failure{kExitInvalid, "format must be csv or json, got '" + f + "'"};
  }
  return f;
}

// "3", "3,0.5" or "3+0.5i"/"3-0.5i" as a complex number.
std::pair<double, double> parse_complex(const std::string& key, const std::string& text) {
  const auto comma = text.find(',');
  if (comma != std::string::npos) {
    return {parse_number(key, trim(text.substr(0, comma))),
            parse_number(key, trim(text.substr(comma + 1)))};
  }
  if (!text.empty() && text.back() == 'i') {
    const auto split = text.find_last_of("+-", text.size() - 2);
    if (split != std::string::npos && split > 0 && text[split - 1] != 'e' &&
        text[split - 1] != 'E') {
      return {parse_number(key, text.substr(0, split)),
              parse_number(key, text.substr(split, text.size() - split - 1))};
    }
  }
  return {parse_number(key, text), 0.0};
}

struct Common {
  std::string config;
  std::string out;
  std::string format;
};

void add_common(CLI::App* cmd, Common& c) {
  cmd->add_option("--config", c.config, "key = value config file");
  cmd->add_option("--out", c.out, "output file (stdout when absent)");
  cmd->add_option("--format", c.format, "csv or json");
}

std::string output_path(const Common& c, const RunConfig& cfg) {
  return !c.out.empty() ? c.out : cfg.path;
}

int cmd_spectrum(const Common& common) {
  const RunConfig cfg = load_config(common.config);
  const std::string format = pick_format(common.format, cfg, "csv");
  Potential pot(cfg);

  size_t count = 0;
  check(rigged_bound_states(pot.get(), nullptr, 0, &count), "bound states");
  std::vector<rigged_bound_state> states(count);
  check(rigged_bound_states(pot.get(), states.data(), count, &count), "bound states");

  double k_max = cfg.k_max;
  if (k_max <= 0.0) check(rigged_default_k_max(pot.get(), &k_max), "grid");
  struct Row {
    double k, e, rho, s_re, s_im;
  };
  std::vector<Row> rows;
  const int samples = cfg.nodes;
  for (int i = 1; i <= samples; ++i) {
    Row row{};
    row.k = k_max * i / samples;
    row.e = row.k * row.k / cfg.c;
    const double nan = std::nan("");
    if (rigged_rho(pot.get(), row.e, &row.rho) != RIGGED_OK) row.rho = nan;
    if (rigged_s_matrix(pot.get(), row.k, &row.s_re, &row.s_im) != RIGGED_OK) {
      row.s_re = row.s_im = nan;
    }
    rows.push_back(row);
  }

  std::ostringstream out;
  if (format == "json") {
    json j;
    j["potential"] = {{"v1", cfg.v1}, {"v2", cfg.v2}, {"a", cfg.a}, {"b", cfg.b}, {"c", cfg.c}};
    j["bound_states"] = json::array();
    for (const auto& s : states) {
      j["bound_states"].push_back({{"n", s.n},
                                   {"energy", s.energy},
                                   {"kappa", s.kappa},
                                   {"norm_residue", s.norm_residue},
                                   {"norm_integral", s.norm_integral},
                                   {"mismatch", s.mismatch}});
    }
    j["continuum"] = json::array();
    auto finite = [](double x) { return std::isfinite(x) ? json(x) : json(nullptr); };
    for (const auto& r : rows) {
      j["continuum"].push_back({{"k", r.k},
                                {"e", r.e},
                                {"rho", finite(r.rho)},
                                {"s_re", finite(r.s_re)},
                                {"s_im", finite(r.s_im)},
                                {"s_phase", finite(std::atan2(r.s_im, r.s_re))}});
    }
    out << j.dump(2) << "\n";
  } else {
    out << "bound_states: " << states.size() << "\n";
    out << "n,energy,kappa,norm_residue,norm_integral,mismatch\n";
    for (const auto& s : states) {
      out << s.n << "," << number(s.energy) << "," << number(s.kappa) << ","
          << number(s.norm_residue) << "," << number(s.norm_integral) << ","
          << number(s.mismatch) << "\n";
    }
    out << "continuum: " << rows.size() << "\n";
    out << "k,e,rho,s_phase\n";
    for (const auto& r : rows) {
      out << number(r.k) << "," << number(r.e) << "," << number(r.rho) << ","
          << number(std::atan2(r.s_im, r.s_re)) << "\n";
    }
  }
  emit(output_path(common, cfg), out.str());
  return kExitOk;
}

struct EigenArgs {
  std::string family;
  std::string energy;
  std::string momentum;
  std::optional<double> r_min, r_max;
  std::optional<int> r_nodes;
};

int cmd_eigen(const Common& common, const EigenArgs& args) {
  const RunConfig cfg = load_config(common.config);
  const std::string format = pick_format(common.format, cfg, "csv");
  if (args.family.empty()) throw Failure{kExitInvalid, "--family is required"};
  if (args.energy.empty() == args.momentum.empty() && args.family.rfind("bound:", 0) != 0) {
    throw Failure{kExitInvalid, "give exactly one of --energy or --momentum"};
  }
  Potential pot(cfg);

  double x_re = 0.0, x_im = 0.0;
  if (!args.energy.empty()) {
    std::tie(x_re, x_im) = parse_complex("--energy", args.energy);
  } else if (!args.momentum.empty()) {
    const auto [k_re, k_im] = parse_complex("--momentum", args.momentum);
    if (args.family == "momentum_ket") {
      x_re = k_re;
    } else {
      x_re = (k_re * k_re - k_im * k_im) / cfg.c;
      x_im = 2.0 * k_re * k_im / cfg.c;
    }
  }
  const double lo = args.r_min.value_or(0.0);
  const double hi = args.r_max.value_or(cfg.r_max);
  const int n = args.r_nodes.value_or(cfg.r_nodes);
  if (!(lo >= 0.0) || !(hi > lo) || n < 2) {
    throw Failure{kExitInvalid, "need 0 <= r-min < r-max and r-nodes >= 2"};
  }
  std::vector<double> r(n), re(n), im(n);
  for (int i = 0; i < n; ++i) r[i] = lo + (hi - lo) * i / (n - 1);
  check(rigged_sample_wave(pot.get(), args.family.c_str(), x_re, x_im, r.data(), r.size(),
                           re.data(), im.data()),
        "eigen " + args.family);

  std::ostringstream out;
  if (format == "json") {
    json j;
    j["family"] = args.family;
    j["r"] = r;
    j["re"] = re;
    j["im"] = im;
    out << j.dump(2) << "\n";
  } else {
    out << "r,re,im\n";
    for (int i = 0; i < n; ++i) {
      out << number(r[i]) << "," << number(re[i]) << "," << number(im[i]) << "\n";
    }
  }
  emit(output_path(common, cfg), out.str());
  return kExitOk;
}

int cmd_verify(const Common& common, const std::string& suite) {
  const RunConfig cfg = load_config(common.config);
  const std::string format = pick_format(common.format, cfg, "json");
  Potential pot(cfg);
  rigged_verify_options opts{cfg.tol_match, cfg.tol_quad, cfg.tol_root, cfg.k_max, cfg.nodes};
  char* raw = nullptr;
  int all_pass = 0;
  check(rigged_verify(pot.get(), suite.c_str(), &opts, &raw, &all_pass), "verify " + suite);
  const std::string text(raw);
  rigged_string_free(raw);

  std::ostringstream out;
  if (format == "json") {
    out << text << "\n";
  } else {
    out << "name,measured,tolerance,pass\n";
    for (const auto& row : json::parse(text)) {
      const double measured = row["measured"].is_null() ? std::nan("") : row["measured"].get<double>();
      out << row["name"].get<std::string>() << "," << number(measured) << ","
          << number(row["tolerance"].get<double>()) << ","
          << (row["pass"].get<bool>() ? "true" : "false") << "\n";
    }
  }
  emit(output_path(common, cfg), out.str());
  return all_pass ? kExitOk : kExitChecksFailed;
}

// Reads "r,re,im" rows (header optional).
void read_samples(const std::string& path, std::vector<double>& r, std::vector<double>& re,
                  std::vector<double>& im) {
  std::ifstream in(path);
  if (!in) throw Failure{kExitInvalid, "cannot read samples '" + path + "'"};
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    line = trim(line);
    if (line.empty() || line[0] == '#') continue;
    if (line_no == 1 && std::isalpha(static_cast<unsigned char>(line[0]))) continue;  // header
    std::vector<std::string> cells;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) cells.push_back(trim(cell));
    if (cells.size() != 3) {
      throw Failure{kExitInvalid, path + ":" + std::to_string(line_no) + ": expected r,re,im"};
    }
    const std::string where = path + ":" + std::to_string(line_no);
    r.push_back(parse_number(where, cells[0]));
    re.push_back(parse_number(where, cells[1]));
    im.push_back(parse_number(where, cells[2]));
  }
}

int cmd_expand(const Common& common, const std::string& input) {
  const RunConfig cfg = load_config(common.config);
  const std::string format = pick_format(common.format, cfg, "json");
  if (format != "json") throw Failure{kExitInvalid, "expand writes JSON only"};
  std::vector<double> r, re, im;
  read_samples(input, r, re, im);
  if (r.empty()) throw Failure{kExitInvalid, "no samples in '" + input + "'"};
  if (r.front() < 0.0 || r.back() > cfg.r_max) {
    throw Failure{kExitInvalid, "samples must lie inside [0, grid.r_max]"};
  }
  Potential pot(cfg);
  rigged_expansion ex{};
  check(rigged_expand(pot.get(), r.data(), re.data(), im.data(), r.size(), cfg.k_max,
                      cfg.nodes, &ex),
        "expand");
  json j;
  j["decomposition"] = json::parse(ex.json);
  j["round_trip"] = {{"error", ex.round_trip_error},
                     {"norm", ex.norm},
                     {"relative", ex.norm > 0.0 ? ex.round_trip_error / ex.norm : 0.0}};
  j["phi_c_warning"] = ex.phi_c_warning != 0;
  j["phi_c_failures"] = ex.warning != nullptr ? json(ex.warning) : json(nullptr);
  if (ex.phi_c_warning) {
    std::cerr << "warning: input is outside the smooth test space (" << ex.warning
              << "); expanded as an L2 function\n";
  }
  rigged_expansion_free(&ex);
  emit(output_path(common, cfg), j.dump(2) + "\n");
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Spectral tools for the radial square well-barrier Hamiltonian"};
  app.require_subcommand(1);

  Common spectrum_common, eigen_common, verify_common, expand_common;
  auto* spectrum = app.add_subcommand("spectrum", "bound states, rho(E) and S(k) phase");
  add_common(spectrum, spectrum_common);

  EigenArgs eigen_args;
  auto* eigen = app.add_subcommand("eigen", "sample an eigenfunction family as r,re,im");
  add_common(eigen, eigen_common);
  eigen->add_option("--family", eigen_args.family,
                    "chi, chi_tilde, theta_plus, theta_minus, theta_tilde, sigma1_neg, "
                    "sigma2_pos, f_of_k, phi_delta, momentum_ket or bound:N");
  eigen->add_option("--energy", eigen_args.energy, "E as X, 'X,Y' or 'X+Yi'");
  eigen->add_option("--momentum", eigen_args.momentum, "k as X, 'X,Y' or 'X+Yi'");
  eigen->add_option("--r-min", eigen_args.r_min);
  eigen->add_option("--r-max", eigen_args.r_max);
  eigen->add_option("--r-nodes", eigen_args.r_nodes);

  std::string suite = "all";
  auto* verify = app.add_subcommand("verify", "run invariant suites, JSON verdicts");
  add_common(verify, verify_common);
  verify->add_option("--suite", suite,
                     "matching, wronskian, green, normalization, parseval, tk, smatrix, "
                     "membership or all");

  std::string input;
  auto* expand = app.add_subcommand("expand", "expand r,re,im samples in eigenfunctions");
  add_common(expand, expand_common);
  expand->add_option("input", input, "samples file (r,re,im)")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitInvalid;
  }

  try {
    if (*spectrum) return cmd_spectrum(spectrum_common);
    if (*eigen) return cmd_eigen(eigen_common, eigen_args);
    if (*verify) return cmd_verify(verify_common, suite);
    if (*expand) return cmd_expand(expand_common, input);
  } catch (const Failure& f) {
    std::cerr << "error: " << f.message << "\n";
    return f.code;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitSolver;
  }
  return kExitInvalid;
}
