#include "cli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iterator>
#include <limits>
#include <ostream>
#include <sstream>

#include "CLI11.hpp"
#include "ym/io.hpp"
#include "ym/measure.hpp"
#include "ym/oracle.hpp"
#include "ym/oscillation.hpp"

namespace ym::cli {

namespace {

struct RunConfig {
  std::string subcommand;
  std::string input;  // path, or inline JSON when it starts with '{'
  std::string example;
  std::vector<std::string> params;
  std::string output;
  std::size_t grid = 1001;
  std::string samples = "1000000";
  double tol = 1e-8;
  std::string betas;
  int c = 1;
  double perturb = 0.0;
};

// Thrown for usage problems that CLI11 itself does not catch.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw UsageError("cannot open input file '" + path + "'");
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out || !(out << text)) throw UsageError("cannot write '" + path + "'");
}

PiecewiseFunction load(const RunConfig& cfg) {
  if (!cfg.example.empty() && !cfg.input.empty())
    throw UsageError("--input and --example are mutually exclusive");
  if (!cfg.example.empty()) {
    const auto tag = parse_example_tag(cfg.example);
    if (!tag) throw UsageError("unknown example '" + cfg.example + "' (expected a..e)");
    ExampleParams params;
    for (const std::string& p : cfg.params) params.set(p);
    return build_example(*tag, params);
  }
  if (!cfg.params.empty()) throw UsageError("--param needs --example");
  if (cfg.input.empty()) throw UsageError("one of --input or --example is required");
  const bool inline_json = cfg.input.find_first_not_of(" \t\n") != std::string::npos &&
                           cfg.input[cfg.input.find_first_not_of(" \t\n")] == '{';
  PiecewiseFunction pf = load_function(inline_json ? cfg.input : read_file(cfg.input));
  ensure_valid(pf);
  return pf;
}

std::size_t sample_count(const RunConfig& cfg) {
  double v = 0.0;
  try {
    v = parse_constant(cfg.samples);
  } catch (const Error&) {
    throw UsageError("--samples: '" + cfg.samples + "' is not a number");
  }
  if (!(v >= 1.0) || v != std::floor(v) || v > 1e12)
    throw UsageError("--samples must be a positive integer");
  return static_cast<std::size_t>(v);
}

QuadratureOptions quadrature_options() {
  QuadratureOptions options;
  if (const char* env = std::getenv("YM_MAX_PANELS"); env != nullptr && *env != '\0') {
    char* end = nullptr;
    const unsigned long long v = std::strtoull(env, &end, 10);
    if (*end != '\0' || v == 0) throw UsageError("YM_MAX_PANELS must be a positive integer");
    options.max_panels = static_cast<std::size_t>(v);
  }
  return options;
}

std::vector<Expr> betas(const RunConfig& cfg) {
  std::vector<std::string> sources;
  if (cfg.betas.empty()) {
    sources = default_beta_sources();
  } else {
    std::stringstream ss(cfg.betas);
    for (std::string item; std::getline(ss, item, ',');) sources.push_back(item);
  }
  std::vector<Expr> out;
  for (const std::string& s : sources) {
    try {
      out.push_back(parse_beta(s));
    } catch (const ParseError& e) {
      throw ParseError("beta '" + s + "': " + e.what(), e.offset(), e.expected());
    }
  }
  return out;
}

void emit(const RunConfig& cfg, const std::string& text, std::ostream& out) {
  if (cfg.output.empty()) {
    out << text;
  } else {
    write_file(cfg.output, text);
  }
}

std::string dump(const nlohmann::json& j) { return j.dump(2) + "\n"; }

int cmd_compute(const RunConfig& cfg, std::ostream& out) {
  const YoungMeasure ym = compute(load(cfg));
  const std::string atoms = atoms_csv(ym);
  const std::string density = density_csv(ym, cfg.grid);
  if (cfg.output.empty()) {
    out << atoms << '\n' << density;
  } else {
    write_file(cfg.output + ".atoms.csv", atoms);
    write_file(cfg.output + ".density.csv", density);
  }
  return kSuccess;
}

int cmd_verify(const RunConfig& cfg, std::ostream& out) {
  const PiecewiseFunction pf = load(cfg);
  const std::vector<Expr> family = betas(cfg);
  const std::size_t n = sample_count(cfg);
  IdentityOptions options;
  options.quadrature = quadrature_options();
  options.perturb = cfg.perturb;
  const VerificationReport identity = verify_identity(pf, family, cfg.tol, options);
  const OracleReport oracle = run_oracle(pf, n);
  const bool pass = identity.pass && oracle.pass;
  emit(cfg, dump({{"identity", to_json(identity)}, {"oracle", to_json(oracle)}, {"pass", pass}}),
       out);
  return pass ? kSuccess : kVerificationFailure;
}

double density_deviation(const YoungMeasure& a, const YoungMeasure& b) {
  const Range& k = a.k_range();
  constexpr int kPoints = 200;
  double worst = 0.0;
  for (int i = 0; i < kPoints; ++i) {
    const double y = k.lo + (i + 0.5) / kPoints * k.length();
    worst = std::max(worst, std::fabs(density_at(a, y) - density_at(b, y)));
  }
  return worst;
}

double atom_deviation(const YoungMeasure& a, const YoungMeasure& b) {
  if (a.atoms().size() != b.atoms().size()) return std::numeric_limits<double>::infinity();
  double worst = 0.0;
  for (std::size_t i = 0; i < a.atoms().size(); ++i) {
    worst = std::max(worst, std::fabs(a.atoms()[i].location - b.atoms()[i].location));
    worst = std::max(worst, std::fabs(a.atoms()[i].weight - b.atoms()[i].weight));
  }
  return worst;
}

int cmd_oscillate(const RunConfig& cfg, std::ostream& out) {
  PiecewiseFunction generator = load(cfg);
  const OscillationSpec spec{generator, cfg.c};
  check_oscillation_spec(spec);
  const PiecewiseFunction dilated = dilate(spec);
  const YoungMeasure before = compute(generator);
  const YoungMeasure after = compute(dilated);
  const double density_dev = density_deviation(before, after);
  const double atom_dev = atom_deviation(before, after);
  const bool pass = density_dev <= cfg.tol && atom_dev <= cfg.tol;
  const nlohmann::json report = {{"c", cfg.c},
                                 {"density_deviation", density_dev},
                                 {"atom_deviation", atom_dev},
                                 {"tolerance", cfg.tol},
                                 {"pass", pass}};
  if (cfg.output.empty()) {
    out << dump({{"function", to_json(dilated)}, {"report", report}});
  } else {
    write_file(cfg.output, dump(to_json(dilated)));
    out << dump(report);
  }
  return pass ? kSuccess : kVerificationFailure;
}

int cmd_example(const RunConfig& cfg, std::ostream& out) {
  if (cfg.example.empty()) throw UsageError("example needs --example TAG");
  emit(cfg, dump(to_json(load(cfg))), out);
  return kSuccess;
}

int cmd_oracle(const RunConfig& cfg, std::ostream& out) {
  const OracleReport report = run_oracle(load(cfg), sample_count(cfg));
  emit(cfg, dump(to_json(report)), out);
  return report.pass ? kSuccess : kVerificationFailure;
}

void add_common(CLI::App* sub, RunConfig& cfg) {
  sub->add_option("--input", cfg.input, "Function JSON file, or inline JSON");
  sub->add_option("--example", cfg.example, "Built-in example family a..e");
  sub->add_option("--param", cfg.params, "Example parameter KEY=VALUE (repeatable)");
  sub->add_option("--output", cfg.output, "Output path (stdout when omitted)");
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Young measures of piecewise monotone functions", "ym"};
  app.require_subcommand(1);
  RunConfig cfg;

  auto* compute_cmd = app.add_subcommand("compute", "Atoms and density/CDF tables as CSV");
  add_common(compute_cmd, cfg);
  compute_cmd->add_option("--grid", cfg.grid, "Density table size")->check(CLI::Range(2, 100000000));

  auto* verify_cmd = app.add_subcommand("verify", "Check the defining identity and the oracle");
  add_common(verify_cmd, cfg);
  verify_cmd->add_option("--samples", cfg.samples, "Oracle sample count");
  verify_cmd->add_option("--tol", cfg.tol, "Residual tolerance")
      ->check(CLI::PositiveNumber);
  verify_cmd->add_option("--betas", cfg.betas, "Comma-separated test functions in y");
  verify_cmd->add_option("--perturb", cfg.perturb, "Scale the measure side by 1+X (testing)");

  auto* oscillate_cmd = app.add_subcommand("oscillate", "Dilate a generator on ]0,1[");
  add_common(oscillate_cmd, cfg);
  oscillate_cmd->add_option("--c", cfg.c, "Number of copies")->check(CLI::PositiveNumber);
  oscillate_cmd->add_option("--tol", cfg.tol, "Deviation tolerance")->check(CLI::PositiveNumber);

  auto* example_cmd = app.add_subcommand("example", "Emit a built-in example as JSON");
  add_common(example_cmd, cfg);

  auto* oracle_cmd = app.add_subcommand("oracle", "Midpoint-sample KS distance");
  add_common(oracle_cmd, cfg);
  oracle_cmd->add_option("--samples", cfg.samples, "Sample count");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kSuccess;
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      out << app.help();
      return kSuccess;
    }
    err << "ym: " << e.what() << '\n';
    return kParseFailure;
  }

  try {
    if (compute_cmd->parsed()) return cmd_compute(cfg, out);
    if (verify_cmd->parsed()) return cmd_verify(cfg, out);
    if (oscillate_cmd->parsed()) return cmd_oscillate(cfg, out);
    if (example_cmd->parsed()) return cmd_example(cfg, out);
    if (oracle_cmd->parsed()) return cmd_oracle(cfg, out);
  } catch (const UsageError& e) {
    err << "ym: " << e.what() << '\n';
    return kParseFailure;
  } catch (const ParseError& e) {
    err << "ym: parse error: " << e.what() << '\n';
    return kParseFailure;
  } catch (const ValidationError& e) {
    err << "ym: invalid input: " << e.what() << '\n';
    return kValidationFailure;
  } catch (const Error& e) {
    err << "ym: " << e.what() << '\n';
    return kValidationFailure;
  }
  return kParseFailure;
}

}  // namespace ym::cli
