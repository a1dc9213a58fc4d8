#include "ionbound/cli.hpp"

#include <CLI11.hpp>
#include <fmt/format.h>

#include <charconv>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <functional>
#include <optional>
#include <ostream>
#include <string_view>
#include <system_error>

#include "ionbound/alpha_n.hpp"
#include "ionbound/beta_bounds.hpp"
#include "ionbound/error.hpp"
#include "ionbound/ionization_bounds.hpp"
#include "ionbound/report.hpp"

namespace ionbound {
namespace {

namespace fs = std::filesystem;
using Json = nlohmann::ordered_json;

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

std::vector<std::string_view> split(std::string_view text, char sep) {
  std::vector<std::string_view> parts;
  std::size_t start = 0;
  while (true) {
    const auto pos = text.find(sep, start);
    parts.push_back(text.substr(start, pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return parts;
}

template <typename T>
T parse_number(std::string_view text, std::string_view flag) {
  T value{};
  const auto* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (ec != std::errc{} || ptr != end) throw UsageError(fmt::format("{}: cannot parse '{}'", flag, text));
  return value;
}

std::pair<double, double> parse_pair(std::string_view text, std::string_view flag) {
  const auto parts = split(text, ':');
  if (parts.size() != 2) throw UsageError(fmt::format("{}: expected lo:hi, got '{}'", flag, text));
  const double lo = parse_number<double>(parts[0], flag);
  const double hi = parse_number<double>(parts[1], flag);
  if (!(lo <= hi)) throw UsageError(fmt::format("{}: lower end exceeds upper end", flag));
  return {lo, hi};
}

std::vector<std::size_t> parse_count_range(std::string_view text, std::string_view flag) {
  const auto parts = split(text, ':');
  if (parts.size() != 2) throw UsageError(fmt::format("{}: expected a:b, got '{}'", flag, text));
  const auto a = parse_number<std::size_t>(parts[0], flag);
  const auto b = parse_number<std::size_t>(parts[1], flag);
  if (a > b) throw UsageError(fmt::format("{}: lower end exceeds upper end", flag));
  std::vector<std::size_t> out;
  for (std::size_t n = a; n <= b; ++n) out.push_back(n);
  return out;
}

std::vector<double> parse_real_range(std::string_view text, std::string_view flag) {
  const auto parts = split(text, ':');
  if (parts.size() != 2 && parts.size() != 3) throw UsageError(fmt::format("{}: expected a:b[:step], got '{}'", flag, text));
  const double a = parse_number<double>(parts[0], flag);
  const double b = parse_number<double>(parts[1], flag);
  const double step = parts.size() == 3 ? parse_number<double>(parts[2], flag) : 1.0;
  if (!(a <= b)) throw UsageError(fmt::format("{}: lower end exceeds upper end", flag));
  if (!(step > 0.0) || !std::isfinite(step)) throw UsageError(fmt::format("{}: step must be positive", flag));
  const auto count = static_cast<std::size_t>(std::floor((b - a) / step + 1e-9)) + 1;
  std::vector<double> out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) out.push_back(a + static_cast<double>(i) * step);
  return out;
}

std::vector<double> linspace(double lo, double hi, int count) {
  if (count < 1) throw UsageError("grid sizes must be at least 1");
  if (count == 1) return {lo};
  std::vector<double> out;
  for (int i = 0; i < count; ++i) out.push_back(lo + (hi - lo) * i / (count - 1));
  return out;
}

ReportFormat parse_format(const std::string& text) {
  if (text == "csv") return ReportFormat::kCsv;
  if (text == "json") return ReportFormat::kJson;
  if (text == "svg") return ReportFormat::kSvg;
  throw UsageError("--format must be csv, json or svg");
}

struct Shared {
  std::uint64_t seed = 7;
  std::string out;
  std::string format;
  std::optional<double> tol;
  bool timings = false;

  void attach(CLI::App& cmd, std::string_view out_help) {
    cmd.add_option("--seed", seed, "RNG seed")->capture_default_str();
    cmd.add_option("--out", out, std::string(out_help));
    cmd.add_option("--format", format, "csv|json|svg (default from --out extension)");
    cmd.add_option("--tol", tol, "Convergence tolerance");
    cmd.add_flag("--timings", timings, "Record wall-clock seconds per stage in JSON output");
  }

  ReportFormat resolve_format(ReportFormat fallback) const {
    if (!format.empty()) return parse_format(format);
    const auto ext = fs::path(out).extension().string();
    if (ext == ".csv") return ReportFormat::kCsv;
    if (ext == ".json") return ReportFormat::kJson;
    if (ext == ".svg") return ReportFormat::kSvg;
    return fallback;
  }
};

class Stopwatch {
 public:
  explicit Stopwatch(ReportBundle& bundle, bool enabled) : bundle_(bundle), enabled_(enabled) {}

  template <typename F>
  auto stage(std::string name, F&& body) {
    const auto start = std::chrono::steady_clock::now();
    auto result = body();
    if (enabled_) {
      const std::chrono::duration<double> elapsed = std::chrono::steady_clock::now() - start;
      bundle_.timings.emplace_back(std::move(name), elapsed.count());
    }
    return result;
  }

 private:
  ReportBundle& bundle_;
  bool enabled_;
};

void emit(const ReportBundle& bundle, ReportFormat format, const std::string& out_path, std::ostream& out) {
  if (out_path.empty()) {
    out << render_report(bundle, format);
  } else {
    write_report(bundle, format, out_path);
  }
}

// alpha --------------------------------------------------------------------

struct AlphaArgs {
  std::string n = "2:12";
  int restarts = 64;
  int max_iterations = 5000;
  unsigned threads = 0;
};

OptimizerSettings alpha_settings(const AlphaArgs& a, const Shared& s) {
  OptimizerSettings settings;
  settings.restarts = a.restarts;
  settings.max_iterations = a.max_iterations;
  settings.seed = s.seed;
  settings.threads = a.threads;
  if (s.tol) settings.ratio_tolerance = *s.tol;
  settings.validate();
  return settings;
}

Json alpha_config(const AlphaArgs& a, const OptimizerSettings& settings) {
  return {{"n", a.n},
          {"restarts", settings.restarts},
          {"max_iterations", settings.max_iterations},
          {"tol", settings.ratio_tolerance},
          {"seed", settings.seed}};
}

std::vector<AlphaEstimate> run_alpha(const std::vector<std::size_t>& ns, const OptimizerSettings& settings) {
  std::vector<AlphaEstimate> out;
  for (std::size_t n : ns) {
    if (n < 2) throw UsageError("--n must start at 2 or more");
    out.push_back(estimate_alpha(n, settings));
  }
  return out;
}

bool alpha_within_sandwich(const std::vector<AlphaEstimate>& alphas, std::ostream& err) {
  bool ok = true;
  for (const auto& a : alphas) {
    if (a.lower_bound > a.value + 1e-12 || a.value > kBetaUpper + 1e-6) {
      err << fmt::format("invariant breach: N={} estimate {} outside [{}, {}]\n", a.n, format_number(a.value),
                         format_number(a.lower_bound), kBetaUpper);
      ok = false;
    }
  }
  return ok;
}

// beta ---------------------------------------------------------------------

struct BetaArgs {
  int nodes = 200;
  std::string range = "0.05:20";
  int lambda_grid = 51;
  int b_grid = 101;
  int c_grid = 101;
  int quadrature_points = 2048;
  int max_outer = 200;
};

BetaSettings beta_settings(const BetaArgs& a, const Shared& s) {
  BetaSettings settings;
  settings.nodes = a.nodes;
  std::tie(settings.node_low, settings.node_high) = parse_pair(a.range, "--range");
  settings.lambda_grid = a.lambda_grid;
  settings.b_grid = a.b_grid;
  settings.c_grid = a.c_grid;
  settings.quadrature_points = a.quadrature_points;
  settings.dinkelbach.max_outer = a.max_outer;
  if (s.tol) {
    settings.g_tolerance = *s.tol;
    settings.dinkelbach.theta_tolerance = *s.tol;
  }
  return settings;
}

Json beta_config(const BetaArgs& a, const BetaSettings& settings) {
  return {{"nodes", settings.nodes},
          {"range", a.range},
          {"lambda_grid", settings.lambda_grid},
          {"b_grid", settings.b_grid},
          {"c_grid", settings.c_grid},
          {"quadrature_points", settings.quadrature_points},
          {"max_outer", settings.dinkelbach.max_outer},
          {"tol", settings.g_tolerance}};
}

bool beta_consistent(const BetaBracket& b, std::ostream& err) {
  if (b.lower <= b.upper) return true;
  err << fmt::format("invariant breach: beta lower {} exceeds upper {}\n", format_number(b.lower), format_number(b.upper));
  return false;
}

// bounds -------------------------------------------------------------------

struct BoundsArgs {
  std::string z = "1:118";
  std::string model = "nonrel";
  double b_field = 0.0;
  double coeff = 1.22;
  double beta = kBetaLower;
  double c_universal = 1.0;
  double c_kappa = 1.0;
  double c_2 = 1.0;
  double kappa = 0.5;
  double k = 2.0;
  std::optional<double> fine_structure;
  std::optional<double> energy_gap;
  std::optional<double> n_c;
};

BoundInputs bound_inputs(const BoundsArgs& a) {
  BoundInputs in;
  if (a.model == "nonrel") {
    in.model = AtomModel::kNonrel;
  } else if (a.model == "magnetic") {
    in.model = a.energy_gap ? AtomModel::kMagneticGeneral : AtomModel::kMagneticHomogeneous;
  } else if (a.model == "relativistic") {
    in.model = AtomModel::kRelativistic;
  } else if (a.model == "bosonic") {
    in.model = AtomModel::kBosonicMagnetic;
  } else {
    throw UsageError("--model must be nonrel, magnetic, relativistic or bosonic");
  }
  if (a.energy_gap.has_value() != a.n_c.has_value()) throw UsageError("--energy-gap and --Nc must be given together");
  in.b_field = a.b_field;
  in.coeff = a.coeff;
  in.beta_lower = a.beta;
  in.c_universal = a.c_universal;
  in.c_kappa = a.c_kappa;
  in.c_2 = a.c_2;
  in.kappa = a.kappa;
  in.k = a.k;
  in.fine_structure = a.fine_structure;
  return in;
}

Json bounds_config(const BoundsArgs& a, const BoundInputs& in) {
  Json j = {{"z", a.z},
            {"model", std::string(to_string(in.model))},
            {"B", in.b_field},
            {"coeff", in.coeff},
            {"beta", in.beta_lower},
            {"C", in.c_universal},
            {"Ckappa", in.c_kappa},
            {"C2", in.c_2},
            {"kappa", in.kappa},
            {"k", in.k}};
  j["fine_structure"] = a.fine_structure ? Json(*a.fine_structure) : Json(nullptr);
  j["energy_gap"] = a.energy_gap ? Json(*a.energy_gap) : Json(nullptr);
  j["Nc"] = a.n_c ? Json(*a.n_c) : Json(nullptr);
  return j;
}

std::vector<BoundsTableRow> run_bounds(const std::vector<double>& zs, BoundInputs in, const BoundsArgs& a) {
  std::optional<EnergyGap> gap;
  if (a.energy_gap) gap = EnergyGap{*a.energy_gap, *a.n_c};
  std::vector<BoundsTableRow> rows;
  for (double z : zs) {
    in.z = z;
    BoundsTableRow r;
    r.z = z;
    BoundInputs nonrel = in;
    nonrel.model = AtomModel::kNonrel;
    r.row = bound_row(nonrel);
    r.model_extra = in.model == AtomModel::kNonrel ? r.row.main : model_bound(in, gap);
    rows.push_back(r);
  }
  return rows;
}

// The closed form dominates the implicit bound once Z >= 4.
bool bounds_consistent(const std::vector<BoundsTableRow>& rows, std::ostream& err) {
  bool ok = true;
  for (const auto& r : rows) {
    if (r.z >= 4.0 && r.row.main < r.row.implicit_n - 1e-9 * r.row.main) {
      err << fmt::format("invariant breach: Z={} main {} below implicit N {}\n", format_number(r.z),
                         format_number(r.row.main), format_number(r.row.implicit_n));
      ok = false;
    }
  }
  return ok;
}

// verify -------------------------------------------------------------------

struct VerifyArgs {
  std::string lemma = "all";
  std::string z_range = "0.5:120";
  int z_points = 100;
  std::string ratio_range = "0.1:2.33";
  int ratio_points = 100;
  std::string beta_range = "0.8218:0.8705";
  int beta_points = 1;
  int cubic_points = 10000;
  int n_extra = 40;
  bool real_n = false;
  int real_n_per_unit = 10;
  std::string lemma4_threshold = "minus-two-thirds";
};

std::vector<LemmaId> lemma_ids(const std::string& name) {
  if (name == "lemma3") return {LemmaId::kLemma3};
  if (name == "lemma4") return {LemmaId::kLemma4};
  if (name == "cubic") return {LemmaId::kCubicSigns};
  if (name == "all") return {LemmaId::kLemma3, LemmaId::kLemma4, LemmaId::kCubicSigns};
  throw UsageError("--lemma must be lemma3, lemma4, cubic or all");
}

LemmaGrid lemma_grid(const VerifyArgs& a) {
  LemmaGrid g;
  std::tie(g.z_low, g.z_high) = parse_pair(a.z_range, "--z-range");
  g.z_points = a.z_points;
  std::tie(g.ratio_low, g.ratio_high) = parse_pair(a.ratio_range, "--ratio-range");
  g.ratio_points = a.ratio_points;
  const auto [b_lo, b_hi] = parse_pair(a.beta_range, "--beta-range");
  g.betas = linspace(b_lo, b_hi, a.beta_points);
  g.n_extra = a.n_extra;
  g.allow_real_n = a.real_n;
  g.real_n_per_unit = a.real_n_per_unit;
  if (a.lemma4_threshold == "minus-two-thirds") {
    g.lemma4_threshold = Lemma4Threshold::kInverseTwoThirds;
  } else if (a.lemma4_threshold == "cube-root") {
    g.lemma4_threshold = Lemma4Threshold::kCubeRoot;
  } else {
    throw UsageError("--lemma4-threshold must be minus-two-thirds or cube-root");
  }
  return g;
}

Json verify_config(const VerifyArgs& a) {
  return {{"lemma", a.lemma},
          {"z_range", a.z_range},
          {"z_points", a.z_points},
          {"ratio_range", a.ratio_range},
          {"ratio_points", a.ratio_points},
          {"beta_range", a.beta_range},
          {"beta_points", a.beta_points},
          {"cubic_points", a.cubic_points},
          {"n_extra", a.n_extra},
          {"real_n", a.real_n},
          {"real_n_per_unit", a.real_n_per_unit},
          {"lemma4_threshold", a.lemma4_threshold}};
}

std::vector<LemmaReport> run_verify(const VerifyArgs& a) {
  const LemmaGrid grid = lemma_grid(a);
  LemmaGrid cubic = grid;
  const auto [b_lo, b_hi] = parse_pair(a.beta_range, "--beta-range");
  cubic.betas = linspace(b_lo, b_hi, a.cubic_points);
  std::vector<LemmaReport> out;
  for (LemmaId id : lemma_ids(a.lemma)) out.push_back(verify_lemma(id, id == LemmaId::kCubicSigns ? cubic : grid));
  return out;
}

bool lemmas_pass(const std::vector<LemmaReport>& reports, std::ostream& err) {
  bool ok = true;
  for (const auto& r : reports) {
    if (r.pass) continue;
    ok = false;
    std::string witness;
    for (const auto& [k, v] : r.witness) witness += fmt::format(" {}={}", k, format_number(v));
    err << fmt::format("verification failed: {} min margin {} at{}\n", to_string(r.id), format_number(r.min_margin),
                       witness);
  }
  return ok;
}

// report -------------------------------------------------------------------

struct ReportArgs {
  AlphaArgs alpha;
  BetaArgs beta;
  BoundsArgs bounds;
  VerifyArgs verify;
};

Json base_config(std::string_view command) { return {{"command", std::string(command)}, {"version", std::string(kToolVersion)}}; }

void merge(Json& into, const Json& from) {
  for (auto it = from.begin(); it != from.end(); ++it) into[it.key()] = it.value();
}

int dispatch(CLI::App& app, const Shared& shared, AlphaArgs& alpha, BetaArgs& beta, BoundsArgs& bounds, VerifyArgs& verify,
             ReportArgs& report, std::ostream& out, std::ostream& err) {
  ReportBundle bundle;
  Stopwatch watch(bundle, shared.timings);

  if (app.got_subcommand("alpha")) {
    const auto settings = alpha_settings(alpha, shared);
    const auto ns = parse_count_range(alpha.n, "--n");
    bundle.config = base_config("alpha");
    merge(bundle.config, alpha_config(alpha, settings));
    bundle.alphas = watch.stage("alpha", [&] { return run_alpha(ns, settings); });
    emit(bundle, shared.resolve_format(ReportFormat::kCsv), shared.out, out);
    return alpha_within_sandwich(bundle.alphas, err) ? kExitOk : kExitVerification;
  }

  if (app.got_subcommand("beta")) {
    const auto settings = beta_settings(beta, shared);
    bundle.config = base_config("beta");
    merge(bundle.config, beta_config(beta, settings));
    bundle.beta = watch.stage("beta", [&] { return beta_bracket(settings); });
    emit(bundle, shared.resolve_format(ReportFormat::kJson), shared.out, out);
    return beta_consistent(*bundle.beta, err) ? kExitOk : kExitVerification;
  }

  if (app.got_subcommand("bounds")) {
    const auto inputs = bound_inputs(bounds);
    const auto zs = parse_real_range(bounds.z, "--z");
    bundle.config = base_config("bounds");
    merge(bundle.config, bounds_config(bounds, inputs));
    bundle.bounds = watch.stage("bounds", [&] { return run_bounds(zs, inputs, bounds); });
    emit(bundle, shared.resolve_format(ReportFormat::kCsv), shared.out, out);
    return bounds_consistent(bundle.bounds, err) ? kExitOk : kExitVerification;
  }

  if (app.got_subcommand("verify")) {
    bundle.config = base_config("verify");
    merge(bundle.config, verify_config(verify));
    bundle.lemmas = watch.stage("verify", [&] { return run_verify(verify); });
    const auto format = shared.resolve_format(ReportFormat::kJson);
    if (format == ReportFormat::kSvg) throw UsageError("verify has no svg output");
    emit(bundle, format, shared.out, out);
    return lemmas_pass(bundle.lemmas, err) ? kExitOk : kExitVerification;
  }

  // report: full pipeline into a directory.
  if (shared.out.empty()) throw UsageError("report needs --out <directory>");
  std::vector<ReportFormat> formats = {ReportFormat::kCsv, ReportFormat::kJson, ReportFormat::kSvg};
  if (!shared.format.empty()) formats = {parse_format(shared.format)};

  const auto a_settings = alpha_settings(report.alpha, shared);
  const auto ns = parse_count_range(report.alpha.n, "--n");
  const auto b_settings = beta_settings(report.beta, shared);
  const auto inputs = bound_inputs(report.bounds);
  const auto zs = parse_real_range(report.bounds.z, "--z");

  bundle.config = base_config("report");
  bundle.config["alpha"] = alpha_config(report.alpha, a_settings);
  bundle.config["beta"] = beta_config(report.beta, b_settings);
  bundle.config["bounds"] = bounds_config(report.bounds, inputs);
  bundle.config["verify"] = verify_config(report.verify);
  bundle.config["seed"] = shared.seed;

  bundle.alphas = watch.stage("alpha", [&] { return run_alpha(ns, a_settings); });
  bundle.beta = watch.stage("beta", [&] { return beta_bracket(b_settings); });
  bundle.bounds = watch.stage("bounds", [&] { return run_bounds(zs, inputs, report.bounds); });
  bundle.lemmas = watch.stage("verify", [&] { return run_verify(report.verify); });

  const fs::path dir = shared.out;
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw Error(ErrorKind::kIo, "cannot create " + dir.string() + ": " + ec.message());

  for (ReportFormat f : formats) {
    switch (f) {
      case ReportFormat::kJson: write_atomic(dir / "report.json", to_json(bundle).dump(2) + "\n"); break;
      case ReportFormat::kCsv:
        write_atomic(dir / "bounds.csv", bounds_csv(bundle.bounds));
        write_atomic(dir / "alpha.csv", alpha_csv(bundle.alphas, shared.seed));
        write_atomic(dir / "beta.csv", beta_csv(*bundle.beta));
        write_atomic(dir / "lemmas.csv", lemmas_csv(bundle.lemmas));
        break;
      case ReportFormat::kSvg:
        write_atomic(dir / "bounds.svg", bounds_svg(bundle.bounds));
        write_atomic(dir / "alpha.svg", alpha_svg(bundle.alphas, kBetaUpper));
        write_atomic(dir / "g_lambda.svg", g_curve_svg());
        break;
    }
  }

  bool ok = alpha_within_sandwich(bundle.alphas, err);
  ok = beta_consistent(*bundle.beta, err) && ok;
  ok = bounds_consistent(bundle.bounds, err) && ok;
  ok = lemmas_pass(bundle.lemmas, err) && ok;
  return ok ? kExitOk : kExitVerification;
}

void add_alpha_options(CLI::App& cmd, AlphaArgs& a) {
  cmd.add_option("--n", a.n, "Particle-count range a:b")->capture_default_str();
  cmd.add_option("--restarts", a.restarts, "Random restarts per N")->capture_default_str();
  cmd.add_option("--max-iter", a.max_iterations, "Iteration cap per restart")->capture_default_str();
  cmd.add_option("--threads", a.threads, "Worker threads, 0 for all cores (does not change results)");
}

void add_beta_options(CLI::App& cmd, BetaArgs& a) {
  cmd.add_option("--nodes", a.nodes, "Radial grid size")->capture_default_str();
  cmd.add_option("--range", a.range, "Radial grid range lo:hi")->capture_default_str();
  cmd.add_option("--lambda-grid", a.lambda_grid, "lambda grid size for the maximin scan")->capture_default_str();
  cmd.add_option("--b-grid", a.b_grid, "b grid size for the maximin scan")->capture_default_str();
  cmd.add_option("--c-grid", a.c_grid, "c grid size for the maximin scan")->capture_default_str();
  cmd.add_option("--quad-points", a.quadrature_points, "Simpson panels for the trial measure")->capture_default_str();
  cmd.add_option("--max-outer", a.max_outer, "Dinkelbach iteration cap")->capture_default_str();
}

void add_bounds_options(CLI::App& cmd, BoundsArgs& a) {
  cmd.add_option("--z", a.z, "Nuclear charge range a:b[:step]")->capture_default_str();
  cmd.add_option("--model", a.model, "nonrel|magnetic|relativistic|bosonic")->capture_default_str();
  cmd.add_option("--B", a.b_field, "Homogeneous magnetic field strength")->capture_default_str();
  cmd.add_option("--coeff", a.coeff, "Leading coefficient, at least 1/beta")->capture_default_str();
  cmd.add_option("--beta", a.beta, "Lower bracket for beta")->capture_default_str();
  cmd.add_option("--C", a.c_universal, "Unspecified universal constant (magnetic)")->capture_default_str();
  cmd.add_option("--Ckappa", a.c_kappa, "Unspecified constant (relativistic)")->capture_default_str();
  cmd.add_option("--C2", a.c_2, "Unspecified constant (bosonic)")->capture_default_str();
  cmd.add_option("--kappa", a.kappa, "Coupling bound, below 2/pi")->capture_default_str();
  cmd.add_option("--k", a.k, "Comparison charge ratio (general magnetic)")->capture_default_str();
  cmd.add_option("--fine-structure", a.fine_structure, "Fine-structure constant for the Z*alpha <= kappa check");
  cmd.add_option("--energy-gap", a.energy_gap, "E(Nc,Z,B) - E(Nc,kZ,B); selects the general magnetic bound");
  cmd.add_option("--Nc", a.n_c, "Nc paired with --energy-gap");
}

void add_verify_options(CLI::App& cmd, VerifyArgs& a) {
  cmd.add_option("--lemma", a.lemma, "lemma3|lemma4|cubic|all")->capture_default_str();
  cmd.add_option("--z-range", a.z_range, "Z range lo:hi (log-spaced)")->capture_default_str();
  cmd.add_option("--z-points", a.z_points, "Z grid size")->capture_default_str();
  cmd.add_option("--ratio-range", a.ratio_range, "N/Z range lo:hi for lemma3 (log-spaced)")->capture_default_str();
  cmd.add_option("--ratio-points", a.ratio_points, "N/Z grid size")->capture_default_str();
  cmd.add_option("--beta-range", a.beta_range, "beta range lo:hi")->capture_default_str();
  cmd.add_option("--beta-points", a.beta_points, "beta grid size for lemma3/lemma4 (1 uses lo)")->capture_default_str();
  cmd.add_option("--cubic-points", a.cubic_points, "beta grid size for the cubic sign checks")->capture_default_str();
  cmd.add_option("--n-extra", a.n_extra, "Integers N probed above the lemma4 threshold")->capture_default_str();
  cmd.add_flag("--real-n", a.real_n, "Also probe non-integer N for lemma4 (reported separately)");
  cmd.add_option("--real-n-per-unit", a.real_n_per_unit, "Non-integer N samples per unit")->capture_default_str();
  cmd.add_option("--lemma4-threshold", a.lemma4_threshold, "minus-two-thirds|cube-root")->capture_default_str();
}

}  // namespace

int run_command(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Variational constants and maximum-ionization bounds", "ionbound"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(kToolVersion));

  Shared shared;
  AlphaArgs alpha;
  BetaArgs beta;
  BoundsArgs bounds;
  VerifyArgs verify;
  ReportArgs report;

  auto* alpha_cmd = app.add_subcommand("alpha", "Estimate alpha_N by multi-start descent");
  shared.attach(*alpha_cmd, "Output file (stdout when omitted)");
  add_alpha_options(*alpha_cmd, alpha);

  auto* beta_cmd = app.add_subcommand("beta", "Bracket beta from below and above");
  shared.attach(*beta_cmd, "Output file (stdout when omitted)");
  add_beta_options(*beta_cmd, beta);

  auto* bounds_cmd = app.add_subcommand("bounds", "Tabulate ionization bounds over Z");
  shared.attach(*bounds_cmd, "Output file (stdout when omitted)");
  add_bounds_options(*bounds_cmd, bounds);

  auto* verify_cmd = app.add_subcommand("verify", "Check the elementary lemmas on a grid");
  shared.attach(*verify_cmd, "Output file (stdout when omitted)");
  add_verify_options(*verify_cmd, verify);

  auto* report_cmd = app.add_subcommand("report", "Run every stage and write all tables and plots");
  shared.attach(*report_cmd, "Output directory");
  add_alpha_options(*report_cmd, report.alpha);
  report_cmd->add_option("--nodes", report.beta.nodes, "Radial grid size")->capture_default_str();
  report_cmd->add_option("--range", report.beta.range, "Radial grid range lo:hi")->capture_default_str();
  report_cmd->add_option("--lambda-grid", report.beta.lambda_grid, "lambda grid size")->capture_default_str();
  report_cmd->add_option("--z", report.bounds.z, "Nuclear charge range a:b[:step]")->capture_default_str();
  report_cmd->add_option("--model", report.bounds.model, "nonrel|magnetic|relativistic|bosonic")->capture_default_str();
  report_cmd->add_option("--B", report.bounds.b_field, "Homogeneous magnetic field strength")->capture_default_str();
  report_cmd->add_option("--coeff", report.bounds.coeff, "Leading coefficient")->capture_default_str();
  report_cmd->add_option("--beta", report.bounds.beta, "Lower bracket for beta")->capture_default_str();
  report_cmd->add_option("--lemma", report.verify.lemma, "lemma3|lemma4|cubic|all")->capture_default_str();
  report_cmd->add_option("--lemma4-threshold", report.verify.lemma4_threshold, "minus-two-thirds|cube-root")
      ->capture_default_str();

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::CallForVersion&) {
    out << kToolVersion << "\n";
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "usage error: " << e.what() << "\n";
    const auto* sub = app.get_subcommands().empty() ? &app : app.get_subcommands().front();
    err << sub->help();
    return kExitUsage;
  }

  try {
    return dispatch(app, shared, alpha, beta, bounds, verify, report, out, err);
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const Error& e) {
    err << "error (" << to_string(e.kind()) << "): " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  }
}

}  // namespace ionbound
