#pragma once

// Serialization of computed results: CSV tables with a versioned schema
// line, a single ordered JSON object, and static SVG plots. All writers
// are deterministic so that identical bundles give byte-identical files.

#include <nlohmann/json.hpp>

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "ionbound/alpha_n.hpp"
#include "ionbound/beta_bounds.hpp"
#include "ionbound/ionization_bounds.hpp"

namespace ionbound {

inline constexpr std::string_view kToolVersion = "0.3.0";
inline constexpr std::string_view kBoundsSchema = "#schema=bounds/v1";
inline constexpr std::string_view kAlphaSchema = "#schema=alpha/v1";
inline constexpr std::string_view kLemmaSchema = "#schema=lemmas/v1";
inline constexpr std::string_view kBetaSchema = "#schema=beta/v1";

enum class ReportFormat { kCsv, kJson, kSvg };

struct BoundsTableRow {
  double z = 0.0;
  NonrelRow row;
  double model_extra = 0.0;  // the selected model's bound; equals `main` for nonrel
};

struct ReportBundle {
  std::string version{kToolVersion};
  nlohmann::ordered_json config = nlohmann::ordered_json::object();
  std::vector<BoundsTableRow> bounds;
  std::vector<AlphaEstimate> alphas;
  std::optional<BetaBracket> beta;
  std::vector<LemmaReport> lemmas;
  /// Wall-clock seconds per stage; left empty unless timing was requested.
  std::vector<std::pair<std::string, double>> timings;
};

/// Shortest round-trip decimal form; used for every number written.
std::string format_number(double value);

std::string bounds_csv(const std::vector<BoundsTableRow>& rows);
std::string alpha_csv(const std::vector<AlphaEstimate>& alphas, std::uint64_t seed);
std::string lemmas_csv(const std::vector<LemmaReport>& lemmas);
std::string beta_csv(const BetaBracket& beta);

nlohmann::ordered_json to_json(const ReportBundle& bundle);

std::string bounds_svg(const std::vector<BoundsTableRow>& rows);
/// alpha estimates against the band [sandwich lower bound, beta upper].
std::string alpha_svg(const std::vector<AlphaEstimate>& alphas, double beta_upper);
std::string g_curve_svg(int samples = 201);

/// Writes to a sibling temporary file and renames it over `path`.
void write_atomic(const std::filesystem::path& path, std::string_view contents);

/// Renders `bundle` in `format` and writes it atomically. CSV and SVG pick
/// the first table present among bounds, alpha estimates, beta bracket and
/// lemma reports.
void write_report(const ReportBundle& bundle, ReportFormat format, const std::filesystem::path& path);

std::string render_report(const ReportBundle& bundle, ReportFormat format);

}  // namespace ionbound
