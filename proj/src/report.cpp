#include "ionbound/report.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cerrno>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <limits>
#include <system_error>

#include "ionbound/error.hpp"

namespace ionbound {
namespace {

using Json = nlohmann::ordered_json;

Json number_or_null(double v) { return std::isfinite(v) ? Json(v) : Json(nullptr); }

Json witness_json(const std::vector<std::pair<std::string, double>>& witness) {
  Json w = Json::object();
  for (const auto& [key, value] : witness) w[key] = number_or_null(value);
  return w;
}

Json alpha_json(const AlphaEstimate& a) {
  Json j;
  j["N"] = a.n;
  j["value"] = a.value;
  j["lower_bound"] = a.lower_bound;
  j["restarts"] = a.restarts_used;
  j["converged"] = a.converged_restarts;
  j["best_restart"] = a.best_restart;
  Json pts = Json::array();
  for (const auto& p : a.best_config.points()) pts.push_back({p.x(), p.y(), p.z()});
  j["best_config"] = std::move(pts);
  return j;
}

Json beta_json(const BetaBracket& b) {
  Json j;
  j["lower"] = b.lower;
  j["lower_source"] = std::string(to_string(b.lower_source));
  j["upper"] = b.upper;
  j["upper_source"] = std::string(to_string(b.upper_source));
  j["g"] = {{"lambda0", b.g.lambda0}, {"g_max", b.g.g_max}};
  j["maximin"] = {{"value", b.maximin.value}, {"grid_error", b.maximin.grid_error}, {"best_lambda", b.maximin.best_lambda}};
  j["trial"] = {{"analytic", b.trial.analytic},
                {"quadrature", b.trial.quadrature},
                {"normalization", b.trial.normalization}};
  j["optimized_upper"] = b.optimized_upper;
  if (b.certificate_measure) {
    const auto nodes = b.certificate_measure->nodes();
    const auto weights = b.certificate_measure->weights();
    j["certificate_measure"] = {{"nodes", std::vector<double>(nodes.begin(), nodes.end())},
                                {"weights", std::vector<double>(weights.begin(), weights.end())}};
  } else {
    j["certificate_measure"] = nullptr;
  }
  return j;
}

Json lemma_json(const LemmaReport& r) {
  Json j;
  j["id"] = std::string(to_string(r.id));
  j["grid"] = r.grid_spec;
  j["points"] = r.points;
  j["min_margin"] = number_or_null(r.min_margin);
  j["pass"] = r.pass;
  j["witness"] = witness_json(r.witness);
  j["out_of_hypothesis_failures"] = r.out_of_hypothesis_failures;
  return j;
}

// Minimal line-plot canvas with linear axes.
class SvgPlot {
 public:
  SvgPlot(std::string title, std::string x_label, std::string y_label, double x0, double x1, double y0, double y1)
      : title_(std::move(title)), x_label_(std::move(x_label)), y_label_(std::move(y_label)) {
    if (!(x1 > x0)) x1 = x0 + 1.0;
    if (!(y1 > y0)) y1 = y0 + 1.0;
    const double pad = 0.05 * (y1 - y0);
    x0_ = x0;
    x1_ = x1;
    y0_ = y0 - pad;
    y1_ = y1 + pad;
  }

  void band(const std::vector<double>& xs, const std::vector<double>& low, const std::vector<double>& high,
            std::string_view color, std::string_view label) {
    std::string pts;
    for (std::size_t i = 0; i < xs.size(); ++i) pts += fmt::format("{:.2f},{:.2f} ", px(xs[i]), py(high[i]));
    for (std::size_t i = xs.size(); i-- > 0;) pts += fmt::format("{:.2f},{:.2f} ", px(xs[i]), py(low[i]));
    if (!pts.empty()) pts.pop_back();
    body_ += fmt::format("<polygon points=\"{}\" fill=\"{}\" fill-opacity=\"0.25\" stroke=\"none\"/>\n", pts, color);
    legend_.push_back({std::string(color), std::string(label), true});
  }

  void line(const std::vector<double>& xs, const std::vector<double>& ys, std::string_view color,
            std::string_view label, bool markers = false) {
    std::string pts;
    for (std::size_t i = 0; i < xs.size(); ++i) pts += fmt::format("{:.2f},{:.2f} ", px(xs[i]), py(ys[i]));
    if (!pts.empty()) pts.pop_back();
    body_ += fmt::format("<polyline points=\"{}\" fill=\"none\" stroke=\"{}\" stroke-width=\"1.5\"/>\n", pts, color);
    if (markers) {
      for (std::size_t i = 0; i < xs.size(); ++i) {
        body_ += fmt::format("<circle cx=\"{:.2f}\" cy=\"{:.2f}\" r=\"2.5\" fill=\"{}\"/>\n", px(xs[i]), py(ys[i]), color);
      }
    }
    legend_.push_back({std::string(color), std::string(label), false});
  }

  std::string render() const {
    std::string s = fmt::format(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{}\" height=\"{}\" viewBox=\"0 0 {} {}\" "
        "font-family=\"sans-serif\" font-size=\"11\">\n",
        kWidth, kHeight, kWidth, kHeight);
    s += fmt::format("<rect width=\"{}\" height=\"{}\" fill=\"white\"/>\n", kWidth, kHeight);
    s += fmt::format("<text x=\"{}\" y=\"20\" text-anchor=\"middle\" font-size=\"14\">{}</text>\n", kWidth / 2, title_);
    s += axes();
    s += body_;
    s += legend();
    s += "</svg>\n";
    return s;
  }

 private:
  static constexpr int kWidth = 720;
  static constexpr int kHeight = 440;
  static constexpr double kLeft = 70.0, kRight = 20.0, kTop = 35.0, kBottom = 50.0;

  struct LegendEntry {
    std::string color;
    std::string label;
    bool filled;
  };

  double px(double x) const { return kLeft + (x - x0_) / (x1_ - x0_) * (kWidth - kLeft - kRight); }
  double py(double y) const { return kHeight - kBottom - (y - y0_) / (y1_ - y0_) * (kHeight - kTop - kBottom); }

  std::string axes() const {
    std::string s;
    const double xl = kLeft, xr = kWidth - kRight, yt = kTop, yb = kHeight - kBottom;
    s += fmt::format("<rect x=\"{:.2f}\" y=\"{:.2f}\" width=\"{:.2f}\" height=\"{:.2f}\" fill=\"none\" stroke=\"black\"/>\n",
                     xl, yt, xr - xl, yb - yt);
    constexpr int kTicks = 5;
    for (int i = 0; i <= kTicks; ++i) {
      const double xv = x0_ + (x1_ - x0_) * i / kTicks;
      const double yv = y0_ + (y1_ - y0_) * i / kTicks;
      s += fmt::format("<line x1=\"{0:.2f}\" y1=\"{1:.2f}\" x2=\"{0:.2f}\" y2=\"{2:.2f}\" stroke=\"black\"/>\n", px(xv), yb,
                       yb + 4);
      s += fmt::format("<text x=\"{:.2f}\" y=\"{:.2f}\" text-anchor=\"middle\">{:.4g}</text>\n", px(xv), yb + 16, xv);
      s += fmt::format("<line x1=\"{0:.2f}\" y1=\"{1:.2f}\" x2=\"{2:.2f}\" y2=\"{1:.2f}\" stroke=\"#dddddd\"/>\n", xl,
                       py(yv), xr);
      s += fmt::format("<text x=\"{:.2f}\" y=\"{:.2f}\" text-anchor=\"end\">{:.4g}</text>\n", xl - 6, py(yv) + 4, yv);
    }
    s += fmt::format("<text x=\"{:.2f}\" y=\"{}\" text-anchor=\"middle\">{}</text>\n", (xl + xr) / 2, kHeight - 12,
                     x_label_);
    s += fmt::format("<text x=\"16\" y=\"{0:.2f}\" text-anchor=\"middle\" transform=\"rotate(-90 16 {0:.2f})\">{1}</text>\n",
                     (yt + yb) / 2, y_label_);
    return s;
  }

  std::string legend() const {
    std::string s;
    double y = kTop + 14;
    for (const auto& e : legend_) {
      const double x = kLeft + 12;
      if (e.filled) {
        s += fmt::format("<rect x=\"{:.2f}\" y=\"{:.2f}\" width=\"18\" height=\"8\" fill=\"{}\" fill-opacity=\"0.25\"/>\n", x,
                         y - 8, e.color);
      } else {
        s += fmt::format("<line x1=\"{:.2f}\" y1=\"{:.2f}\" x2=\"{:.2f}\" y2=\"{:.2f}\" stroke=\"{}\" stroke-width=\"2\"/>\n", x,
                         y - 4, x + 18, y - 4, e.color);
      }
      s += fmt::format("<text x=\"{:.2f}\" y=\"{:.2f}\">{}</text>\n", x + 24, y, e.label);
      y += 16;
    }
    return s;
  }

  std::string title_, x_label_, y_label_;
  double x0_ = 0, x1_ = 1, y0_ = 0, y1_ = 1;
  std::string body_;
  std::vector<LegendEntry> legend_;
};

std::pair<double, double> extent(std::initializer_list<const std::vector<double>*> series) {
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  for (const auto* s : series) {
    for (double v : *s) {
      if (!std::isfinite(v)) continue;
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
  }
  if (!std::isfinite(lo)) return {0.0, 1.0};
  return {lo, hi};
}

}  // namespace

std::string format_number(double value) {
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  return fmt::format("{}", value);
}

std::string bounds_csv(const std::vector<BoundsTableRow>& rows) {
  std::string s{kBoundsSchema};
  s += "\nZ,lieb,main,implicit_N,model_extra\n";
  for (const auto& r : rows) {
    s += fmt::format("{},{},{},{},{}\n", format_number(r.z), format_number(r.row.lieb), format_number(r.row.main),
                     format_number(r.row.implicit_n), format_number(r.model_extra));
  }
  return s;
}

std::string alpha_csv(const std::vector<AlphaEstimate>& alphas, std::uint64_t seed) {
  std::string s{kAlphaSchema};
  s += "\nN,value,lower_bound,restarts,converged,seed\n";
  for (const auto& a : alphas) {
    s += fmt::format("{},{},{},{},{},{}\n", a.n, format_number(a.value), format_number(a.lower_bound), a.restarts_used,
                     a.converged_restarts, seed);
  }
  return s;
}

std::string lemmas_csv(const std::vector<LemmaReport>& lemmas) {
  std::string s{kLemmaSchema};
  s += "\nid,points,min_margin,pass,out_of_hypothesis_failures,witness,grid\n";
  for (const auto& r : lemmas) {
    std::string witness;
    for (const auto& [key, value] : r.witness) {
      witness += fmt::format("{}{}={}", witness.empty() ? "" : ";", key, format_number(value));
    }
    s += fmt::format("{},{},{},{},{},\"{}\",\"{}\"\n", to_string(r.id), r.points, format_number(r.min_margin),
                     r.pass ? "true" : "false", r.out_of_hypothesis_failures, witness, r.grid_spec);
  }
  return s;
}

std::string beta_csv(const BetaBracket& b) {
  std::string s{kBetaSchema};
  s += "\nquantity,value\n";
  const std::pair<std::string_view, double> rows[] = {
      {"lower", b.lower},
      {"upper", b.upper},
      {"lambda0", b.g.lambda0},
      {"g_max", b.g.g_max},
      {"maximin", b.maximin.value},
      {"maximin_grid_error", b.maximin.grid_error},
      {"trial_analytic", b.trial.analytic},
      {"trial_quadrature", b.trial.quadrature},
      {"trial_normalization", b.trial.normalization},
      {"optimized_upper", b.optimized_upper},
  };
  for (const auto& [key, value] : rows) s += fmt::format("{},{}\n", key, format_number(value));
  return s;
}

nlohmann::ordered_json to_json(const ReportBundle& bundle) {
  Json results = Json::object();
  if (!bundle.bounds.empty()) {
    Json rows = Json::array();
    for (const auto& r : bundle.bounds) {
      rows.push_back({{"Z", r.z},
                      {"lieb", r.row.lieb},
                      {"main", r.row.main},
                      {"implicit_N", r.row.implicit_n},
                      {"model_extra", number_or_null(r.model_extra)}});
    }
    results["bounds"] = std::move(rows);
  }
  if (!bundle.alphas.empty()) {
    Json rows = Json::array();
    for (const auto& a : bundle.alphas) rows.push_back(alpha_json(a));
    results["alpha"] = std::move(rows);
  }
  if (bundle.beta) results["beta"] = beta_json(*bundle.beta);
  Json lemmas = Json::array();
  for (const auto& r : bundle.lemmas) lemmas.push_back(lemma_json(r));
  results["lemmas"] = std::move(lemmas);

  Json timings = Json::object();
  for (const auto& [stage, seconds] : bundle.timings) timings[stage] = seconds;

  Json out;
  out["config"] = bundle.config;
  out["results"] = std::move(results);
  out["timings"] = std::move(timings);
  out["version"] = bundle.version;
  return out;
}

std::string bounds_svg(const std::vector<BoundsTableRow>& rows) {
  std::vector<double> z, lieb, main, implicit, extra;
  bool distinct_extra = false;
  for (const auto& r : rows) {
    z.push_back(r.z);
    lieb.push_back(r.row.lieb);
    main.push_back(r.row.main);
    implicit.push_back(r.row.implicit_n);
    extra.push_back(r.model_extra);
    distinct_extra = distinct_extra || (std::isfinite(r.model_extra) && r.model_extra != r.row.main);
  }
  auto [x0, x1] = extent({&z});
  auto [y0, y1] = distinct_extra ? extent({&lieb, &main, &implicit, &extra}) : extent({&lieb, &main, &implicit});
  SvgPlot plot("Maximum ionization bounds", "Z", "N_c bound", x0, x1, std::min(0.0, y0), y1);
  plot.line(z, lieb, "#444444", "2Z+1");
  plot.line(z, main, "#d62728", "coeff Z + 3 Z^(1/3)");
  plot.line(z, implicit, "#1f77b4", "implicit N");
  if (distinct_extra) plot.line(z, extra, "#2ca02c", "model bound");
  return plot.render();
}

std::string alpha_svg(const std::vector<AlphaEstimate>& alphas, double beta_upper) {
  std::vector<double> n, value, lower, upper;
  for (const auto& a : alphas) {
    n.push_back(static_cast<double>(a.n));
    value.push_back(a.value);
    lower.push_back(a.lower_bound);
    upper.push_back(beta_upper);
  }
  auto [x0, x1] = extent({&n});
  auto [y0, y1] = extent({&value, &lower, &upper});
  SvgPlot plot("alpha_N estimates", "N", "alpha_N", x0, x1, y0, y1);
  plot.band(n, lower, upper, "#1f77b4", "sandwich band");
  plot.line(n, value, "#d62728", "best found alpha_N", true);
  return plot.render();
}

std::string g_curve_svg(int samples) {
  if (samples < 2) throw Error(ErrorKind::kEmptyGrid, "g curve needs at least two samples");
  std::vector<double> lambda, g;
  for (int i = 0; i < samples; ++i) {
    const double l = 0.8 + 0.2 * i / (samples - 1);
    lambda.push_back(l);
    g.push_back(g_of_lambda(l).g);
  }
  auto [y0, y1] = extent({&g});
  SvgPlot plot("g(lambda) on [0.8, 1]", "lambda", "g", 0.8, 1.0, y0, y1);
  plot.line(lambda, g, "#1f77b4", "g(lambda)");
  return plot.render();
}

void write_atomic(const std::filesystem::path& path, std::string_view contents) {
  namespace fs = std::filesystem;
  fs::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
    if (!f) throw Error(ErrorKind::kIo, "cannot open " + tmp.string() + ": " + std::strerror(errno));
    f.write(contents.data(), static_cast<std::streamsize>(contents.size()));
    f.flush();
    if (!f) {
      f.close();
      std::error_code ignored;
      fs::remove(tmp, ignored);
      throw Error(ErrorKind::kIo, "cannot write " + tmp.string());
    }
  }
  std::error_code ec;
  fs::rename(tmp, path, ec);
  if (ec) {
    std::error_code ignored;
    fs::remove(tmp, ignored);
    throw Error(ErrorKind::kIo, "cannot rename onto " + path.string() + ": " + ec.message());
  }
}

std::string render_report(const ReportBundle& bundle, ReportFormat format) {
  switch (format) {
    case ReportFormat::kJson: return to_json(bundle).dump(2) + "\n";
    case ReportFormat::kCsv:
      if (!bundle.bounds.empty()) return bounds_csv(bundle.bounds);
      if (!bundle.alphas.empty()) {
        const auto& seed = bundle.config.contains("seed") ? bundle.config["seed"] : Json(0);
        return alpha_csv(bundle.alphas, seed.get<std::uint64_t>());
      }
      if (bundle.beta) return beta_csv(*bundle.beta);
      return lemmas_csv(bundle.lemmas);
    case ReportFormat::kSvg:
      if (!bundle.bounds.empty()) return bounds_svg(bundle.bounds);
      if (!bundle.alphas.empty()) return alpha_svg(bundle.alphas, kBetaUpper);
      if (bundle.beta) return g_curve_svg();
      throw Error(ErrorKind::kInvalidConfiguration, "no plot is defined for lemma reports");
  }
  throw Error(ErrorKind::kInvalidConfiguration, "unknown report format");
}

void write_report(const ReportBundle& bundle, ReportFormat format, const std::filesystem::path& path) {
  write_atomic(path, render_report(bundle, format));
}

}  // namespace ionbound
