#pragma once

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <optional>
#include <span>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "distribution.hpp"
#include "fit.hpp"
#include "gev.hpp"
#include "gof.hpp"

// Data plumbing for the application workflow: delimited text in, block
// maxima, standardization, BGEV vs GEV comparison and plot-ready CSV out.

namespace bgev::pipeline {

/// Malformed or unusable input (maps to CLI exit code 2).
class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class MissingPolicy { Skip, Fail };

struct ColumnSelector {
  // column name or 1-based index; empty means "last numeric column"
  std::string value;
  // column name or 1-based index; empty means "first column if it is not the value column"
  std::string time;
};

struct SeriesFile {
  std::vector<std::string> timestamps;  // synthetic 1..n when the file has none
  std::vector<double> values;
  std::string path;
  std::vector<std::string> columns;
  std::string value_column;
  bool has_timestamps = false;
  std::size_t skipped = 0;
};

struct BlockMaxima {
  std::size_t block_size = 1;
  std::vector<double> maxima;
  bool standardized = false;
  double mean = 0.0;
  double sd = 1.0;
  std::size_t dropped = 0;  // trailing observations that did not fill a block
};

namespace detail {

inline std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r\"");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\"");
  return std::string(s.substr(b, e - b + 1));
}

inline std::optional<double> parse_number(const std::string& s) {
  if (s.empty()) return std::nullopt;
  const char* first = s.data();
  if (*first == '+') ++first;
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(first, s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size() || !std::isfinite(v)) return std::nullopt;
  return v;
}

inline std::vector<std::string> split(const std::string& line, char delim) {
  std::vector<std::string> out;
  std::string cur;
  std::stringstream ss(line);
  while (std::getline(ss, cur, delim)) out.push_back(trim(cur));
  if (!line.empty() && line.back() == delim) out.emplace_back();
  return out;
}

inline int resolve_column(const std::string& sel, const std::vector<std::string>& names,
                          std::size_t ncols) {
  if (const auto idx = parse_number(sel); idx && *idx >= 1 && *idx == std::floor(*idx)) {
    if (*idx > static_cast<double>(ncols)) {
      throw InputError("column index " + sel + " out of range (" + std::to_string(ncols) +
                       " columns)");
    }
    return static_cast<int>(*idx) - 1;
  }
  const auto it = std::find(names.begin(), names.end(), sel);
  if (it == names.end()) throw InputError("no column named '" + sel + "'");
  return static_cast<int>(it - names.begin());
}

inline double sample_sd(std::span<const double> x, double mean) {
  double ss = 0.0;
  for (double v : x) ss += (v - mean) * (v - mean);
  return std::sqrt(ss / static_cast<double>(x.size() - 1));
}

inline double mean_of(std::span<const double> x) {
  double s = 0.0;
  for (double v : x) s += v;
  return s / static_cast<double>(x.size());
}

}  // namespace detail

/// Parses a comma- or tab-delimited file. The first row is a header when none
/// of its fields is numeric. Blank and non-numeric value cells are missing.
[[nodiscard]] inline SeriesFile ingest_stream(std::istream& in, const std::string& path,
                                              const ColumnSelector& sel = {},
                                              MissingPolicy policy = MissingPolicy::Skip) {
  std::vector<std::string> lines;
  for (std::string line; std::getline(in, line);) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (detail::trim(line).empty() || line.front() == '#') continue;
    lines.push_back(line);
  }
  if (lines.empty()) throw InputError(path + ": no data");
  const char delim = lines.front().find('\t') != std::string::npos ? '\t' : ',';

  std::vector<std::vector<std::string>> rows;
  for (const auto& l : lines) rows.push_back(detail::split(l, delim));
  const std::size_t ncols = rows.front().size();

  SeriesFile out;
  out.path = path;
  const bool header = std::none_of(rows.front().begin(), rows.front().end(), [](const auto& f) {
    return detail::parse_number(f).has_value();
  });
  if (header) {
    out.columns = rows.front();
    rows.erase(rows.begin());
  } else {
    for (std::size_t j = 0; j < ncols; ++j) out.columns.push_back("col" + std::to_string(j + 1));
  }
  if (rows.empty()) throw InputError(path + ": header only, no data rows");

  int vcol = -1;
  if (!sel.value.empty()) {
    vcol = detail::resolve_column(sel.value, out.columns, ncols);
  } else {
    for (int j = static_cast<int>(ncols) - 1; j >= 0 && vcol < 0; --j) {
      std::size_t numeric = 0;
      for (const auto& r : rows) {
        if (static_cast<std::size_t>(j) < r.size() && detail::parse_number(r[j])) ++numeric;
      }
      if (2 * numeric > rows.size()) vcol = j;
    }
    if (vcol < 0) throw InputError(path + ": no numeric column found");
  }
  int tcol = -1;
  if (!sel.time.empty()) {
    tcol = detail::resolve_column(sel.time, out.columns, ncols);
  } else if (ncols >= 2 && vcol != 0) {
    tcol = 0;
  }
  out.value_column = out.columns[vcol];
  out.has_timestamps = tcol >= 0;

  std::size_t row_no = header ? 1 : 0;
  for (const auto& r : rows) {
    ++row_no;
    const std::string cell = static_cast<std::size_t>(vcol) < r.size() ? r[vcol] : std::string{};
    const auto v = detail::parse_number(cell);
    if (!v) {
      if (policy == MissingPolicy::Fail) {
        throw InputError(path + ": missing or non-numeric value '" + cell + "' in data row " +
                         std::to_string(row_no));
      }
      ++out.skipped;
      continue;
    }
    out.values.push_back(*v);
    if (tcol >= 0) {
      out.timestamps.push_back(static_cast<std::size_t>(tcol) < r.size() ? r[tcol] : "");
    } else {
      out.timestamps.push_back(std::to_string(out.values.size()));
    }
  }
  if (out.values.empty()) throw InputError(path + ": every value is missing");

  if (out.has_timestamps) {
    // numeric stamps compare as numbers, anything else lexically (ISO 8601 sorts)
    for (std::size_t i = 1; i < out.timestamps.size(); ++i) {
      const auto a = detail::parse_number(out.timestamps[i - 1]);
      const auto b = detail::parse_number(out.timestamps[i]);
      const bool increasing =
          (a && b) ? *a < *b : out.timestamps[i - 1] < out.timestamps[i];
      if (!increasing) {
        throw InputError(path + ": timestamps not strictly increasing at '" + out.timestamps[i] +
                         "'");
      }
    }
  }
  return out;
}

[[nodiscard]] inline SeriesFile ingest(const std::string& path, const ColumnSelector& sel = {},
                                       MissingPolicy policy = MissingPolicy::Skip) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open '" + path + "'");
  return ingest_stream(in, path, sel, policy);
}

/// Maxima of consecutive non-overlapping blocks; a trailing partial block is dropped.
[[nodiscard]] inline BlockMaxima block_maxima(std::span<const double> values,
                                              std::size_t block_size) {
  if (block_size < 1) throw InputError("block size must be >= 1");
  if (values.size() < block_size) {
    throw InputError("series of length " + std::to_string(values.size()) +
                     " is shorter than one block of " + std::to_string(block_size));
  }
  BlockMaxima b;
  b.block_size = block_size;
  const std::size_t blocks = values.size() / block_size;
  for (std::size_t k = 0; k < blocks; ++k) {
    const auto first = values.begin() + static_cast<std::ptrdiff_t>(k * block_size);
    b.maxima.push_back(*std::max_element(first, first + static_cast<std::ptrdiff_t>(block_size)));
  }
  b.dropped = values.size() - blocks * block_size;
  return b;
}

[[nodiscard]] inline BlockMaxima block_maxima(const SeriesFile& s, std::size_t block_size) {
  return block_maxima(s.values, block_size);
}

/// (x - mean) / sd with the n - 1 denominator. The original mean and sd are
/// kept so fitted quantiles can be mapped back.
[[nodiscard]] inline BlockMaxima standardize(const BlockMaxima& b) {
  if (b.maxima.size() < 2) throw InputError("standardize: need at least 2 maxima");
  const double mean = detail::mean_of(b.maxima);
  const double sd = detail::sample_sd(b.maxima, mean);
  if (!(sd > 0.0)) throw InputError("standardize: block maxima are constant");
  BlockMaxima out = b;
  for (double& v : out.maxima) v = (v - mean) / sd;
  // second pass removes the rounding residue of the first
  const double m2 = detail::mean_of(out.maxima);
  for (double& v : out.maxima) v -= m2;
  const double s2 = detail::sample_sd(out.maxima, 0.0);
  for (double& v : out.maxima) v /= s2;
  out.standardized = true;
  out.mean = b.standardized ? b.mean + b.sd * (mean + m2 * sd) : mean + m2 * sd;
  out.sd = b.standardized ? b.sd * sd * s2 : sd * s2;
  return out;
}

// ---- model comparison ----

enum class StartPreset { Wind, Temperature, Auto };

[[nodiscard]] inline BgevParams preset_start(StartPreset p, std::span<const double> x) {
  switch (p) {
    case StartPreset::Wind:
      return {-0.5, 0.0, 1.0, 0.5};
    case StartPreset::Temperature:
      return {-0.25, 0.0, 1.0, 0.5};
    case StartPreset::Auto:
      break;
  }
  return default_start(x);
}

[[nodiscard]] inline GevParams preset_gev_start(StartPreset p, std::span<const double> x) {
  const BgevParams b = preset_start(p, x);
  return {b.xi(), b.mu(), 1.0};
}

struct ModelRow {
  std::string name;
  double xi = NAN, mu = NAN, sigma = NAN, delta = NAN;
  double ks = NAN, ad = NAN, neg2loglik = NAN;
  bool converged = false;
  std::optional<std::string> error;
};

enum class Winner { Bgev, Gev, Tie, None };

inline const char* to_string(Winner w) {
  switch (w) {
    case Winner::Bgev:
      return "BGEV";
    case Winner::Gev:
      return "GEV";
    case Winner::Tie:
      return "tie";
    case Winner::None:
      break;
  }
  return "n/a";
}

struct ComparisonReport {
  ModelRow bgev;
  ModelRow gev;  // sigma is the GEV scale; delta is identically 0
  std::optional<BgevParams> bgev_params;
  std::optional<GevParams> gev_params;
  Winner ks_winner = Winner::None;
  Winner ad_winner = Winner::None;
  Winner loglik_winner = Winner::None;
  std::optional<gof::LjungBoxReport> ljung_box;
  bool refined_from_gev = false;  // the GEV warm start beat the direct BGEV fit
  std::size_t n = 0;
};

namespace detail {

inline Winner pick(double bgev, double gev) {
  if (std::isnan(bgev) && std::isnan(gev)) return Winner::None;
  if (std::isnan(gev)) return Winner::Bgev;
  if (std::isnan(bgev)) return Winner::Gev;
  if (bgev < gev) return Winner::Bgev;
  if (gev < bgev) return Winner::Gev;
  return Winner::Tie;
}

template <class Cdf>
void fill_gof(ModelRow& row, std::span<const double> x, const Cdf& cdf) {
  row.ks = gof::ks_statistic(x, cdf);
  try {
    row.ad = gof::ad_statistic(x, cdf);
  } catch (const gof::BoundaryError& e) {
    row.ad = NAN;
    if (!row.error) row.error = e.what();
  }
}

}  // namespace detail

/// Fits BGEV and GEV to `x` and scores both. The BGEV fit is also restarted
/// from the GEV optimum (delta = 0), so its -2 log-likelihood never exceeds
/// the GEV one. A failure in one model is recorded without aborting the other.
[[nodiscard]] inline ComparisonReport fit_and_compare(std::span<const double> x,
                                                      const BgevParams& bgev_start,
                                                      const GevParams& gev_start,
                                                      const FitOptions& opts = {},
                                                      int ljung_box_lags = 10) {
  ComparisonReport rep;
  rep.n = x.size();
  rep.bgev.name = "BGEV";
  rep.gev.name = "GEV";

  std::optional<FitResult> bfit;
  try {
    bfit = fit_mle(x, make_feasible(bgev_start, x), opts);
  } catch (const std::exception& e) {
    rep.bgev.error = e.what();
  }

  std::optional<GevFitResult> gfit;
  try {
    const BgevParams gs = make_feasible(from_gev(gev_start), x);
    gfit = fit_gev(x, to_gev(gs), opts);
  } catch (const std::exception& e) {
    rep.gev.error = e.what();
  }

  if (gfit) {
    try {
      FitOptions ropts = opts;
      ropts.fixed = {};
      auto refined = fit_mle(x, gfit->as_bgev, ropts);
      if (!bfit || refined.neg2loglik < bfit->neg2loglik) {
        bfit = std::move(refined);
        rep.refined_from_gev = true;
        rep.bgev.error.reset();
      }
    } catch (const std::exception& e) {
      if (!bfit) rep.bgev.error = e.what();
    }
  }

  if (bfit) {
    const auto& th = bfit->theta_hat;
    rep.bgev_params = th;
    rep.bgev.xi = th.xi();
    rep.bgev.mu = th.mu();
    rep.bgev.sigma = th.sigma();
    rep.bgev.delta = th.delta();
    rep.bgev.neg2loglik = bfit->neg2loglik;
    rep.bgev.converged = bfit->converged;
    detail::fill_gof(rep.bgev, x, [&](double v) { return cdf(v, th); });
  }
  if (gfit) {
    const GevParams g = gfit->params;
    rep.gev_params = g;
    rep.gev.xi = g.xi();
    rep.gev.mu = g.mu();
    rep.gev.sigma = g.sigma();
    rep.gev.delta = 0.0;
    rep.gev.neg2loglik = gfit->neg2loglik;
    rep.gev.converged = gfit->converged;
    detail::fill_gof(rep.gev, x, [&](double v) { return gev::cdf(v, g); });
  }

  rep.ks_winner = detail::pick(rep.bgev.ks, rep.gev.ks);
  rep.ad_winner = detail::pick(rep.bgev.ad, rep.gev.ad);
  rep.loglik_winner = detail::pick(rep.bgev.neg2loglik, rep.gev.neg2loglik);

  if (ljung_box_lags > 0 && 2.0 * ljung_box_lags < static_cast<double>(x.size())) {
    try {
      rep.ljung_box = gof::ljung_box(x, ljung_box_lags);
    } catch (const std::invalid_argument&) {
      // constant series: nothing to report
    }
  }
  return rep;
}

// ---- rendering ----

inline std::string g17(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

/// model,xi,mu,sigma,delta,ks,ad,neg2loglik,converged
[[nodiscard]] inline std::string render_report_csv(const ComparisonReport& r) {
  std::ostringstream os;
  os << "model,xi,mu,sigma,delta,ks,ad,neg2loglik,converged\n";
  for (const ModelRow* m : {&r.bgev, &r.gev}) {
    os << m->name << ',' << g17(m->xi) << ',' << g17(m->mu) << ',' << g17(m->sigma) << ','
       << g17(m->delta) << ',' << g17(m->ks) << ',' << g17(m->ad) << ',' << g17(m->neg2loglik)
       << ',' << (m->converged ? 1 : 0) << '\n';
  }
  return os.str();
}

[[nodiscard]] inline std::string render_report_table(const ComparisonReport& r,
                                                     const BlockMaxima* b = nullptr) {
  std::ostringstream os;
  char buf[256];
  if (b != nullptr) {
    os << "block maxima: " << b->maxima.size() << " (block size " << b->block_size << ", "
       << b->dropped << " trailing observations dropped)\n";
    if (b->standardized) {
      std::snprintf(buf, sizeof buf, "standardized with mean %.6g, sd %.6g\n", b->mean, b->sd);
      os << buf;
    }
  }
  if (r.ljung_box) {
    std::snprintf(buf, sizeof buf, "Ljung-Box (%d lags): Q = %.4f, p = %.4g\n", r.ljung_box->lags,
                  r.ljung_box->statistic, r.ljung_box->p_value);
    os << buf;
  }
  os << "model        mu     sigma        xi     delta        KS          AD        -2l  conv\n";
  for (const ModelRow* m : {&r.bgev, &r.gev}) {
    std::snprintf(buf, sizeof buf, "%-5s %9.4f %9.4f %9.4f %9.4f %9.5f %11.3f %10.1f  %s\n",
                  m->name.c_str(), m->mu, m->sigma, m->xi, m->delta, m->ks, m->ad, m->neg2loglik,
                  m->converged ? "yes" : "no");
    os << buf;
    if (m->error) os << "      note: " << *m->error << '\n';
  }
  os << "best by KS: " << to_string(r.ks_winner) << ", AD: " << to_string(r.ad_winner)
     << ", -2l: " << to_string(r.loglik_winner) << '\n';
  return os.str();
}

// ---- plot data ----

struct PlotData {
  std::string histogram;  // bin_left,bin_right,count,density
  std::string density;    // x,bgev_pdf,gev_pdf on a 512-point grid
  std::string qq_bgev;    // theoretical,empirical
  std::string qq_gev;
  std::size_t bins = 0;
  double lo = 0.0, hi = 0.0;
};

inline constexpr int kDensityPoints = 512;

/// Freedman-Diaconis bin count, ceil(range / (2 IQR n^(-1/3))); falls back to
/// ceil(sqrt(n)) when the IQR is zero.
[[nodiscard]] inline std::size_t freedman_diaconis_bins(std::span<const double> x) {
  if (x.size() < 2) return 1;
  std::vector<double> v(x.begin(), x.end());
  std::sort(v.begin(), v.end());
  auto q = [&](double p) {
    const double h = p * static_cast<double>(v.size() - 1);
    const auto lo = static_cast<std::size_t>(std::floor(h));
    const std::size_t hi = std::min(lo + 1, v.size() - 1);
    return v[lo] + (h - static_cast<double>(lo)) * (v[hi] - v[lo]);
  };
  const double iqr = q(0.75) - q(0.25);
  const double range = v.back() - v.front();
  if (!(range > 0.0)) return 1;
  if (!(iqr > 0.0)) return static_cast<std::size_t>(std::ceil(std::sqrt(v.size())));
  const double h = 2.0 * iqr * std::pow(static_cast<double>(v.size()), -1.0 / 3.0);
  return std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil(range / h)));
}

[[nodiscard]] inline PlotData make_plot_data(const ComparisonReport& r, std::span<const double> x,
                                             std::optional<std::size_t> bins = std::nullopt) {
  if (x.size() < 2) throw InputError("plot data: need at least 2 observations");
  PlotData pd;
  const auto [mn, mx] = std::minmax_element(x.begin(), x.end());
  pd.lo = *mn;
  pd.hi = *mx;
  pd.bins = bins.value_or(freedman_diaconis_bins(x));
  if (pd.bins < 1) throw InputError("plot data: bins must be >= 1");

  const double width = (pd.hi - pd.lo) / static_cast<double>(pd.bins);
  std::vector<std::size_t> counts(pd.bins, 0);
  for (double v : x) {
    auto k = width > 0.0 ? static_cast<std::size_t>((v - pd.lo) / width) : 0;
    counts[std::min(k, pd.bins - 1)]++;
  }
  std::ostringstream h;
  h << "bin_left,bin_right,count,density\n";
  const double n = static_cast<double>(x.size());
  for (std::size_t k = 0; k < pd.bins; ++k) {
    const double l = pd.lo + k * width;
    const double rr = k + 1 == pd.bins ? pd.hi : pd.lo + (k + 1) * width;
    h << g17(l) << ',' << g17(rr) << ',' << counts[k] << ','
      << g17(width > 0.0 ? counts[k] / (n * width) : 0.0) << '\n';
  }
  pd.histogram = h.str();

  auto bpdf = [&](double v) { return r.bgev_params ? bgev::pdf(v, *r.bgev_params) : NAN; };
  auto gpdf = [&](double v) { return r.gev_params ? gev::pdf(v, *r.gev_params) : NAN; };
  std::ostringstream d;
  d << "x,bgev_pdf,gev_pdf\n";
  for (int i = 0; i < kDensityPoints; ++i) {
    const double v = pd.lo + (pd.hi - pd.lo) * i / (kDensityPoints - 1);
    d << g17(v) << ',' << g17(bpdf(v)) << ',' << g17(gpdf(v)) << '\n';
  }
  pd.density = d.str();

  auto qq_csv = [&](auto quantile) {
    std::ostringstream q;
    q << "theoretical,empirical\n";
    for (const auto& p : gof::qq_pairs(x, quantile)) {
      q << g17(p.theoretical) << ',' << g17(p.empirical) << '\n';
    }
    return q.str();
  };
  if (r.bgev_params) {
    pd.qq_bgev = qq_csv([&](double p) { return bgev::quantile(p, *r.bgev_params); });
  }
  if (r.gev_params) {
    pd.qq_gev = qq_csv([&](double p) { return gev::quantile(p, *r.gev_params); });
  }
  return pd;
}

inline void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write '" + path.string() + "'");
  out << text;
  if (!out) throw std::runtime_error("write failed for '" + path.string() + "'");
}

/// Writes histogram.csv, density.csv, qq_bgev.csv and qq_gev.csv into `dir`.
inline void write_plot_data(const PlotData& pd, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  write_text(dir / "histogram.csv", pd.histogram);
  write_text(dir / "density.csv", pd.density);
  if (!pd.qq_bgev.empty()) write_text(dir / "qq_bgev.csv", pd.qq_bgev);
  if (!pd.qq_gev.empty()) write_text(dir / "qq_gev.csv", pd.qq_gev);
}

}  // namespace bgev::pipeline
