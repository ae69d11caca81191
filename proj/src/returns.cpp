#include "volret/returns.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <istream>
#include <numeric>
#include <ostream>
#include <sstream>
#include <string>

#include "volret/error.hpp"
#include "volret/kernels.hpp"

namespace volret {
namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

bool parse_int(std::string_view s, int& out) {
  const auto* end = s.data() + s.size();
  auto [ptr, ec] = std::from_chars(s.data(), end, out);
  return ec == std::errc{} && ptr == end;
}

// YYYY-MM-DD
bool parse_date(std::string_view s, Date& out) {
  if (s.size() != 10 || s[4] != '-' || s[7] != '-') return false;
  int y = 0, m = 0, d = 0;
  if (!parse_int(s.substr(0, 4), y) || !parse_int(s.substr(5, 2), m) ||
      !parse_int(s.substr(8, 2), d)) {
    return false;
  }
  out = Date{std::chrono::year{y}, std::chrono::month{static_cast<unsigned>(m)},
             std::chrono::day{static_cast<unsigned>(d)}};
  return out.ok();
}

bool parse_price(std::string_view s, double& out) {
  if (s.empty()) return false;
  const auto* end = s.data() + s.size();
  auto [ptr, ec] = std::from_chars(s.data(), end, out);
  return ec == std::errc{} && ptr == end;
}

std::string format_date(const Date& d) {
  std::ostringstream os;
  os << std::setfill('0') << std::setw(4) << static_cast<int>(d.year()) << '-' << std::setw(2)
     << static_cast<unsigned>(d.month()) << '-' << std::setw(2) << static_cast<unsigned>(d.day());
  return os.str();
}

PriceSeries load_csv(std::istream& in) {
  std::string line;
  std::size_t line_no = 0;
  bool header_seen = false;
  std::vector<std::pair<Date, double>> rows;
  while (std::getline(in, line)) {
    ++line_no;
    auto view = trim(line);
    if (line_no == 1 && view.starts_with("\xEF\xBB\xBF")) view.remove_prefix(3);
    if (view.empty()) continue;
    if (!header_seen) {
      if (view != "date,close") throw ParseError(line_no, "expected header 'date,close'");
      header_seen = true;
      continue;
    }
    const auto comma = view.find(',');
    if (comma == std::string_view::npos || view.find(',', comma + 1) != std::string_view::npos) {
      throw ParseError(line_no, "expected two fields");
    }
    Date date;
    double price = 0.0;
    if (!parse_date(trim(view.substr(0, comma)), date)) {
      throw ParseError(line_no, "malformed date (expected YYYY-MM-DD)");
    }
    if (!parse_price(trim(view.substr(comma + 1)), price)) {
      throw ParseError(line_no, "malformed close price");
    }
    if (!(price > 0.0) || !std::isfinite(price)) {
      throw ValidationError("line " + std::to_string(line_no) + ": close price must be positive");
    }
    rows.emplace_back(date, price);
  }
  if (!header_seen) throw ParseError(line_no, "missing header 'date,close'");
  if (rows.size() < 2) throw InsufficientDataError("price series needs at least 2 rows");

  std::stable_sort(rows.begin(), rows.end(),
                   [](const auto& a, const auto& b) { return a.first < b.first; });
  std::vector<Date> dates;
  std::vector<double> prices;
  dates.reserve(rows.size());
  prices.reserve(rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (i > 0 && rows[i].first == rows[i - 1].first) {
      throw ValidationError("duplicate date " + format_date(rows[i].first));
    }
    dates.push_back(rows[i].first);
    prices.push_back(rows[i].second);
  }
  return PriceSeries(std::move(dates), std::move(prices));
}

}  // namespace

PriceSeries::PriceSeries(std::vector<Date> dates, std::vector<double> prices)
    : dates_(std::move(dates)), prices_(std::move(prices)) {
  if (dates_.size() != prices_.size()) throw ValidationError("dates and prices differ in length");
  for (std::size_t i = 0; i < prices_.size(); ++i) {
    if (!(prices_[i] > 0.0) || !std::isfinite(prices_[i])) {
      throw ValidationError("prices must be positive and finite");
    }
    if (i > 0 && !(dates_[i - 1] < dates_[i])) {
      throw ValidationError("dates must be strictly increasing");
    }
  }
  log_prices_.resize(prices_.size());
  std::transform(prices_.begin(), prices_.end(), log_prices_.begin(),
                 [](double p) { return std::log(p); });
}

PriceSeries PriceSeries::from_log_prices(std::span<const double> log_prices, Date start) {
  std::vector<Date> dates;
  std::vector<double> prices;
  dates.reserve(log_prices.size());
  prices.reserve(log_prices.size());
  const std::chrono::sys_days first{start};
  for (std::size_t i = 0; i < log_prices.size(); ++i) {
    dates.emplace_back(first + std::chrono::days{static_cast<long>(i)});
    prices.push_back(std::exp(log_prices[i]));
  }
  PriceSeries s(std::move(dates), std::move(prices));
  // keep the exact path rather than ln(exp(x))
  std::copy(log_prices.begin(), log_prices.end(), s.log_prices_.begin());
  return s;
}

double ReturnSample::mean() const {
  if (values.empty()) return 0.0;
  return std::accumulate(values.begin(), values.end(), 0.0) / static_cast<double>(values.size());
}

PriceSeries load_price_series(std::istream& in, PriceFormat format) {
  switch (format) {
    case PriceFormat::csv:
      return load_csv(in);
  }
  throw ValidationError("unsupported price format");
}

PriceSeries load_price_series(const std::filesystem::path& path, PriceFormat format) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path.string());
  return load_price_series(in, format);
}

void write_price_series(std::ostream& out, const PriceSeries& series) {
  out << "date,close\n";
  out << std::setprecision(17);
  for (std::size_t i = 0; i < series.size(); ++i) {
    out << format_date(series.dates()[i]) << ',' << series.prices()[i] << '\n';
  }
}

double fit_growth_rate(const PriceSeries& series) {
  const std::size_t n = series.size();
  if (n < 2) throw InsufficientDataError("growth rate needs at least 2 prices");
  const double x_mean = 0.5 * static_cast<double>(n - 1);
  const auto& y = series.log_prices();
  const double y_mean = std::accumulate(y.begin(), y.end(), 0.0) / static_cast<double>(n);
  double sxy = 0.0;
  double sxx = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double dx = static_cast<double>(i) - x_mean;
    sxy += dx * (y[i] - y_mean);
    sxx += dx * dx;
  }
  return sxy / sxx;
}

ReturnSample tau_returns(const PriceSeries& series, int tau, double mu) {
  if (tau < 1) throw ValidationError("tau must be a positive integer");
  const std::size_t n = series.size();
  if (static_cast<std::size_t>(tau) >= n) {
    throw InsufficientDataError("tau = " + std::to_string(tau) +
                                " needs more than that many prices");
  }
  const auto& lp = series.log_prices();
  ReturnSample out{tau, {}, mu};
  out.values.resize(n - static_cast<std::size_t>(tau));
  const double trend = mu * tau;
  for (std::size_t k = 0; k < out.values.size(); ++k) {
    out.values[k] = (lp[k + static_cast<std::size_t>(tau)] - lp[k]) - trend;
  }
  return out;
}

std::vector<RvPoint> realized_variance_curve(const PriceSeries& series, double mu,
                                             std::span<const int> taus) {
  if (taus.empty()) throw ValidationError("realized variance needs at least one tau");
  for (int tau : taus) {
    if (tau < 1) throw ValidationError("tau must be a positive integer");
    if (static_cast<std::size_t>(tau) >= series.size()) {
      throw InsufficientDataError("tau = " + std::to_string(tau) + " exceeds the series length");
    }
  }
  const auto daily = tau_returns(series, 1, mu);
  const auto means = kernels::mean_window_sums(daily.values, taus);
  std::vector<RvPoint> out;
  out.reserve(taus.size());
  for (std::size_t i = 0; i < taus.size(); ++i) out.push_back({taus[i], means[i]});
  return out;
}

}  // namespace volret
