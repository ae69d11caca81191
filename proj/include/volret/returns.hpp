#pragma once

#include <chrono>
#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <vector>

namespace volret {

using Date = std::chrono::year_month_day;

// Daily closing prices. Dates strictly increase; the day index used by every
// estimator is the position in the series (trading days), not calendar days.
class PriceSeries {
public:
  PriceSeries() = default;
  // Validates and derives log prices. Input must already be sorted.
  PriceSeries(std::vector<Date> dates, std::vector<double> prices);

  // Synthetic series from a log-price path, dated on consecutive calendar days.
  static PriceSeries from_log_prices(std::span<const double> log_prices,
                                     Date start = Date{std::chrono::year{2000},
                                                       std::chrono::January, std::chrono::day{1}});

  std::size_t size() const noexcept { return prices_.size(); }
  const std::vector<Date>& dates() const noexcept { return dates_; }
  const std::vector<double>& prices() const noexcept { return prices_; }
  const std::vector<double>& log_prices() const noexcept { return log_prices_; }

private:
  std::vector<Date> dates_;
  std::vector<double> prices_;
  std::vector<double> log_prices_;
};

// Detrended tau-day log returns over overlapping windows:
//   values[k] = (ln S_{k+tau} - ln S_k) - drift_mu * tau,  k = 0 .. N - tau - 1
struct ReturnSample {
  int tau = 1;
  std::vector<double> values;
  double drift_mu = 0.0;

  std::size_t size() const noexcept { return values.size(); }
  double mean() const;
};

struct RvPoint {
  int tau;
  double mean_rv;
};

enum class PriceFormat { csv };

PriceSeries load_price_series(std::istream& in, PriceFormat format = PriceFormat::csv);
PriceSeries load_price_series(const std::filesystem::path& path,
                              PriceFormat format = PriceFormat::csv);
void write_price_series(std::ostream& out, const PriceSeries& series);

// OLS slope of log price against day index.
double fit_growth_rate(const PriceSeries& series);

ReturnSample tau_returns(const PriceSeries& series, int tau, double mu);

// Mean over overlapping windows of the summed squared one-day detrended returns.
std::vector<RvPoint> realized_variance_curve(const PriceSeries& series, double mu,
                                             std::span<const int> taus);

}  // namespace volret
