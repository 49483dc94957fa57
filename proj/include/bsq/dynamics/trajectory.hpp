#pragma once
// Named-channel time series: the in-memory and CSV form of a run's
// diagnostics. Values are written with %.17g so a CSV round trip is exact.

#include <filesystem>
#include <stdexcept>
#include <string>
#include <vector>

namespace bsq::dynamics {

class MissingChannels : public std::runtime_error {
 public:
  explicit MissingChannels(std::vector<std::string> names);
  const std::vector<std::string>& names() const noexcept { return names_; }

 private:
  std::vector<std::string> names_;
};

class Trajectory {
 public:
  Trajectory() = default;
  explicit Trajectory(std::vector<std::string> columns);

  const std::vector<std::string>& columns() const noexcept { return columns_; }
  std::size_t size() const noexcept { return rows_.size(); }
  bool empty() const noexcept { return rows_.empty(); }
  bool has(const std::string& name) const;
  std::size_t index(const std::string& name) const;  // throws MissingChannels
  // Throws MissingChannels naming every absent entry.
  void require(const std::vector<std::string>& names) const;

  void append(std::vector<double> row);  // row.size() must equal columns().size()
  const std::vector<double>& row(std::size_t i) const { return rows_.at(i); }
  std::vector<double> channel(const std::string& name) const;
  double at(std::size_t row, const std::string& name) const;
  std::vector<double> times() const { return channel("time"); }

  std::string to_csv() const;
  void write_csv(const std::filesystem::path& path) const;
  static Trajectory from_csv(const std::string& text);
  static Trajectory read_csv(const std::filesystem::path& path);

 private:
  std::vector<std::string> columns_;
  std::vector<std::vector<double>> rows_;
};

std::string format_double(double v);

}  // namespace bsq::dynamics
