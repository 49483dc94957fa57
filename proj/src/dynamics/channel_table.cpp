#include "bsq/dynamics/trajectory.hpp"

#include <algorithm>
#include <cerrno>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

namespace bsq::dynamics {
namespace {

std::string join(const std::vector<std::string>& v) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) out += (i ? ", " : "") + v[i];
  return out;
}

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> out;
  std::string cell;
  std::istringstream is(line);
  while (std::getline(is, cell, ',')) out.push_back(cell);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

}  // namespace

MissingChannels::MissingChannels(std::vector<std::string> names)
    : std::runtime_error("missing channels: " + join(names)), names_(std::move(names)) {}

Trajectory::Trajectory(std::vector<std::string> columns) : columns_(std::move(columns)) {}

bool Trajectory::has(const std::string& name) const {
  return std::find(columns_.begin(), columns_.end(), name) != columns_.end();
}

std::size_t Trajectory::index(const std::string& name) const {
  const auto it = std::find(columns_.begin(), columns_.end(), name);
  if (it == columns_.end()) throw MissingChannels({name});
  return static_cast<std::size_t>(it - columns_.begin());
}

void Trajectory::require(const std::vector<std::string>& names) const {
  std::vector<std::string> missing;
  for (const auto& n : names)
    if (!has(n)) missing.push_back(n);
  if (!missing.empty()) throw MissingChannels(std::move(missing));
}

void Trajectory::append(std::vector<double> row) {
  if (row.size() != columns_.size())
    throw std::invalid_argument("row has " + std::to_string(row.size()) + " values for " +
                                std::to_string(columns_.size()) + " channels");
  rows_.push_back(std::move(row));
}

std::vector<double> Trajectory::channel(const std::string& name) const {
  const std::size_t j = index(name);
  std::vector<double> out;
  out.reserve(rows_.size());
  for (const auto& r : rows_) out.push_back(r[j]);
  return out;
}

double Trajectory::at(std::size_t row, const std::string& name) const {
  return rows_.at(row)[index(name)];
}

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string Trajectory::to_csv() const {
  std::string out;
  for (std::size_t j = 0; j < columns_.size(); ++j) out += (j ? "," : "") + columns_[j];
  out += '\n';
  for (const auto& r : rows_) {
    for (std::size_t j = 0; j < r.size(); ++j) {
      if (j) out += ',';
      out += format_double(r[j]);
    }
    out += '\n';
  }
  return out;
}

void Trajectory::write_csv(const std::filesystem::path& path) const {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("cannot write " + path.string());
  os << to_csv();
  if (!os) throw std::runtime_error("write failed: " + path.string());
}

Trajectory Trajectory::from_csv(const std::string& text) {
  std::istringstream is(text);
  std::string line;
  if (!std::getline(is, line) || line.empty()) throw std::runtime_error("CSV has no header");
  Trajectory t(split(line));
  std::size_t lineno = 1;
  while (std::getline(is, line)) {
    ++lineno;
    if (line.empty()) continue;
    const auto cells = split(line);
    if (cells.size() != t.columns_.size())
      throw std::runtime_error("CSV line " + std::to_string(lineno) + ": expected " +
                               std::to_string(t.columns_.size()) + " fields, found " +
                               std::to_string(cells.size()));
    std::vector<double> row;
    row.reserve(cells.size());
    for (std::size_t j = 0; j < cells.size(); ++j) {
      const char* s = cells[j].c_str();
      char* end = nullptr;
      errno = 0;
      const double v = std::strtod(s, &end);
      if (end == s || *end != '\0')
        throw std::runtime_error("CSV line " + std::to_string(lineno) + ": channel '" +
                                 t.columns_[j] + "' is not a number: '" + cells[j] + "'");
      row.push_back(v);
    }
    t.rows_.push_back(std::move(row));
  }
  return t;
}

Trajectory Trajectory::read_csv(const std::filesystem::path& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw std::runtime_error("cannot read " + path.string());
  std::ostringstream ss;
  ss << is.rdbuf();
  return from_csv(ss.str());
}

}  // namespace bsq::dynamics
