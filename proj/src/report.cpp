#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "mmlab/error.hpp"
#include "mmlab/lab.hpp"

namespace mmlab {

namespace {

std::vector<std::string> split_commas(const std::string& line) {
  std::vector<std::string> cells;
  std::string cell;
  std::istringstream is(line);
  while (std::getline(is, cell, ',')) cells.push_back(cell);
  if (!line.empty() && line.back() == ',') cells.emplace_back();
  return cells;
}

std::optional<double> parse_cell(const std::string& cell) {
  if (cell.empty()) return std::nullopt;
  char* end = nullptr;
  const double v = std::strtod(cell.c_str(), &end);
  require(end == cell.c_str() + cell.size(), "csv: malformed number '" + cell + "'");
  return v;
}

template <class Writer>
void write_file(const std::filesystem::path& destination, Writer&& writer) {
  std::ofstream os(destination);
  if (!os) throw Error(ErrorCode::Io, "cannot open '" + destination.string() + "' for writing");
  writer(os);
  os.flush();
  if (!os) throw Error(ErrorCode::Io, "write to '" + destination.string() + "' failed");
}

}  // namespace

std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  if (v == 0.0) return "0";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

void write_csv(std::ostream& os, const SweepTable& table) {
  for (const auto& [key, value] : table.metadata) os << "# " << key << ": " << value << '\n';
  const auto names = table.column_names();
  for (std::size_t i = 0; i < names.size(); ++i) os << (i ? "," : "") << names[i];
  os << '\n';
  const auto cell = [&](const std::optional<double>& v) {
    os << ',';
    if (v) os << format_number(*v);
  };
  for (const auto& row : table.rows) {
    os << row.n;
    for (const auto* v : {&row.beta_n, &row.d_n, &row.power, &row.accept_prob, &row.scaled_bias,
                          &row.scaled_risk, &row.sup_scaled_risk}) {
      cell(*v);
    }
    for (std::size_t i = 0; i < table.extra_columns.size(); ++i) {
      cell(i < row.extra.size() ? row.extra[i] : std::nullopt);
    }
    os << '\n';
  }
}

SweepTable read_csv(std::istream& is) {
  SweepTable table;
  std::string line;
  bool have_header = false;
  const std::size_t core = std::size(kCoreColumns);
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    if (line.starts_with("# ")) {
      const auto colon = line.find(": ");
      require(colon != std::string::npos, "csv: malformed metadata line");
      table.metadata.emplace_back(line.substr(2, colon - 2), line.substr(colon + 2));
      continue;
    }
    const auto cells = split_commas(line);
    if (!have_header) {
      require(cells.size() >= core, "csv: header is missing core columns");
      for (std::size_t i = 0; i < core; ++i) {
        require(cells[i] == kCoreColumns[i], "csv: unexpected column '" + cells[i] + "'");
      }
      table.extra_columns.assign(cells.begin() + static_cast<std::ptrdiff_t>(core), cells.end());
      have_header = true;
      continue;
    }
    require(cells.size() == core + table.extra_columns.size(), "csv: row width mismatch");
    SweepRow row;
    const auto n = parse_cell(cells[0]);
    require(n.has_value(), "csv: row without n");
    row.n = static_cast<SampleSize>(*n);
    std::optional<double>* fields[] = {&row.beta_n,      &row.d_n,         &row.power,
                                       &row.accept_prob, &row.scaled_bias, &row.scaled_risk,
                                       &row.sup_scaled_risk};
    for (std::size_t i = 1; i < core; ++i) *fields[i - 1] = parse_cell(cells[i]);
    for (std::size_t i = core; i < cells.size(); ++i) row.extra.push_back(parse_cell(cells[i]));
    table.rows.push_back(std::move(row));
  }
  require(have_header, "csv: no header row");
  return table;
}

void emit_csv(const SweepTable& table, const std::filesystem::path& destination) {
  write_file(destination, [&](std::ostream& os) { write_csv(os, table); });
}

void write_plotdata(std::ostream& os, const SweepTable& table,
                    std::span<const std::string> series) {
  std::vector<std::string> chosen(series.begin(), series.end());
  if (chosen.empty()) {
    for (const auto& name : table.column_names()) {
      if (name == "n") continue;
      const auto col = table.column(name);
      if (std::any_of(col.begin(), col.end(), [](const auto& c) { return c.has_value(); })) {
        chosen.push_back(name);
      }
    }
  }
  bool first = true;
  for (const auto& name : chosen) {
    const auto col = table.column(name);
    if (!first) os << "\n\n";
    first = false;
    os << "# series: " << name << '\n' << "# log10_n " << name << '\n';
    for (std::size_t i = 0; i < table.rows.size(); ++i) {
      if (!col[i]) continue;
      os << format_number(std::log10(static_cast<double>(table.rows[i].n))) << ' '
         << format_number(*col[i]) << '\n';
    }
  }
}

void emit_plotdata(const SweepTable& table, const std::filesystem::path& destination,
                   std::span<const std::string> series) {
  write_file(destination, [&](std::ostream& os) { write_plotdata(os, table, series); });
}

}  // namespace mmlab
