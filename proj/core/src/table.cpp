#include "ratchet/table.hpp"

#include <fstream>
#include <json.hpp>

#include "ratchet/config.hpp"
#include "ratchet/errors.hpp"

namespace ratchet {

void Table::add(std::vector<Cell> row) {
  require(row.size() == columns.size(), ErrorKind::InvalidArgument,
          "row has " + std::to_string(row.size()) + " cells, table has " +
              std::to_string(columns.size()) + " columns");
  rows.push_back(std::move(row));
}

namespace {

std::string cell_text(const Cell& c) {
  if (const auto* d = std::get_if<double>(&c)) return format_double(*d);
  if (const auto* i = std::get_if<std::int64_t>(&c)) return std::to_string(*i);
  return std::get<std::string>(c);
}

}  // namespace

std::string to_csv(const Table& table) {
  std::string out;
  for (std::size_t j = 0; j < table.columns.size(); ++j) out += (j ? "," : "") + table.columns[j];
  out += '\n';
  for (const auto& row : table.rows) {
    for (std::size_t j = 0; j < row.size(); ++j) out += (j ? "," : "") + cell_text(row[j]);
    out += '\n';
  }
  return out;
}

std::string to_json(const Table& table) {
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& row : table.rows) {
    nlohmann::json r = nlohmann::json::array();
    for (const auto& c : row) std::visit([&r](const auto& v) { r.push_back(v); }, c);
    rows.push_back(std::move(r));
  }
  return nlohmann::json{{"columns", table.columns}, {"rows", std::move(rows)}}.dump(1) + "\n";
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(ErrorKind::IoFailure, "cannot open " + path.string() + " for writing");
  out << text;
  out.close();
  if (!out) fail(ErrorKind::IoFailure, "failed writing " + path.string());
}

void emit_csv(const Table& table, const std::filesystem::path& path) { write_text(path, to_csv(table)); }

void emit_json(const Table& table, const std::filesystem::path& path) { write_text(path, to_json(table)); }

Table density_table(const std::vector<DensityField>& u, const std::vector<DensityField>& u_star,
                    std::size_t max_class) {
  const bool tracer = !u_star.empty();
  require(!tracer || u_star.size() == u.size(), ErrorKind::InvalidArgument,
          "tracer snapshots must match the total snapshots");
  Table t;
  t.columns = {"time", "x", "k", "u"};
  if (tracer) t.columns.push_back("u_star");
  for (std::size_t s = 0; s < u.size(); ++s) {
    const auto& f = u[s];
    const std::size_t kmax = std::min(max_class, f.class_cap());
    for (std::size_t i = 0; i < f.grid().size(); ++i)
      for (std::size_t k = 0; k <= kmax; ++k) {
        std::vector<Cell> row{f.time(), f.grid().x(i), static_cast<std::int64_t>(k), f.at(k, i)};
        if (tracer) row.emplace_back(u_star[s].at(k, i));
        t.rows.push_back(std::move(row));
      }
  }
  return t;
}

}  // namespace ratchet
