#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <variant>
#include <vector>

#include "ratchet/field.hpp"

namespace ratchet {

using Cell = std::variant<double, std::int64_t, std::string>;

struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;

  void add(std::vector<Cell> row);
};

/// Header row then one line per record; doubles at 17 significant digits.
std::string to_csv(const Table& table);
/// {"columns": [...], "rows": [[...], ...]}
std::string to_json(const Table& table);

/// Throws IoFailure.
void write_text(const std::filesystem::path& path, const std::string& text);
void emit_csv(const Table& table, const std::filesystem::path& path);
void emit_json(const Table& table, const std::filesystem::path& path);

/// time,x,k,u[,u_star] for k = 0..min(max_class, K).
Table density_table(const std::vector<DensityField>& u, const std::vector<DensityField>& u_star,
                    std::size_t max_class);

}  // namespace ratchet
