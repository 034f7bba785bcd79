#include "eembi/data.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <istream>
#include <limits>
#include <ostream>
#include <set>
#include <sstream>
#include <stdexcept>

#include "eembi/error.hpp"
#include "eembi/random.hpp"

namespace eembi {

Dataset::Dataset(std::vector<std::string> names, std::vector<ColumnKind> kinds,
                 std::vector<std::vector<double>> columns)
    : names_(std::move(names)), kinds_(std::move(kinds)), columns_(std::move(columns)) {
  if (names_.size() != columns_.size() || kinds_.size() != columns_.size()) {
    throw std::invalid_argument("Dataset: names, kinds and columns differ in count");
  }
  rows_ = columns_.empty() ? 0 : columns_.front().size();
  for (std::size_t j = 0; j < columns_.size(); ++j) {
    if (columns_[j].size() != rows_) throw std::invalid_argument("Dataset: ragged columns");
    for (double v : columns_[j]) {
      if (!std::isfinite(v)) throw std::invalid_argument("Dataset: non-finite value in column " + names_[j]);
      if (kinds_[j] == ColumnKind::discrete && (v < 0 || v != std::floor(v))) {
        throw std::invalid_argument("Dataset: discrete column " + names_[j] + " holds a non-code value");
      }
    }
  }
  categories_.resize(columns_.size());
}

bool Dataset::all_discrete() const {
  return std::all_of(kinds_.begin(), kinds_.end(), [](ColumnKind k) { return k == ColumnKind::discrete; });
}

const std::vector<std::string>& Dataset::categories(std::size_t j) const { return categories_.at(j); }

void Dataset::set_categories(std::size_t j, std::vector<std::string> categories) {
  categories_.at(j) = std::move(categories);
}

namespace {

std::string trim(std::string_view s) {
  std::size_t b = 0, e = s.size();
  while (b < e && (s[b] == ' ' || s[b] == '\t' || s[b] == '\r')) ++b;
  while (e > b && (s[e - 1] == ' ' || s[e - 1] == '\t' || s[e - 1] == '\r')) --e;
  return std::string(s.substr(b, e - b));
}

std::vector<std::string> split_record(const std::string& line, std::size_t row) {
  std::vector<std::string> out;
  std::string cell;
  bool quoted = false;
  bool was_quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') {
          cell.push_back('"');
          ++i;
        } else {
          quoted = false;
        }
      } else {
        cell.push_back(c);
      }
    } else if (c == '"') {
      quoted = true;
      was_quoted = true;
    } else if (c == ',') {
      out.push_back(was_quoted ? cell : trim(cell));
      cell.clear();
      was_quoted = false;
    } else {
      cell.push_back(c);
    }
  }
  if (quoted) throw IngestionError("unterminated quoted field", row, out.size() + 1);
  out.push_back(was_quoted ? cell : trim(cell));
  return out;
}

bool parse_number(const std::string& s, double& out) {
  if (s.empty()) return false;
  const char* first = s.data();
  const char* last = s.data() + s.size();
  if (*first == '+') ++first;
  const auto [ptr, ec] = std::from_chars(first, last, out);
  return ec == std::errc() && ptr == last && std::isfinite(out);
}

std::vector<std::string> category_order(const std::vector<std::string>& cells,
                                        const std::vector<std::string>* override_order) {
  if (override_order) return *override_order;
  std::set<std::string> distinct(cells.begin(), cells.end());
  return {distinct.begin(), distinct.end()};
}

std::vector<double> encode_with(const std::vector<std::string>& cells, const std::vector<std::string>& order,
                                std::size_t column) {
  std::map<std::string, double> code;
  for (std::size_t c = 0; c < order.size(); ++c) code.emplace(order[c], static_cast<double>(c));
  std::vector<double> out(cells.size());
  for (std::size_t r = 0; r < cells.size(); ++r) {
    const auto it = code.find(cells[r]);
    if (it == code.end()) {
      throw IngestionError("category '" + cells[r] + "' missing from the configured order", r + 2, column + 1);
    }
    out[r] = it->second;
  }
  return out;
}

}  // namespace

StringTable read_csv_table(std::istream& in) {
  StringTable table;
  std::string line;
  std::size_t row = 0;
  bool have_header = false;
  while (std::getline(in, line)) {
    ++row;
    if (trim(line).empty()) continue;
    auto cells = split_record(line, row);
    if (!have_header) {
      if (row == 1 && line.size() >= 3 && static_cast<unsigned char>(line[0]) == 0xEF &&
          static_cast<unsigned char>(line[1]) == 0xBB && static_cast<unsigned char>(line[2]) == 0xBF) {
        cells.front().erase(0, 3);
      }
      table.names = std::move(cells);
      table.columns.resize(table.names.size());
      have_header = true;
      continue;
    }
    if (cells.size() != table.names.size()) {
      throw IngestionError("row has " + std::to_string(cells.size()) + " fields, header has " +
                               std::to_string(table.names.size()),
                           row, std::min(cells.size(), table.names.size()) + 1);
    }
    for (std::size_t j = 0; j < cells.size(); ++j) {
      if (cells[j].empty()) throw IngestionError("missing value", row, j + 1);
      table.columns[j].push_back(std::move(cells[j]));
    }
  }
  if (!have_header) throw IngestionError("empty file");
  if (table.columns.empty() || table.columns.front().empty()) throw IngestionError("file has a header but no data rows");
  return table;
}

Dataset to_dataset(const StringTable& table, const LoadOptions& options) {
  const std::size_t n = table.names.size();
  std::vector<ColumnKind> kinds(n);
  std::vector<std::vector<double>> columns(n);
  std::vector<std::vector<std::string>> categories(n);

  for (std::size_t j = 0; j < n; ++j) {
    const auto& cells = table.columns[j];
    KindSpec spec = options.default_kind;
    if (const auto it = options.kinds.find(table.names[j]); it != options.kinds.end()) spec = it->second;

    double probe = 0.0;
    if (spec == KindSpec::automatic && !cells.empty() && !parse_number(cells.front(), probe)) {
      spec = KindSpec::categorical;
    }
    if (spec == KindSpec::categorical) {
      const auto order_it = options.category_orders.find(table.names[j]);
      categories[j] = category_order(cells, order_it == options.category_orders.end() ? nullptr : &order_it->second);
      columns[j] = encode_with(cells, categories[j], j);
      kinds[j] = ColumnKind::discrete;
      continue;
    }

    std::vector<double> values(cells.size());
    bool integral = true;
    for (std::size_t r = 0; r < cells.size(); ++r) {
      if (!parse_number(cells[r], values[r])) {
        throw IngestionError("non-numeric value '" + cells[r] + "' in numeric column " + table.names[j], r + 2, j + 1);
      }
      integral = integral && values[r] == std::floor(values[r]);
    }
    std::set<double> distinct(values.begin(), values.end());
    bool discrete = false;
    if (spec == KindSpec::discrete) {
      if (!integral) throw IngestionError("column " + table.names[j] + " declared discrete holds non-integers", 0, j + 1);
      discrete = true;
    } else if (spec == KindSpec::automatic) {
      discrete = integral && distinct.size() <= options.discrete_cutoff;
    }
    if (discrete) {
      std::map<double, double> code;
      for (double v : distinct) code.emplace(v, static_cast<double>(code.size()));
      for (double& v : values) v = code[v];
      kinds[j] = ColumnKind::discrete;
    } else {
      kinds[j] = ColumnKind::continuous;
    }
    columns[j] = std::move(values);
  }

  Dataset d(table.names, std::move(kinds), std::move(columns));
  for (std::size_t j = 0; j < n; ++j)
    if (!categories[j].empty()) d.set_categories(j, std::move(categories[j]));
  return d;
}

Dataset parse_csv(std::istream& in, const LoadOptions& options) {
  return to_dataset(read_csv_table(in), options);
}

Dataset load_csv(const std::filesystem::path& path, const LoadOptions& options) {
  std::ifstream in(path);
  if (!in) throw IngestionError("cannot open " + path.string());
  return parse_csv(in, options);
}

void write_csv(std::ostream& out, const Dataset& d) {
  for (std::size_t j = 0; j < d.cols(); ++j) out << (j ? "," : "") << d.name(j);
  out << '\n';
  out << std::setprecision(std::numeric_limits<double>::max_digits10);
  for (std::size_t r = 0; r < d.rows(); ++r) {
    for (std::size_t j = 0; j < d.cols(); ++j) out << (j ? "," : "") << d.column(j)[r];
    out << '\n';
  }
}

void write_csv(const std::filesystem::path& path, const Dataset& d) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  write_csv(out, d);
}

Dataset normalize_minmax(const Dataset& d) {
  auto columns = d.columns();
  for (std::size_t j = 0; j < d.cols(); ++j) {
    if (d.kind(j) != ColumnKind::continuous || columns[j].empty()) continue;
    const auto [lo, hi] = std::minmax_element(columns[j].begin(), columns[j].end());
    const double low = *lo, range = *hi - *lo;
    for (double& v : columns[j]) v = range > 0 ? (v - low) / range : 0.0;
  }
  Dataset out(d.names(), d.kinds(), std::move(columns));
  for (std::size_t j = 0; j < d.cols(); ++j) out.set_categories(j, d.categories(j));
  return out;
}

Dataset encode_categorical(const StringTable& raw, const std::map<std::string, std::vector<std::string>>& orders) {
  LoadOptions options;
  options.default_kind = KindSpec::categorical;
  options.category_orders = orders;
  return to_dataset(raw, options);
}

std::vector<std::string> decode_column(const Dataset& d, std::size_t j) {
  const auto& cats = d.categories(j);
  if (cats.empty()) throw std::invalid_argument("decode_column: column has no category table");
  std::vector<std::string> out;
  out.reserve(d.rows());
  for (double v : d.column(j)) out.push_back(cats.at(static_cast<std::size_t>(v)));
  return out;
}

Dataset sample_rows(const Dataset& d, std::size_t m, std::uint64_t seed) {
  if (m > d.rows()) throw std::invalid_argument("sample_rows: m exceeds the row count");
  // Partial Fisher-Yates: the first m slots end up as the sample.
  std::vector<std::size_t> idx(d.rows());
  for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
  Rng rng(seed);
  for (std::size_t i = 0; i < m; ++i) {
    const std::size_t j = i + static_cast<std::size_t>(rng.below(idx.size() - i));
    std::swap(idx[i], idx[j]);
  }
  std::vector<std::vector<double>> columns(d.cols(), std::vector<double>(m));
  for (std::size_t j = 0; j < d.cols(); ++j)
    for (std::size_t r = 0; r < m; ++r) columns[j][r] = d.column(j)[idx[r]];
  Dataset out(d.names(), d.kinds(), std::move(columns));
  for (std::size_t j = 0; j < d.cols(); ++j) out.set_categories(j, d.categories(j));
  return out;
}

Dataset select_columns(const Dataset& d, const std::vector<std::size_t>& columns) {
  std::vector<std::string> names;
  std::vector<ColumnKind> kinds;
  std::vector<std::vector<double>> values;
  for (std::size_t j : columns) {
    names.push_back(d.name(j));
    kinds.push_back(d.kind(j));
    const auto col = d.column(j);
    values.emplace_back(col.begin(), col.end());
  }
  Dataset out(std::move(names), std::move(kinds), std::move(values));
  for (std::size_t i = 0; i < columns.size(); ++i) out.set_categories(i, d.categories(columns[i]));
  return out;
}

std::map<std::string, std::string> parse_key_values(std::istream& in) {
  std::map<std::string, std::string> out;
  std::string line;
  std::size_t row = 0;
  while (std::getline(in, line)) {
    ++row;
    const std::string t = trim(line);
    if (t.empty() || t.front() == '#') continue;
    const auto eq = t.find('=');
    if (eq == std::string::npos) throw IngestionError("config line without '='", row);
    out[trim(t.substr(0, eq))] = trim(t.substr(eq + 1));
  }
  return out;
}

KindSpec parse_kind_spec(const std::string& text) {
  if (text == "auto" || text == "automatic") return KindSpec::automatic;
  if (text == "discrete") return KindSpec::discrete;
  if (text == "continuous") return KindSpec::continuous;
  if (text == "categorical") return KindSpec::categorical;
  throw std::invalid_argument("unknown column kind '" + text + "'");
}

LoadOptions load_options_from(const std::map<std::string, std::string>& config) {
  LoadOptions options;
  for (const auto& [key, value] : config) {
    if (key == "cutoff") {
      options.discrete_cutoff = static_cast<std::size_t>(std::stoul(value));
    } else if (key == "kind") {
      options.default_kind = parse_kind_spec(value);
    } else if (key.rfind("kind.", 0) == 0) {
      options.kinds[key.substr(5)] = parse_kind_spec(value);
    } else if (key.rfind("order.", 0) == 0) {
      std::vector<std::string> order;
      std::stringstream ss(value);
      std::string item;
      while (std::getline(ss, item, ',')) order.push_back(trim(item));
      options.category_orders[key.substr(6)] = std::move(order);
    }
  }
  return options;
}

}  // namespace eembi
