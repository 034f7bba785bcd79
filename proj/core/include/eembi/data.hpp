#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <span>
#include <string>
#include <vector>

namespace eembi {

enum class ColumnKind { discrete, continuous };

/**
 * Column-major table of N observations over n variables.
 *
 * Discrete columns hold non-negative integer codes stored as doubles. For
 * columns that came from category strings, the code-to-string table is kept
 * so the encoding can be reversed.
 */
class Dataset {
 public:
  Dataset() = default;
  /// Throws std::invalid_argument on ragged columns, size mismatches,
  /// non-finite values, or non-integral/negative discrete values.
  Dataset(std::vector<std::string> names, std::vector<ColumnKind> kinds,
          std::vector<std::vector<double>> columns);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return columns_.size(); }

  std::span<const double> column(std::size_t j) const { return columns_.at(j); }
  const std::vector<std::vector<double>>& columns() const noexcept { return columns_; }
  const std::string& name(std::size_t j) const { return names_.at(j); }
  const std::vector<std::string>& names() const noexcept { return names_; }
  ColumnKind kind(std::size_t j) const { return kinds_.at(j); }
  const std::vector<ColumnKind>& kinds() const noexcept { return kinds_; }

  bool all_discrete() const;

  /// Category strings indexed by code; empty for non-categorical columns.
  const std::vector<std::string>& categories(std::size_t j) const;
  void set_categories(std::size_t j, std::vector<std::string> categories);

 private:
  std::vector<std::string> names_;
  std::vector<ColumnKind> kinds_;
  std::vector<std::vector<double>> columns_;
  std::vector<std::vector<std::string>> categories_;
  std::size_t rows_ = 0;
};

/// How a column should be typed on load.
enum class KindSpec { automatic, discrete, continuous, categorical };

struct LoadOptions {
  KindSpec default_kind = KindSpec::automatic;
  /// Per-column overrides keyed by header name.
  std::map<std::string, KindSpec> kinds;
  /// Under automatic typing, an all-integral column with at most this many
  /// distinct values is discrete.
  std::size_t discrete_cutoff = 20;
  /// Explicit category orders; columns not listed are ordered lexicographically.
  std::map<std::string, std::vector<std::string>> category_orders;
};

/// Header plus string cells, column-major.
struct StringTable {
  std::vector<std::string> names;
  std::vector<std::vector<std::string>> columns;
};

/// Reads comma-separated text with a header row. Quoted fields ("a,b") are
/// supported. Throws IngestionError with the 1-based location of the problem.
StringTable read_csv_table(std::istream& in);

/**
 * Types and converts a string table.
 *
 * Automatic typing: a column whose first cell is not numeric is categorical;
 * otherwise every cell must parse as a number. Numeric discrete columns are
 * re-coded to contiguous codes 0..K-1 in increasing value order.
 */
Dataset to_dataset(const StringTable& table, const LoadOptions& options = {});

Dataset load_csv(const std::filesystem::path& path, const LoadOptions& options = {});
Dataset parse_csv(std::istream& in, const LoadOptions& options = {});

/// Writes the dataset with a header row; values use round-trip precision.
void write_csv(std::ostream& out, const Dataset& d);
void write_csv(const std::filesystem::path& path, const Dataset& d);

/// Maps continuous columns to [0,1]; constant columns become zeros.
Dataset normalize_minmax(const Dataset& d);

/// Codes every column of raw by the sorted order of its distinct strings, or
/// by the order given in `orders` for that column name.
Dataset encode_categorical(const StringTable& raw,
                           const std::map<std::string, std::vector<std::string>>& orders = {});

/// Category strings for column j, reversing encode_categorical.
std::vector<std::string> decode_column(const Dataset& d, std::size_t j);

/// Uniform sample of m rows without replacement; output rows are in draw order.
Dataset sample_rows(const Dataset& d, std::size_t m, std::uint64_t seed);

/// The given columns, in the given order, as a new dataset.
Dataset select_columns(const Dataset& d, const std::vector<std::size_t>& columns);

/// Parsed key=value text. Blank lines and lines starting with '#' are skipped.
std::map<std::string, std::string> parse_key_values(std::istream& in);

/**
 * Load options from key=value config entries:
 *   cutoff=20
 *   kind=auto|discrete|continuous|categorical       (default for all columns)
 *   kind.<column>=auto|discrete|continuous|categorical
 *   order.<column>=low,mid,high
 * Unknown keys are ignored here so other layers can share the file.
 */
LoadOptions load_options_from(const std::map<std::string, std::string>& config);

KindSpec parse_kind_spec(const std::string& text);

}  // namespace eembi
