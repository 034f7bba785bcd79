#include <gtest/gtest.h>

#include <sstream>

#include "eembi/data.hpp"
#include "eembi/error.hpp"

using namespace eembi;

namespace {

Dataset parse(const std::string& text, const LoadOptions& options = {}) {
  std::istringstream in(text);
  return parse_csv(in, options);
}

std::vector<double> col(const Dataset& d, std::size_t j) {
  const auto c = d.column(j);
  return {c.begin(), c.end()};
}

}  // namespace

TEST(LoadCsv, IntegerColumnsAreDiscrete) {
  const Dataset d = parse("a,b\n0,2\n1,1\n2,0\n1,2\n");
  EXPECT_EQ(d.rows(), 4U);
  EXPECT_EQ(d.cols(), 2U);
  EXPECT_EQ(d.kind(0), ColumnKind::discrete);
  EXPECT_EQ(d.kind(1), ColumnKind::discrete);
  EXPECT_TRUE(d.all_discrete());
}

TEST(LoadCsv, FractionalColumnIsContinuous) {
  const Dataset d = parse("x\n0.5\n1.7\n2.0\n");
  EXPECT_EQ(d.kind(0), ColumnKind::continuous);
  EXPECT_EQ(col(d, 0), (std::vector<double>{0.5, 1.7, 2.0}));
}

TEST(LoadCsv, TooManyDistinctIntegersIsContinuous) {
  std::string text = "x\n";
  for (int v = 0; v < 25; ++v) text += std::to_string(v) + "\n";
  EXPECT_EQ(parse(text).kind(0), ColumnKind::continuous);
  LoadOptions opt;
  opt.discrete_cutoff = 30;
  EXPECT_EQ(parse(text, opt).kind(0), ColumnKind::discrete);
}

TEST(LoadCsv, DiscreteCodesAreContiguous) {
  const Dataset d = parse("x\n5\n9\n5\n7\n");
  EXPECT_EQ(col(d, 0), (std::vector<double>{0, 2, 0, 1}));
}

TEST(LoadCsv, WideFile) {
  std::ostringstream os;
  for (int j = 0; j < 37; ++j) os << (j ? "," : "") << "v" << j;
  os << '\n';
  for (int r = 0; r < 3000; ++r) {
    for (int j = 0; j < 37; ++j) os << (j ? "," : "") << (r * 7 + j) % 3;
    os << '\n';
  }
  const Dataset d = parse(os.str());
  EXPECT_EQ(d.rows(), 3000U);
  EXPECT_EQ(d.cols(), 37U);
}

TEST(LoadCsv, RaggedRowReportsLocation) {
  try {
    parse("a,b\n1,2\n3\n");
    FAIL() << "expected IngestionError";
  } catch (const IngestionError& e) {
    EXPECT_EQ(e.row(), 3U);
  }
}

TEST(LoadCsv, NonNumericCellReportsLocation) {
  try {
    parse("a,b\n1,2\n3,oops\n");
    FAIL() << "expected IngestionError";
  } catch (const IngestionError& e) {
    EXPECT_EQ(e.row(), 3U);
    EXPECT_EQ(e.column(), 2U);
  }
}

TEST(LoadCsv, EmptyAndMissing) {
  EXPECT_THROW(parse(""), IngestionError);
  EXPECT_THROW(parse("a,b\n1,\n"), IngestionError);
}

TEST(LoadCsv, QuotedFieldsAndCategories) {
  const Dataset d = parse("name,v\n\"low, really\",1\nhigh,2\n");
  EXPECT_EQ(d.kind(0), ColumnKind::discrete);
  EXPECT_EQ(decode_column(d, 0), (std::vector<std::string>{"low, really", "high"}));
}

TEST(LoadCsv, MissingFileIsIngestionError) {
  EXPECT_THROW(load_csv("/nonexistent/file.csv"), IngestionError);
}

TEST(LoadCsv, KindOverrides) {
  LoadOptions opt;
  opt.kinds["a"] = KindSpec::continuous;
  const Dataset d = parse("a,b\n0,1\n1,0\n", opt);
  EXPECT_EQ(d.kind(0), ColumnKind::continuous);
  EXPECT_EQ(d.kind(1), ColumnKind::discrete);
}

TEST(Normalize, Examples) {
  const Dataset d({"x", "c", "u"}, {ColumnKind::continuous, ColumnKind::continuous, ColumnKind::continuous},
                  {{2, 4, 6}, {3, 3, 3}, {0, 0.25, 1}});
  const Dataset n = normalize_minmax(d);
  EXPECT_EQ(col(n, 0), (std::vector<double>{0, 0.5, 1}));
  EXPECT_EQ(col(n, 1), (std::vector<double>{0, 0, 0}));
  EXPECT_EQ(col(n, 2), (std::vector<double>{0, 0.25, 1}));
  EXPECT_EQ(normalize_minmax(n).columns(), n.columns());
}

TEST(Normalize, DiscreteUntouched) {
  const Dataset d({"k"}, {ColumnKind::discrete}, {{0, 2, 1}});
  EXPECT_EQ(col(normalize_minmax(d), 0), (std::vector<double>{0, 2, 1}));
}

TEST(EncodeCategorical, LexicographicCodes) {
  const StringTable raw{{"level"}, {{"low", "high", "low", "mid"}}};
  const Dataset d = encode_categorical(raw);
  EXPECT_EQ(col(d, 0), (std::vector<double>{1, 0, 1, 2}));
  EXPECT_EQ(d.categories(0), (std::vector<std::string>{"high", "low", "mid"}));
  EXPECT_EQ(decode_column(d, 0), raw.columns[0]);
}

TEST(EncodeCategorical, SingleCategoryAndNumericStrings) {
  const StringTable raw{{"a", "b"}, {{"z", "z"}, {"10", "9"}}};
  const Dataset d = encode_categorical(raw);
  EXPECT_EQ(col(d, 0), (std::vector<double>{0, 0}));
  // "10" sorts before "9".
  EXPECT_EQ(col(d, 1), (std::vector<double>{0, 1}));
}

TEST(EncodeCategorical, ExplicitOrder) {
  const StringTable raw{{"level"}, {{"low", "high", "mid"}}};
  const Dataset d = encode_categorical(raw, {{"level", {"low", "mid", "high"}}});
  EXPECT_EQ(col(d, 0), (std::vector<double>{0, 2, 1}));
}

TEST(SampleRows, FullSampleIsPermutation) {
  const Dataset d({"x"}, {ColumnKind::continuous}, {{1, 2, 3, 4, 5}});
  const Dataset s = sample_rows(d, 5, 3);
  auto v = col(s, 0);
  std::sort(v.begin(), v.end());
  EXPECT_EQ(v, col(d, 0));
}

TEST(SampleRows, DeterministicAndSized) {
  std::vector<double> values(3000);
  for (std::size_t i = 0; i < values.size(); ++i) values[i] = static_cast<double>(i);
  const Dataset d({"x"}, {ColumnKind::continuous}, {values});
  const Dataset a = sample_rows(d, 1000, 42);
  EXPECT_EQ(a.rows(), 1000U);
  EXPECT_EQ(a.columns(), sample_rows(d, 1000, 42).columns());
  EXPECT_NE(a.columns(), sample_rows(d, 1000, 43).columns());
  EXPECT_THROW(sample_rows(d, 3001, 1), std::invalid_argument);
}

TEST(WriteCsv, RoundTrip) {
  const Dataset d({"a", "b"}, {ColumnKind::continuous, ColumnKind::discrete}, {{0.1, 1.0 / 3.0}, {0, 1}});
  std::ostringstream os;
  write_csv(os, d);
  std::istringstream in(os.str());
  LoadOptions opt;
  opt.kinds["a"] = KindSpec::continuous;
  const Dataset back = parse_csv(in, opt);
  EXPECT_EQ(back.columns(), d.columns());
}

TEST(Dataset, ValidatesInput) {
  EXPECT_THROW(Dataset({"a"}, {ColumnKind::discrete}, {{0.5}}), std::invalid_argument);
  EXPECT_THROW(Dataset({"a", "b"}, {ColumnKind::continuous, ColumnKind::continuous}, {{1, 2}, {1}}),
               std::invalid_argument);
}

TEST(Config, KeyValues) {
  std::istringstream in("# comment\ncutoff=5\nkind.a=continuous\norder.b=lo,hi\n\n");
  const auto kv = parse_key_values(in);
  const LoadOptions opt = load_options_from(kv);
  EXPECT_EQ(opt.discrete_cutoff, 5U);
  EXPECT_EQ(opt.kinds.at("a"), KindSpec::continuous);
  EXPECT_EQ(opt.category_orders.at("b"), (std::vector<std::string>{"lo", "hi"}));
  EXPECT_THROW(parse_kind_spec("weird"), std::invalid_argument);
}
