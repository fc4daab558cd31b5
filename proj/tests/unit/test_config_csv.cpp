#include <gtest/gtest.h>

#include <cmath>
#include <sstream>
#include <string>

#include "ettrap/config.hpp"
#include "ettrap/csv.hpp"
#include "ettrap/errors.hpp"
#include "ettrap/svg.hpp"

using namespace ettrap;

namespace {

CsvTable sample_table() {
  CsvTable t;
  t.metadata = {"ettrap test", "command = dynamics"};
  t.columns = {"t", "a", "b"};
  for (int k = 0; k < 5; ++k) {
    const double x = 0.5 * (k + 1);
    t.add_row({format_number(x), format_number(std::exp(-x)), format_number(x * x)});
  }
  return t;
}

}  // namespace

TEST(Config, ParsesKeyValueWithComments) {
  const auto cfg = Config::parse("# header\nn_emitters = 10\n  kappa=3.5   # trailing\n\nmodel = cooperative\n");
  EXPECT_EQ(cfg.get_int("n_emitters", 2), 10);
  EXPECT_DOUBLE_EQ(cfg.get_double("kappa", 0.0), 3.5);
  EXPECT_EQ(cfg.get_string("model", "x"), "cooperative");
  EXPECT_EQ(cfg.line_of("kappa"), 3);
  EXPECT_EQ(cfg.get_double("absent", 1.25), 1.25);
  EXPECT_EQ(cfg.effective().at("absent"), "1.25");
}

TEST(Config, ErrorsCarryLineNumbers) {
  try {
    Config::parse("a = 1\nbroken line\n");
    FAIL();
  } catch (const ConfigError& e) {
    EXPECT_EQ(e.line(), 2);
  }
  EXPECT_THROW(Config::parse("a = 1\na = 2\n"), ConfigError);
  EXPECT_THROW(Config::parse("a =\n"), ConfigError);
  EXPECT_THROW(Config::parse("a b = 1\n"), ConfigError);
  const auto cfg = Config::parse("x = abc\nflag = maybe\nn = 2.5\n");
  EXPECT_THROW(cfg.get_double("x", 0.0), ConfigError);
  EXPECT_THROW(cfg.get_bool("flag", false), ConfigError);
  EXPECT_THROW(cfg.get_int("n", 0), ConfigError);
}

TEST(Config, TypedValues) {
  const auto cfg = Config::parse("on = true\noff = false\nseed = 18446744073709551615\nlist = 1, 2, 3\n"
                                 "orient = 1, 0, 1\n");
  EXPECT_TRUE(cfg.get_bool("on", false));
  EXPECT_FALSE(cfg.get_bool("off", true));
  EXPECT_EQ(cfg.get_u64("seed", 0), 18446744073709551615ull);
  EXPECT_EQ(cfg.get_int_list("list", ""), (std::vector<int>{1, 2, 3}));
  const auto o = cfg.get_orientation("orient", "transverse");
  EXPECT_NEAR(o.norm(), 1.0, 1e-15);
  EXPECT_NEAR(o.x(), std::sqrt(0.5), 1e-15);
  EXPECT_NEAR(cfg.get_orientation("missing", "transverse").z(), 1.0, 0.0);
}

TEST(Config, Grids) {
  EXPECT_EQ(parse_grid("0, 0.5, 2"), (std::vector<double>{0.0, 0.5, 2.0}));
  const auto lin = parse_grid("0:1:5");
  ASSERT_EQ(lin.size(), 5u);
  EXPECT_DOUBLE_EQ(lin[1], 0.25);
  const auto lg = parse_grid("0.1:1000:5:log");
  ASSERT_EQ(lg.size(), 5u);
  EXPECT_EQ(lg.front(), 0.1);
  EXPECT_EQ(lg.back(), 1000.0);
  EXPECT_NEAR(lg[2], 10.0, 1e-12);
  EXPECT_THROW(parse_grid("0:1000:5:log"), ConfigError);
  EXPECT_THROW(parse_grid("1:2"), ConfigError);
  EXPECT_THROW(parse_grid("1:2:0"), ConfigError);
  EXPECT_THROW(parse_grid("1:2:3:cubic"), ConfigError);
  EXPECT_THROW(parse_grid(""), ConfigError);
}

TEST(Config, StrictKeyCheck) {
  const auto cfg = Config::parse("kappa = 1\nkapa = 2\n");
  EXPECT_THROW(cfg.check_keys({"kappa"}, true, nullptr), ConfigError);
  std::ostringstream warn;
  EXPECT_NO_THROW(cfg.check_keys({"kappa"}, false, &warn));
  EXPECT_NE(warn.str().find("kapa"), std::string::npos);
}

TEST(Config, FormatExactRoundTrips) {
  for (double v : {0.1, 1.0 / 3.0, 23.08245612, 1e-300, -7.0}) EXPECT_EQ(std::stod(format_exact(v)), v);
}

TEST(Config, ReadsConfigBlockBackFromCsv) {
  Config cfg = Config::parse("kappa = 0.3\nn_emitters = 4\n");
  (void)cfg.get_double("kappa", 0.0);
  (void)cfg.get_int("n_emitters", 0);
  (void)cfg.get_string("model", "cooperative");
  CsvTable t = sample_table();
  t.metadata = metadata_block("dynamics", cfg.effective(), {"note = extra"});
  std::ostringstream out;
  write_csv(out, t);
  const auto back = Config::parse(out.str());
  EXPECT_EQ(back.keys(), (std::vector<std::string>{"kappa", "model", "n_emitters"}));
  EXPECT_EQ(back.get_double("kappa", 0.0), 0.3);
  EXPECT_EQ(back.get_string("model", ""), "cooperative");
}

TEST(Csv, NumberFormatting) {
  EXPECT_EQ(format_number(0.0), "0");
  EXPECT_EQ(format_number(1.0 / 3.0), "0.333333333");
  EXPECT_EQ(format_number(123456789012.0), "1.23456789e+11");
  EXPECT_EQ(format_number(std::nan("")), "nan");
  EXPECT_EQ(format_number(-INFINITY), "-inf");
  EXPECT_EQ(format_integer(-12), "-12");
}

TEST(Csv, WriteReadRoundTrip) {
  const CsvTable t = sample_table();
  std::ostringstream out;
  write_csv(out, t);
  EXPECT_EQ(out.str().rfind("# ettrap test\n# command = dynamics\nt,a,b\n", 0), 0u);
  std::istringstream in(out.str());
  const CsvTable back = read_csv(in);
  EXPECT_EQ(back.metadata, t.metadata);
  EXPECT_EQ(back.columns, t.columns);
  EXPECT_EQ(back.rows, t.rows);
  EXPECT_NEAR(back.numeric_column("a")[0], std::exp(-0.5), 1e-9);
}

TEST(Csv, Errors) {
  const CsvTable t = sample_table();
  try {
    t.column("kappa");
    FAIL();
  } catch (const ConfigError& e) {
    EXPECT_NE(std::string(e.what()).find("missing column 'kappa'"), std::string::npos);
  }
  std::istringstream ragged("a,b\n1,2\n3\n");
  EXPECT_THROW(read_csv(ragged), ConfigError);
  std::istringstream none("# only metadata\n");
  EXPECT_THROW(read_csv(none), ConfigError);
  CsvTable bad = t;
  bad.rows[1][1] = "abc";
  EXPECT_THROW(bad.numeric_column("a"), ConfigError);
}

TEST(Svg, LinePlotIsDeterministicWithLegend) {
  PlotSpec spec;
  spec.x = "t";
  spec.y = {"a", "b"};
  spec.title = "demo & <test>";
  const std::string first = render_svg(sample_table(), spec);
  EXPECT_EQ(first, render_svg(sample_table(), spec));
  EXPECT_EQ(first.rfind("<?xml", 0), 0u);
  EXPECT_NE(first.find("version=\"1.1\""), std::string::npos);
  EXPECT_NE(first.find(">a</text>"), std::string::npos);
  EXPECT_NE(first.find(">b</text>"), std::string::npos);
  EXPECT_NE(first.find("demo &amp; &lt;test&gt;"), std::string::npos);
  EXPECT_NE(first.find("</svg>"), std::string::npos);
}

TEST(Svg, LogAxisAndHeatmap) {
  CsvTable grid;
  grid.columns = {"kappa", "a_lambda", "efficiency"};
  for (double a : {0.05, 0.1})
    for (double k : {0.1, 1.0, 10.0, 100.0}) grid.add_row({format_number(k), format_number(a), format_number(a * k / (1 + k))});
  PlotSpec spec;
  spec.kind = PlotSpec::Kind::Heatmap;
  spec.x = "kappa";
  spec.y = {"a_lambda"};
  spec.z = "efficiency";
  spec.log_x = true;
  const std::string svg = render_svg(grid, spec);
  EXPECT_EQ(svg, render_svg(grid, spec));
  // Decade ticks on the log axis.
  EXPECT_NE(svg.find(">100</text>"), std::string::npos);
  EXPECT_NE(svg.find(">0.1</text>"), std::string::npos);
  EXPECT_NE(svg.find("<rect"), std::string::npos);
}

TEST(Svg, Errors) {
  PlotSpec spec;
  spec.x = "t";
  spec.y = {"missing"};
  EXPECT_THROW(render_svg(sample_table(), spec), ConfigError);
  CsvTable empty = sample_table();
  empty.rows.clear();
  spec.y = {"a"};
  EXPECT_THROW(render_svg(empty, spec), ConfigError);
  CsvTable neg = sample_table();
  neg.rows[0][1] = "-1";
  spec.log_y = true;
  EXPECT_THROW(render_svg(neg, spec), ConfigError);
}
