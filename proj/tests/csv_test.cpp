#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <sstream>

#include "npovm/csv.hpp"
#include "npovm/errors.hpp"
#include "npovm/optimizer.hpp"
#include "support.hpp"

namespace npovm::csv {
namespace {

TEST(FormatReal, TwelveSignificantDigits) {
  EXPECT_EQ(format_real(0.0), "0");
  EXPECT_EQ(format_real(0.5), "0.5");
  EXPECT_EQ(format_real(-2.0), "-2");
  EXPECT_EQ(format_real(1.0 / 3.0), "0.333333333333");
  EXPECT_EQ(format_real(3.14159265358979), "3.14159265359");
  EXPECT_EQ(format_real(1e-20), "1e-20");
  EXPECT_EQ(format_real(std::nan("")), "nan");
  EXPECT_EQ(format_real(std::numeric_limits<double>::infinity()), "inf");
  EXPECT_EQ(format_real(-std::numeric_limits<double>::infinity()), "-inf");
}

TEST(Pico, FormatAndParse) {
  EXPECT_EQ(to_pico_units(0.146446609407), 146446609407);
  EXPECT_EQ(to_pico_units(0.1464466094067262), 146446609407);
  EXPECT_EQ(format_pico(146446609407), "0.146446609407");
  EXPECT_EQ(format_pico(0), "0.000000000000");
  EXPECT_EQ(format_pico(1'000'000'000'000), "1.000000000000");
  EXPECT_EQ(format_pico(-27235474728), "-0.027235474728");
  EXPECT_EQ(format_pico(-5), "-0.000000000005");
  EXPECT_EQ(parse_pico("-0.027235474728"), -27235474728);
  EXPECT_EQ(parse_pico("0.5"), std::nullopt);
  EXPECT_EQ(parse_pico("nan"), std::nullopt);
  EXPECT_EQ(parse_pico("0.12345678901x"), std::nullopt);
}

TEST(CsvProperty, PicoRoundTrip) {
  testing::Random rng(61);
  for (int i = 0; i < 2000; ++i) {
    const auto units = to_pico_units(rng.uniform(-1.0, 1.0));
    EXPECT_EQ(parse_pico(format_pico(units)), units);
  }
}

TEST(WriteSweep, HeaderRowsAndExactDelta) {
  optimizer::ConstraintSet cs;
  cs.d = 0.3;
  cs.e = 0.1;
  const auto table = optimizer::sweep({{"lambda", {0.5, 0.0, 0.001}}},
                                      scenarios::case3_params(0.001, 0.002), cs);
  std::ostringstream out;
  write_sweep(out, table, {"theta", "phi"}, true);
  const std::string text = out.str();
  ASSERT_FALSE(text.empty());
  EXPECT_EQ(text.back(), '\n');
  EXPECT_EQ(text.find('\r'), std::string::npos);

  std::istringstream in(text);
  const Table parsed = parse(in);
  EXPECT_EQ(parsed.header,
            (std::vector<std::string>{"lambda", "theta", "phi", "p_npovm", "p_povm", "delta_p",
                                      "slack_d", "slack_E", "slack_d_reduced", "boundary_d",
                                      "boundary_E", "feasible", "converged"}));
  // lambda = 0 cannot build a scenario and is dropped.
  ASSERT_EQ(parsed.rows.size(), 2u);
  const auto& infeasible = parsed.rows[0];
  EXPECT_EQ(infeasible[parsed.column("p_npovm")], "nan");
  EXPECT_EQ(infeasible[parsed.column("feasible")], "false");
  EXPECT_NE(infeasible[parsed.column("slack_E")], "nan");
  const auto& ok = parsed.rows[1];
  EXPECT_EQ(ok[parsed.column("feasible")], "true");
  EXPECT_EQ(ok[parsed.column("lambda")], "0.001");
  EXPECT_TRUE(delta_mismatches(parsed).empty());

  const auto p = parse_pico(ok[parsed.column("p_npovm")]);
  const auto q = parse_pico(ok[parsed.column("p_povm")]);
  const auto dp = parse_pico(ok[parsed.column("delta_p")]);
  ASSERT_TRUE(p && q && dp);
  EXPECT_EQ(*dp, *p - *q);
  EXPECT_EQ(*p, to_pico_units(table.rows[2].result->p_npovm.value()));
}

TEST(DeltaMismatches, DetectsTampering) {
  std::istringstream in(
      "d,p_npovm,p_povm,delta_p\n"
      "0,0.146446609407,0.146446609407,0.000000000000\n"
      "0.4,0.119211344707,0.146446609407,-0.027235264701\n"
      "0.5,nan,0.2,nan\n");
  const Table t = parse(in);
  EXPECT_EQ(delta_mismatches(t), std::vector<std::size_t>{1});
  EXPECT_THROW(t.column("absent"), InvalidArgument);
}

}  // namespace
}  // namespace npovm::csv
