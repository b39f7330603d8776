#include <gtest/gtest.h>

#include <sstream>

#include "degfem/study.hpp"
#include "degfem/verify.hpp"

using namespace degfem;

TEST(FieldIo, RoundTrip) {
  const NodalField f{{0.1, -2.5e-300, 1.0 / 3.0, 0.0}};
  std::ostringstream os;
  write_field(os, f);
  std::istringstream is(os.str());
  EXPECT_EQ(read_field(is).values, f.values);
  std::istringstream bad("3\n1\n2\n");
  EXPECT_THROW(read_field(bad), std::runtime_error);
}

TEST(Format, SeventeenDigits) {
  EXPECT_EQ(format_g17(0.1), "0.10000000000000001");
  EXPECT_EQ(format_g17(1.0), "1");
  EXPECT_EQ(format_g17(std::numeric_limits<double>::quiet_NaN()), "nan");
}

TEST(BandJson, RoundTrip) {
  const SingleBandMesh sb = single_band_mesh(8, 1.0 / 512);
  const Band b = band_from_json(Json::parse(to_json(sb.band).dump()));
  EXPECT_EQ(b.odd_elements, sb.band.odd_elements);
  EXPECT_EQ(b.even_elements, sb.band.even_elements);
  EXPECT_EQ(b.gamma_edges, sb.band.gamma_edges);
  EXPECT_EQ(b.length, sb.band.length);
  EXPECT_NO_THROW(check_band(sb.mesh, b));
}

TEST(Study, Families) {
  EXPECT_EQ(parse_family("ba"), Family::BabuskaAziz);
  EXPECT_EQ(parse_family("band"), Family::SingleBand);
  EXPECT_EQ(parse_family("subdivided_band"), Family::SubdividedBand);
  EXPECT_THROW(parse_family("mesh"), InvalidConfiguration);
}

TEST(Study, ConfigValidation) {
  StudyConfig c;
  c.levels = {8, 8};
  EXPECT_THROW(c.validate(), InvalidConfiguration);
  c.levels = {8, 16};
  c.beta = 0.5;
  EXPECT_THROW(c.validate(), InvalidConfiguration);
  c.beta = 2.0;
  c.alpha = 1.5;
  EXPECT_THROW(c.validate(), InvalidConfiguration);
  c.alpha = 1.0;
  EXPECT_NO_THROW(c.validate());
}

TEST(Study, CsvIsDeterministic) {
  StudyConfig c;
  c.family = Family::BabuskaAziz;
  c.levels = {4, 8};
  c.beta = 1.5;
  const std::string a = study_csv(run_study(c));
  const std::string b = study_csv(run_study(c));
  EXPECT_EQ(a, b);
  EXPECT_EQ(a.substr(0, a.find('\n')), "h,hbar,dofs,h1_error,h1_error_band,l2_gamma,a1,a2,nec_lhs,rate_running");
  EXPECT_NE(a.find(",nan\n"), std::string::npos);  // first running rate
}

TEST(Study, UniformSummary) {
  StudyConfig c;
  c.levels = {4, 8, 16};
  const StudyResult r = run_study(c);
  ASSERT_EQ(r.rows.size(), 3u);
  EXPECT_NEAR(r.fit.rate, 1.0, 1e-10);
  const Json j = study_json(r);
  EXPECT_EQ(j["config"]["family"], "uniform");
  EXPECT_EQ(j["levels"].size(), 3u);
  EXPECT_TRUE(j["levels"][0]["hbar"].is_null());
}

TEST(HorizontalEdges, Uniform) {
  const Triangulation t = unit_square_uniform(4);
  const auto e = horizontal_edges(t, 0.5);
  ASSERT_EQ(e.size(), 4u);
  for (std::size_t i = 1; i < e.size(); ++i) EXPECT_EQ(e[i][0], e[i - 1][1]);
}

TEST(Verify, SuitesPass) {
  for (const std::string& s : suite_names()) {
    const SuiteReport r = run_suite(s, 17);
    EXPECT_TRUE(r.passed()) << to_json(r).dump(2);
  }
  EXPECT_THROW(run_suite("nothing"), InvalidConfiguration);
}
