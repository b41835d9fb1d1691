#include <gtest/gtest.h>

#include <random>

#include "test_support.hpp"
#include "usat/delay.hpp"
#include "usat/docio.hpp"

namespace usat {
namespace {

std::string section(const std::string& report, const std::string& heading) {
  const auto start = report.find("## " + heading + "\n");
  if (start == std::string::npos) return {};
  const auto end = report.find("\n## ", start + 1);
  return report.substr(start, end == std::string::npos ? std::string::npos : end - start);
}

std::size_t count(const std::string& text, const std::string& needle) {
  std::size_t n = 0;
  for (auto at = text.find(needle); at != std::string::npos; at = text.find(needle, at + 1)) ++n;
  return n;
}

DelayAnalysis fixture_delay() {
  const auto s = read_delay_log_file(testing::fixture_path("gdrts_delay.csv"));
  const auto h = bin_delays(s, 100);
  return DelayAnalysis{h, summarize(h, s), "gdrts_delay.csv"};
}

TEST(RenderReport, Sections) {
  const auto r = render_report(load_document(testing::fixture_path("menb.htd.yaml")), std::nullopt);
  for (const char* h : {"Test Case", "Qualification Strategy", "PoI Viewpoint", "SC Definition & Diagram",
                        "SC Parameter Analysis", "ES Viewpoint"})
    EXPECT_FALSE(section(r, h).empty()) << h;
  EXPECT_TRUE(section(r, "Delay Characterization").empty());
  EXPECT_NE(section(r, "SC Definition & Diagram").find("```dot\ndigraph sbd {"), std::string::npos);
}

TEST(RenderReport, RankingOrder) {
  auto d = testing::minimal_document();
  auto p2 = d.parameters[0];
  p2.id = "PAR-2";
  d.parameters.push_back(p2);
  d.poi_cases[0].assigned_factors.push_back("PAR-2");
  d.poi_cases[0].ranking = Ranking{"m", {{"PAR-2", 3, 1}, {"PAR-1", 1, 2}}};
  const auto poi = section(render_report(d, std::nullopt), "PoI Viewpoint");
  const auto first = poi.find("| 1 | PAR-2 |");
  const auto second = poi.find("| 2 | PAR-1 |");
  ASSERT_NE(first, std::string::npos) << poi;
  ASSERT_NE(second, std::string::npos) << poi;
  EXPECT_LT(first, second);
  EXPECT_EQ(poi.find("ranking: pending"), std::string::npos);
}

TEST(RenderReport, PendingRanking) {
  const auto poi = section(render_report(testing::minimal_document(), std::nullopt), "PoI Viewpoint");
  EXPECT_NE(poi.find("ranking: pending"), std::string::npos);
}

TEST(RenderReport, GdrtsWithDelay) {
  const auto r = render_report(load_document(testing::fixture_path("gdrts.htd.yaml")), fixture_delay());
  const auto delay = section(r, "Delay Characterization");
  EXPECT_NE(delay.find("- samples: 100000\n"), std::string::npos);
  EXPECT_NE(delay.find("- mode bin: [12.5982, 12.6084] ms, rho = 6.46 %\n"), std::string::npos) << delay;
  EXPECT_NE(delay.find("rho = 6.46 %"), std::string::npos);
  EXPECT_NE(delay.find("- first bin: [12.18, "), std::string::npos);
  EXPECT_NE(delay.find("rho = 0.001 %"), std::string::npos);
  EXPECT_NE(delay.find("rho = 0.003 %"), std::string::npos);
  EXPECT_NE(delay.find("| 41 | "), std::string::npos);
  EXPECT_EQ(count(delay, "\n| "), 101u);  // header plus 100 bins
}

TEST(ReportProperty, ParameterRowsOncePureAndClean) {
  std::mt19937_64 rng(41);
  for (int i = 0; i < 200; ++i) {
    const auto d = testing::random_document(rng);
    const auto r = render_report(d, std::nullopt);
    EXPECT_EQ(r, render_report(d, std::nullopt));
    EXPECT_EQ(r.find("ERROR"), std::string::npos);
    const auto table = section(r, "SC Parameter Analysis");
    for (const auto& p : d.parameters) EXPECT_EQ(count(table, "\n| " + p.id + " |"), 1u) << p.id;
  }
}

}  // namespace
}  // namespace usat
