#include <gtest/gtest.h>

#include <random>
#include <set>

#include "fraudcc/cocontext.hpp"
#include "fraudcc/components.hpp"
#include "fraudcc/schema.hpp"
#include "oracles.hpp"

using namespace fraudcc;

namespace {

RiskEvent ev(std::string_view iso, std::string account, std::string ip) {
  return {*parse_timestamp(iso), "login", std::move(account), std::move(ip), {}};
}

std::vector<RiskEvent> random_stream(std::mt19937_64& rng, int max_events, int max_contexts, int max_gap) {
  const int n = std::uniform_int_distribution<int>(0, max_events)(rng);
  const int contexts = std::uniform_int_distribution<int>(1, max_contexts)(rng);
  const int accounts = std::uniform_int_distribution<int>(1, 15)(rng);
  std::vector<RiskEvent> out;
  std::int64_t t = 1000;
  for (int i = 0; i < n; ++i) {
    t += std::uniform_int_distribution<int>(0, max_gap)(rng);
    out.push_back({Timestamp{t}, "e", "a" + std::to_string(std::uniform_int_distribution<int>(0, accounts - 1)(rng)),
                   "ip" + std::to_string(std::uniform_int_distribution<int>(0, contexts - 1)(rng)), {}});
  }
  return out;
}

std::vector<oracle::PairEdge> via_oracle(const std::vector<RiskEvent>& events, std::int64_t w) {
  std::vector<oracle::Event> plain;
  for (const auto& e : events) plain.push_back({e.ts.seconds, e.account, e.ip});
  return oracle::adjacent_pairs(plain, w);
}

std::vector<oracle::PairEdge> as_plain(const std::vector<CoContextEdge>& edges) {
  std::vector<oracle::PairEdge> out;
  for (const auto& e : edges) out.push_back({e.a, e.b, e.context_value, e.created_at.seconds, e.delta});
  return out;
}

}  // namespace

TEST(CoContext, WorkedExampleEmitsOneEdge) {
  const std::vector<RiskEvent> events{ev("2020-11-20T09:00:00Z", "u1", "ip1"),
                                      ev("2020-11-20T15:00:00Z", "u2", "ip1"),
                                      ev("2020-11-20T15:00:01Z", "u3", "ip1")};
  const auto edges = build_cocontext_edges(events, {}, 30);
  ASSERT_EQ(edges.size(), 1u);
  EXPECT_EQ(edges[0].a, "u2");
  EXPECT_EQ(edges[0].b, "u3");
  EXPECT_EQ(edges[0].delta, 1);
  EXPECT_EQ(edges[0].created_at, *parse_timestamp("2020-11-20T15:00:01Z"));
  EXPECT_EQ(edges[0].context_type, "shared_ip");
}

TEST(CoContext, GapEqualToWindowIsIncluded) {
  const std::vector<RiskEvent> events{{Timestamp{0}, "", "a", "x", {}}, {Timestamp{30}, "", "b", "x", {}}};
  EXPECT_EQ(build_cocontext_edges(events, {}, 30).size(), 1u);
  EXPECT_EQ(build_cocontext_edges(events, {}, 29).size(), 0u);
}

TEST(CoContext, SameAccountRefreshesLastSeen) {
  // a@0, a@20, b@45: the refresh at 20 makes b's gap 25, inside 30
  const std::vector<RiskEvent> events{{Timestamp{0}, "", "a", "x", {}},
                                      {Timestamp{20}, "", "a", "x", {}},
                                      {Timestamp{45}, "", "b", "x", {}}};
  const auto edges = build_cocontext_edges(events, {}, 30);
  ASSERT_EQ(edges.size(), 1u);
  EXPECT_EQ(edges[0].delta, 25);
}

TEST(CoContext, SelectorReadsExtraFields) {
  RiskEvent a{Timestamp{0}, "", "a", "ip1", {{"device", "d1"}}};
  RiskEvent b{Timestamp{5}, "", "b", "ip2", {{"device", "d1"}}};
  const std::vector<RiskEvent> events{a, b};
  const auto edges = build_cocontext_edges(events, {"device", "shared_device"}, 30);
  ASSERT_EQ(edges.size(), 1u);
  EXPECT_EQ(edges[0].context_type, "shared_device");
  EXPECT_TRUE(build_cocontext_edges(events, {}, 30).empty());
}

TEST(CoContext, OutOfOrderStreamingInputThrows) {
  CoContextBuilder b({}, 30);
  b.push({Timestamp{10}, "", "a", "x", {}});
  EXPECT_THROW(b.push({Timestamp{9}, "", "b", "x", {}}), std::invalid_argument);
}

TEST(CoContext, MatchesAdjacentPairOracle) {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 300; ++trial) {
    const auto events = random_stream(rng, 200, 10, 20);
    const auto w = std::uniform_int_distribution<std::int64_t>(1, 60)(rng);
    const auto edges = build_cocontext_edges(events, {}, w);
    ASSERT_EQ(as_plain(edges), via_oracle(events, w)) << "trial " << trial;
  }
}

TEST(CoContext, ParallelMatchesSerial) {
  std::mt19937_64 rng(12);
  for (int trial = 0; trial < 100; ++trial) {
    const auto events = random_stream(rng, 400, 30, 10);
    EXPECT_EQ(build_cocontext_edges(events, {}, 25, Exec::Serial),
              build_cocontext_edges(events, {}, 25, Exec::Parallel));
  }
}

TEST(CoContext, WiderBuildFilteredEqualsNarrowBuild) {
  std::mt19937_64 rng(13);
  for (int trial = 0; trial < 200; ++trial) {
    const auto events = random_stream(rng, 150, 6, 40);
    const std::int64_t w1 = 30, w2 = 3600;
    std::vector<CoContextEdge> filtered;
    for (const auto& e : build_cocontext_edges(events, {}, w2))
      if (e.delta <= w1) filtered.push_back(e);
    EXPECT_EQ(filtered, build_cocontext_edges(events, {}, w1));
  }
}

TEST(CoContext, EdgeCountBoundedByEventsMinusContexts) {
  std::mt19937_64 rng(14);
  for (int trial = 0; trial < 200; ++trial) {
    const auto events = random_stream(rng, 200, 10, 5);
    std::set<std::string> contexts;
    for (const auto& e : events) contexts.insert(e.ip);
    EXPECT_LE(build_cocontext_edges(events, {}, 1'000'000).size(), events.size() - contexts.size());
  }
}

TEST(CoContext, MaterializeAndFilter) {
  auto g = register_schema(cocontext_schema());
  const std::vector<CoContextEdge> edges{{"a", "b", "shared_ip", "x", Timestamp{100000}, 10},
                                         {"a", "b", "shared_ip", "x", Timestamp{100000}, 100},
                                         {"c", "d", "shared_ip", "y", Timestamp{10}, 5}};
  EXPECT_EQ(materialize(g, edges), 3u);
  EXPECT_EQ(edge_strength(g, "shared_ip", "a", "b"), 2u);
  EXPECT_EQ(edge_strength(g, "shared_ip", "b", "a"), 2u);
  EXPECT_EQ(latest_edge_time(g, "shared_ip")->seconds, 100000);

  WindowConfig cfg{3600, 30, 1};
  const auto filter = filtered_view(cfg, Timestamp{100000});
  EXPECT_EQ(filter.max_delta, 30);
  EXPECT_EQ(filter.min_created_at.seconds, 100000 - 86400);
  const auto keep = edge_predicate(g, "shared_ip", filter);
  std::size_t kept = 0;
  for (EdgeId e : g.edges_of_type(g.require_edge_type("shared_ip"))) kept += keep(g, e);
  EXPECT_EQ(kept, 1u);  // the 100 s edge fails delta, the old one fails recency
}

TEST(WindowConfig, Validation) {
  EXPECT_NO_THROW((WindowConfig{3600, 30, 7}.validate()));
  EXPECT_THROW((WindowConfig{3600, 0, 7}.validate()), std::invalid_argument);
  EXPECT_THROW((WindowConfig{30, 3600, 7}.validate()), std::invalid_argument);
  EXPECT_THROW((WindowConfig{3600, 30, 0}.validate()), std::invalid_argument);
}

TEST(CoContext, LargerWindowComponentsContainSmaller) {
  std::mt19937_64 rng(15);
  for (int trial = 0; trial < 50; ++trial) {
    const auto events = random_stream(rng, 200, 5, 30);
    auto g = register_schema(cocontext_schema());
    materialize(g, build_cocontext_edges(events, {}, 3600));
    if (g.edge_count() == 0) continue;
    const Timestamp now = *latest_edge_time(g, "shared_ip");
    const auto small = undirected_cc(g, "shared_ip", edge_predicate(g, "shared_ip", filtered_view({3600, 10, 7}, now)));
    const auto large = undirected_cc(g, "shared_ip", edge_predicate(g, "shared_ip", filtered_view({3600, 60, 7}, now)));
    for (const auto& [label, members] : small.groups()) {
      const auto big = large.label(members.front());
      ASSERT_TRUE(big.has_value());
      for (VertexId v : members) EXPECT_EQ(large.label(v), big);
    }
  }
}
