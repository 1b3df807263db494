#include <gtest/gtest.h>

#include <sstream>

#include "fraudcc/graph.hpp"
#include "fraudcc/schema.hpp"

using namespace fraudcc;

namespace {

VertexRef account(std::string k) { return {"Account", std::move(k)}; }

PropertyGraph campaign_graph() { return register_schema(incentive_campaign_schema()); }

}  // namespace

TEST(Schema, IncentiveCampaignHasSevenTypes) {
  const auto s = incentive_campaign_schema();
  EXPECT_EQ(s.vertex_types.size(), 3u);
  EXPECT_EQ(s.edge_types.size(), 4u);
  EXPECT_EQ(s.type_count(), 7u);
  EXPECT_NO_THROW(register_schema(s));
}

TEST(Schema, VertexOnlyIsValid) {
  GraphSchema s{"v", {{"Account", {}}}, {}, {}};
  auto g = register_schema(s);
  EXPECT_EQ(g.vertex_count(), 0u);
}

TEST(Schema, RejectsDanglingEdgeEndpoint) {
  GraphSchema s{"bad", {{"Account", {}}}, {{"invite", "Account", "Ghost", true, {}}}, {}};
  EXPECT_THROW(register_schema(s), SchemaError);
}

TEST(Schema, RejectsDuplicateNames) {
  GraphSchema s{"dup", {{"Account", {}}, {"Account", {}}}, {}, {}};
  EXPECT_THROW(register_schema(s), SchemaError);
  GraphSchema e{"dup", {{"Account", {}}}, {{"x", "Account", "Account", true, {}}, {"x", "Account", "Account", true, {}}}, {}};
  EXPECT_THROW(register_schema(e), SchemaError);
}

TEST(Graph, UpsertIsIdempotent) {
  auto g = campaign_graph();
  g.upsert_vertex({account("13900000001"), {}});
  g.upsert_vertex({account("13900000001"), {}});
  EXPECT_EQ(g.vertex_count(g.require_vertex_type("Account")), 1u);
}

TEST(Graph, AttributeRoundTrip) {
  auto g = campaign_graph();
  const auto reg = *parse_timestamp("2020-11-20T08:30:00Z");
  g.upsert_vertex({account("p1"), {{"reg_time", reg}, {"phone", std::string("p1")}}});
  const auto v = *g.find_vertex("Account", "p1");
  ASSERT_NE(g.vertex_attribute(v, "reg_time"), nullptr);
  EXPECT_EQ(std::get<Timestamp>(*g.vertex_attribute(v, "reg_time")), reg);
  EXPECT_EQ(std::get<std::string>(*g.vertex_attribute(v, "phone")), "p1");
}

TEST(Graph, LastWriterWinsOnAttributes) {
  auto g = campaign_graph();
  g.upsert_vertex({account("p1"), {{"reg_time", Timestamp{100}}}});
  g.upsert_vertex({account("p1"), {{"reg_time", Timestamp{200}}}});
  const auto v = *g.find_vertex("Account", "p1");
  EXPECT_EQ(std::get<Timestamp>(*g.vertex_attribute(v, "reg_time")).seconds, 200);
}

TEST(Graph, KindMismatchRejected) {
  auto g = campaign_graph();
  EXPECT_THROW(g.upsert_vertex({{"Order", "o1"}, {{"order_date", std::string("yesterday")}}}), SchemaError);
  EXPECT_THROW(g.upsert_vertex({{"Ghost", "x"}, {}}), SchemaError);
  EXPECT_THROW(g.upsert_vertex({account("p"), {{"nope", std::string("x")}}}), SchemaError);
  EXPECT_EQ(g.vertex_count(), 0u);
}

TEST(Graph, DirectedAdjacency) {
  auto g = campaign_graph();
  g.insert_edge({"invite", account("a"), account("b"), {}});
  const auto a = *g.find_vertex("Account", "a");
  const auto b = *g.find_vertex("Account", "b");
  const auto invite = g.require_edge_type("invite");
  EXPECT_EQ(g.neighbors(a, invite, Direction::Out), std::vector<VertexId>{b});
  EXPECT_EQ(g.neighbors(b, invite, Direction::In), std::vector<VertexId>{a});
  EXPECT_TRUE(g.neighbors(a, invite, Direction::In).empty());
  EXPECT_EQ(g.degree(account("a"), "invite", Direction::Out), 1u);
  EXPECT_EQ(g.degree(account("a"), "invite", Direction::In), 0u);
  EXPECT_EQ(g.degree(account("b"), "invite", Direction::Any), 1u);
}

TEST(Graph, UndirectedSymmetry) {
  auto g = campaign_graph();
  g.insert_edge({"use_imei", account("a"), {"IMEI", "d"}, {}});
  const auto a = *g.find_vertex("Account", "a");
  const auto d = *g.find_vertex("IMEI", "d");
  const auto t = g.require_edge_type("use_imei");
  EXPECT_EQ(g.neighbors(d, t, Direction::Any), std::vector<VertexId>{a});
  EXPECT_EQ(g.neighbors(d, t, Direction::Out), std::vector<VertexId>{a});
  EXPECT_EQ(g.neighbors(a, t, Direction::In), std::vector<VertexId>{d});
  EXPECT_EQ(g.degree({"IMEI", "d"}, "use_imei", Direction::In), 1u);
}

TEST(Graph, ParallelEdgesAreDistinct) {
  auto g = register_schema(cocontext_schema());
  const auto e1 = g.insert_edge({"shared_ip", account("a"), account("b"),
                                 {{"created_at", Timestamp{100}}, {"delta", std::int64_t{3}}}});
  const auto e2 = g.insert_edge({"shared_ip", account("a"), account("b"),
                                 {{"created_at", Timestamp{200}}, {"delta", std::int64_t{5}}}});
  EXPECT_NE(e1, e2);
  EXPECT_EQ(g.edge_count(), 2u);
  EXPECT_EQ(std::get<Timestamp>(*g.edge_attribute(e2, "created_at")).seconds, 200);
  EXPECT_EQ(g.degree(account("a"), "shared_ip", Direction::Any), 2u);
}

TEST(Graph, EdgeEndpointTypesChecked) {
  auto g = campaign_graph();
  EXPECT_THROW(g.insert_edge({"invite", account("a"), {"IMEI", "d"}, {}}), SchemaError);
  EXPECT_THROW(g.insert_edge({"nope", account("a"), account("b"), {}}), SchemaError);
  EXPECT_EQ(g.vertex_count(), 0u);
}

TEST(Graph, DegreeOfUnknownVertexThrows) {
  auto g = campaign_graph();
  EXPECT_THROW(g.degree(account("ghost"), "invite", Direction::Out), UnknownVertex);
}

TEST(Graph, AliasResolvesToOrder) {
  auto g = campaign_graph();
  g.upsert_vertex({{"BonusOrder", "o1"}, {}});
  EXPECT_TRUE(g.find_vertex("Order", "o1").has_value());
  EXPECT_TRUE(g.find_vertex("BonusOrder", "o1").has_value());
}

TEST(Graph, SnapshotIsInsertionOrderIndependent) {
  auto g1 = campaign_graph();
  auto g2 = campaign_graph();
  g1.insert_edge({"invite", account("a"), account("b"), {}});
  g1.insert_edge({"use_imei", account("b"), {"IMEI", "d"}, {}});
  g2.insert_edge({"use_imei", account("b"), {"IMEI", "d"}, {}});
  g2.insert_edge({"invite", account("a"), account("b"), {}});
  std::ostringstream s1, s2;
  export_snapshot(g1, s1);
  export_snapshot(g2, s2);
  EXPECT_EQ(s1.str(), s2.str());
  EXPECT_FALSE(s1.str().empty());
}

TEST(SharedGraph, WriteBumpsVersion) {
  SharedGraph sg(campaign_graph());
  const auto v0 = sg.version();
  sg.write([](PropertyGraph& g) { g.upsert_vertex({account("x"), {}}); });
  EXPECT_EQ(sg.version(), v0 + 1);
  EXPECT_EQ(sg.read([](const PropertyGraph& g) { return g.vertex_count(); }), 1u);
}

TEST(Time, ParsesIsoAndEpoch) {
  EXPECT_EQ(parse_timestamp("1970-01-01T00:00:10Z")->seconds, 10);
  EXPECT_EQ(parse_timestamp("1970-01-01 00:00:10")->seconds, 10);
  EXPECT_EQ(parse_timestamp("1970-01-01T01:00:00+01:00")->seconds, 0);
  EXPECT_EQ(parse_timestamp("1970-01-02")->seconds, 86400);
  EXPECT_EQ(parse_timestamp("1605830400")->seconds, 1605830400);
  EXPECT_EQ(parse_timestamp("2020-11-20T00:00:00.750Z")->seconds, 1605830400);
  EXPECT_FALSE(parse_timestamp("yesterday"));
  EXPECT_FALSE(parse_timestamp("2020-13-01"));
  EXPECT_FALSE(parse_timestamp(""));
  EXPECT_EQ(format_iso8601(Timestamp{1605830400}), "2020-11-20T00:00:00Z");
}
