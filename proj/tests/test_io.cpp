#include <smoothperron/io.hpp>

#include <gtest/gtest.h>

#include <cmath>
#include <limits>

using namespace smoothperron::io;

TEST(Io, SeventeenDigits) {
    EXPECT_EQ(format_double(0.1), "0.10000000000000001");
    EXPECT_EQ(format_double(3.0), "3");
    EXPECT_EQ(format_double(std::numeric_limits<double>::quiet_NaN()), "null");
    EXPECT_EQ(format_double(-std::numeric_limits<double>::infinity()), "-1e999");
    Json j;
    j["a"] = 0.1;
    j["b"] = {1, 2.5};
    j["c"] = "s";
    EXPECT_EQ(dump17(j, 0), R"({"a":0.10000000000000001,"b":[1,2.5],"c":"s"})");
    // every double survives a text round trip
    const double v = 1.0 / 3.0;
    Json k;
    k["v"] = v;
    EXPECT_EQ(Json::parse(dump17(k)).at("v").get<double>(), v);
}

TEST(Io, ComplexAsObject) {
    const auto j = complex_json({1.5, -2.0});
    EXPECT_EQ(j.at("re").get<double>(), 1.5);
    EXPECT_EQ(j.at("im").get<double>(), -2.0);
}

TEST(Io, ManifestRoundTrip) {
    RunManifest m;
    m.subcommand = "perron verify";
    m.parameters = {{"series", "eta"}, {"x", "100.5"}, {"T", "25"}};
    m.tool_version = "0.1.0";
    m.outputs = {"stdout", "rows.csv"};
    m.wall_time = 0.123456789012345;
    const auto back = RunManifest::from_json(Json::parse(dump17(m.to_json())));
    EXPECT_EQ(back, m);
    m.outputs.clear();
    EXPECT_FALSE(back == m);
}
