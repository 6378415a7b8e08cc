// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include "mdsd/config.hpp"
#include "mdsd/error.hpp"

using namespace mdsd;

TEST(Config, ParsesTypedValues) {
  const auto c = Config::parse(
      "# comment\n"
      "run.seed = 42\n"
      "network.frequency = 1.5e12  # trailing comment\n"
      "run.write_grids = false\n"
      "interp.methods = linear, idw ,kriging\n"
      "area.offset = -3\n");
  EXPECT_EQ(c.get_uint("run.seed", 0), 42u);
  EXPECT_DOUBLE_EQ(c.get_double("network.frequency", 0), 1.5e12);
  EXPECT_FALSE(c.get_bool("run.write_grids", true));
  EXPECT_EQ(c.get_list("interp.methods", {}), (std::vector<std::string>{"linear", "idw", "kriging"}));
  EXPECT_EQ(c.get_int("area.offset", 0), -3);
  EXPECT_EQ(c.get_string("run.output", "out"), "out");
  EXPECT_NO_THROW(c.reject_unused());
}

TEST(Config, RejectsMalformedInput) {
  try {
    Config::parse("run.seed = 1\njunk line\n");
    FAIL();
  } catch (const ConfigError& e) {
    EXPECT_NE(std::string(e.what()).find("line 2"), std::string::npos);
  }
  EXPECT_THROW(Config::parse("seed = 1\n"), ConfigError);
  EXPECT_THROW(Config::parse("run.seed = 1\nrun.seed = 2\n"), ConfigError);
  const auto c = Config::parse("run.seed = abc\nrun.flag = maybe\nrun.n = -1\n");
  EXPECT_THROW(c.get_double("run.seed", 0), ConfigError);
  EXPECT_THROW(c.get_bool("run.flag", false), ConfigError);
  EXPECT_THROW(c.get_uint("run.n", 0), ConfigError);
  EXPECT_THROW(Config::load("/nonexistent/mdsd.cfg"), ConfigError);
}

TEST(Config, UnusedKeysAreReported) {
  const auto c = Config::parse("run.seed = 1\nrun.sede = 2\n");
  c.get_uint("run.seed", 0);
  try {
    c.reject_unused();
    FAIL();
  } catch (const ConfigError& e) {
    EXPECT_NE(std::string(e.what()).find("run.sede"), std::string::npos);
  }
}

TEST(Config, CanonicalTextRoundTrips) {
  auto c = Config::parse("b.y = 2\na.x = hello world\n");
  c.set("c.z", "3");
  const auto text = c.to_text();
  EXPECT_EQ(Config::parse(text).entries(), c.entries());
  EXPECT_LT(text.find("a.x"), text.find("b.y"));
}
