#include <gtest/gtest.h>

#include <chrono>
#include <thread>

#include "httplib.h"
#include "sortcell/errors.hpp"
#include "sortcell/io/service.hpp"
#include "support/fixtures.hpp"

using namespace sortcell;
using namespace std::chrono_literals;
using nlohmann::json;

namespace {

io::ServiceOptions fast() {
  io::ServiceOptions o;
  o.port = 0;
  o.speed = 20.0;
  o.stream_hz = 50.0;
  return o;
}

}  // namespace

TEST(Service, RejectsBadOptions) {
  auto o = fast();
  o.speed = 0;
  EXPECT_THROW({ io::Service svc(sortcell::testing::five_part_scenario(), o); }, Error);
  o = fast();
  o.stream_hz = -1;
  EXPECT_THROW({ io::Service svc(sortcell::testing::five_part_scenario(), o); }, Error);
}

TEST(Service, HttpEndpoints) {
  io::Service svc(sortcell::testing::five_part_scenario(), fast());
  const int port = svc.start();
  ASSERT_GT(port, 0);
  EXPECT_TRUE(svc.running());
  httplib::Client cli("127.0.0.1", port);
  cli.set_read_timeout(5, 0);

  auto r = cli.Get("/api/snapshot");
  ASSERT_TRUE(r);
  EXPECT_EQ(r->status, 200);
  const auto snap = json::parse(r->body);
  EXPECT_EQ(snap["schema_version"], 1);
  EXPECT_TRUE(snap.contains("assemblies"));

  r = cli.Get("/api/schema");
  ASSERT_TRUE(r);
  EXPECT_EQ(r->status, 200);
  EXPECT_EQ(json::parse(r->body)["protocol_version"], 1);

  r = cli.Post("/api/command", R"({"command":"set_override","enabled":true})", "application/json");
  ASSERT_TRUE(r);
  EXPECT_EQ(r->status, 202);

  r = cli.Post("/api/command", R"({"command":"dance"})", "application/json");
  ASSERT_TRUE(r);
  EXPECT_EQ(r->status, 400);
  EXPECT_EQ(json::parse(r->body)["error"]["code"], "unknown_command");

  r = cli.Post("/api/command", R"({"command":"spawn_part","color":"red","y_offset":900})", "application/json");
  ASSERT_TRUE(r);
  EXPECT_EQ(r->status, 400);
  EXPECT_EQ(json::parse(r->body)["error"]["code"], "invalid_argument");

  // The override reaches the PLC within a few published frames.
  bool seen = false;
  for (int i = 0; i < 100 && !seen; ++i) {
    std::this_thread::sleep_for(20ms);
    seen = (*svc.latest())["hmi"]["override"].get<bool>();
  }
  EXPECT_TRUE(seen);

  svc.stop();
  EXPECT_FALSE(svc.running());
  svc.stop();
}

TEST(Service, StreamStartsWithFullSnapshot) {
  io::Service svc(sortcell::testing::five_part_scenario(), fast());
  const int port = svc.start();
  httplib::Client cli("127.0.0.1", port);
  cli.set_read_timeout(5, 0);
  std::string buf;
  int frames = 0;
  auto res = cli.Get("/api/stream", [&](const char* data, std::size_t n) {
    buf.append(data, n);
    frames = 0;
    for (std::size_t p = 0; (p = buf.find("\n\n", p)) != std::string::npos; p += 2) ++frames;
    return frames < 3;
  });
  ASSERT_GE(frames, 3);
  EXPECT_EQ(buf.rfind("event: snapshot\ndata: ", 0), 0u);
  const auto first_end = buf.find("\n\n");
  const auto first = json::parse(buf.substr(22, first_end - 22));
  EXPECT_EQ(first["schema_version"], 1);
  const auto second = buf.substr(first_end + 2);
  EXPECT_NE(second.find("event: patch\n"), std::string::npos);
  const auto data = second.find("data: ");
  const auto patch = json::parse(second.substr(data + 6, second.find("\n\n") - data - 6));
  EXPECT_TRUE(patch.is_array());
  svc.stop();
}
