#pragma once

#include <memory>
#include <string>

#include <nlohmann/json.hpp>

#include "sortcell/sim/scenario.hpp"

namespace sortcell::io {

struct ServiceOptions {
  std::string host = "127.0.0.1";
  int port = 8080;  // 0 picks a free port
  double speed = 1.0;
  double stream_hz = 10.0;
  /// Off: simulated time advances as fast as the engine runs.
  bool throttle = true;
};

/// Live session: one engine thread advancing simulated time against the wall
/// clock, plus an HTTP front end for snapshots, commands and a delta stream.
class Service {
 public:
  Service(sim::Scenario scenario, ServiceOptions options);
  ~Service();
  Service(const Service&) = delete;
  Service& operator=(const Service&) = delete;

  /// Binds the listening socket and starts both threads. Returns the port.
  /// Throws Error if the port cannot be bound.
  int start();
  /// Stops the server and joins both threads. Idempotent.
  void stop();
  bool running() const noexcept;

  int port() const noexcept;
  std::shared_ptr<const nlohmann::ordered_json> latest() const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace sortcell::io
