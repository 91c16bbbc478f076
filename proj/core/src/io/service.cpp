#include "sortcell/io/service.hpp"

#include <atomic>
#include <chrono>
#include <condition_variable>
#include <deque>
#include <mutex>
#include <thread>

#include <httplib.h>

#include "sortcell/errors.hpp"
#include "sortcell/io/commands.hpp"
#include "sortcell/io/snapshot.hpp"
#include "sortcell/sim/engine.hpp"
#include "sortcell/tp/interpreter.hpp"

namespace sortcell::io {

using nlohmann::ordered_json;
using Clock = std::chrono::steady_clock;

struct Service::Impl {
  sim::Scenario scenario;
  ServiceOptions options;
  httplib::Server server;
  int port = 0;

  std::atomic<bool> stopping{false};
  std::thread engine_thread;
  std::thread http_thread;
  std::mutex join_mu;

  // Command queue into the engine thread.
  std::mutex cmd_mu;
  std::deque<sim::Command> commands;

  // Published snapshots.
  mutable std::mutex snap_mu;
  std::condition_variable snap_cv;
  std::shared_ptr<const ordered_json> snap;
  std::uint64_t version = 0;

  Impl(sim::Scenario s, ServiceOptions o) : scenario(std::move(s)), options(std::move(o)) {}

  void publish(ordered_json j) {
    {
      std::lock_guard lock(snap_mu);
      snap = std::make_shared<const ordered_json>(std::move(j));
      ++version;
    }
    snap_cv.notify_all();
  }

  std::pair<std::shared_ptr<const ordered_json>, std::uint64_t> wait_newer(std::uint64_t seen) {
    std::unique_lock lock(snap_mu);
    snap_cv.wait_for(lock, std::chrono::milliseconds(500), [&] { return version > seen || stopping.load(); });
    return {snap, version};
  }

  void engine_loop(sim::Engine engine) {
    const auto period = std::chrono::duration_cast<Clock::duration>(std::chrono::duration<double>(1.0 / options.stream_hz));
    const std::int64_t end_us = tp::seconds_to_us(scenario.duration_s);
    const auto t0 = Clock::now();
    auto next = t0;
    while (!stopping.load()) {
      next += period;
      std::deque<sim::Command> batch;
      {
        std::lock_guard lock(cmd_mu);
        batch.swap(commands);
      }
      for (const auto& c : batch) engine.submit(c);

      if (!engine.deadlocked() && engine.now_us() < end_us) {
        std::int64_t target = end_us;
        if (options.throttle) {
          const double wall = std::chrono::duration<double>(next - t0).count();
          target = std::min(end_us, static_cast<std::int64_t>(wall * options.speed * 1e6));
        } else {
          target = std::min(end_us, engine.now_us() + 1'000'000);
        }
        engine.step(target);
      }
      publish(snapshot(engine));
      if (options.throttle || engine.deadlocked() || engine.now_us() >= end_us)
        std::this_thread::sleep_until(next);
      else
        next = Clock::now();
    }
  }

  void routes() {
    server.Get("/api/snapshot", [this](const httplib::Request&, httplib::Response& res) {
      std::shared_ptr<const ordered_json> s;
      {
        std::lock_guard lock(snap_mu);
        s = snap;
      }
      res.set_content(s->dump(), "application/json");
    });

    server.Get("/api/schema", [](const httplib::Request&, httplib::Response& res) {
      res.set_content(protocol_schema_json().dump(2), "application/json");
    });

    server.Post("/api/command", [this](const httplib::Request& req, httplib::Response& res) {
      try {
        const sim::Command c = parse_command_text(req.body);
        sim::check_command(c, scenario.params);
        {
          std::lock_guard lock(cmd_mu);
          commands.push_back(c);
        }
        res.status = 202;
        res.set_content(ordered_json{{"accepted", to_json(c)}}.dump(), "application/json");
      } catch (const CommandError& e) {
        res.status = 400;
        res.set_content(error_json(e.code(), e.what()).dump(), "application/json");
      }
    });

    server.Get("/api/stream", [this](const httplib::Request&, httplib::Response& res) {
      res.set_header("Cache-Control", "no-cache");
      auto last = std::make_shared<std::shared_ptr<const ordered_json>>();
      auto seen = std::make_shared<std::uint64_t>(0);
      res.set_chunked_content_provider("text/event-stream", [this, last, seen](std::size_t, httplib::DataSink& sink) {
        if (stopping.load()) return false;
        auto [s, v] = wait_newer(*seen);
        if (stopping.load()) return false;
        if (v == *seen || !s) return true;
        *seen = v;
        std::string frame;
        if (!*last) {
          frame = "event: snapshot\ndata: " + s->dump() + "\n\n";
        } else {
          const auto patch = ordered_json::diff(**last, *s);
          if (patch.empty()) return true;
          frame = "id: " + std::to_string(v) + "\nevent: patch\ndata: " + patch.dump() + "\n\n";
        }
        *last = s;
        return sink.write(frame.data(), frame.size());
      });
    });
  }
};

Service::Service(sim::Scenario scenario, ServiceOptions options)
    : impl_(std::make_unique<Impl>(std::move(scenario), std::move(options))) {
  if (!(impl_->options.speed > 0.0)) throw Error("speed must be positive");
  if (!(impl_->options.stream_hz > 0.0)) throw Error("stream rate must be positive");
}

Service::~Service() { stop(); }

int Service::start() {
  auto& m = *impl_;
  sim::Engine engine(m.scenario);
  m.publish(snapshot(engine));
  m.routes();
  if (m.options.port == 0) {
    m.port = m.server.bind_to_any_port(m.options.host);
    if (m.port < 0) throw Error("cannot bind " + m.options.host);
  } else {
    if (!m.server.bind_to_port(m.options.host, m.options.port))
      throw Error("cannot bind " + m.options.host + ":" + std::to_string(m.options.port));
    m.port = m.options.port;
  }
  m.engine_thread = std::thread([&m, e = std::move(engine)]() mutable { m.engine_loop(std::move(e)); });
  m.http_thread = std::thread([&m] { m.server.listen_after_bind(); });
  return m.port;
}

void Service::stop() {
  auto& m = *impl_;
  m.stopping.store(true);
  m.snap_cv.notify_all();
  m.server.stop();
  std::lock_guard lock(m.join_mu);
  if (m.http_thread.joinable()) m.http_thread.join();
  if (m.engine_thread.joinable()) m.engine_thread.join();
}

bool Service::running() const noexcept { return !impl_->stopping.load(); }

int Service::port() const noexcept { return impl_->port; }

std::shared_ptr<const ordered_json> Service::latest() const {
  std::lock_guard lock(impl_->snap_mu);
  return impl_->snap;
}

}  // namespace sortcell::io
