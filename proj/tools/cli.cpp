#include "cli.hpp"

#include <CLI11.hpp>
#include <httplib.h>
#include <signal.h>

#include <atomic>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iterator>
#include <sstream>
#include <thread>

#include "sdbotics/controller/program.hpp"
#include "sdbotics/controller/topology.hpp"
#include "sdbotics/error.hpp"
#include "sdbotics/fabric.hpp"
#include "sdbotics/net/controller_service.hpp"
#include "sdbotics/net/fleet.hpp"
#include "sdbotics/northbound/views.hpp"
#include "sdbotics/openbots/codec.hpp"
#include "sdbotics/openbots/dump.hpp"
#include "sdbotics/sim/world_file.hpp"

namespace sdbotics::cli {

namespace {

using nlohmann::json;

std::string env_or(const char* name, const std::string& fallback) {
  const char* v = std::getenv(name);
  return (v != nullptr && *v != '\0') ? std::string(v) : fallback;
}

int env_port(const char* name, int fallback) {
  const char* v = std::getenv(name);
  if (v == nullptr || *v == '\0') return fallback;
  try {
    return std::stoi(v);
  } catch (const std::exception&) {
    return fallback;
  }
}

std::string default_controller_url() {
  return env_or("SDBOTICS_CONTROLLER_URL",
                "http://127.0.0.1:" + std::to_string(env_port("SDBOTICS_HTTP_PORT", 8080)));
}

struct HttpResult {
  bool connected = false;
  int status = 0;
  std::string body;
};

HttpResult http_call(const std::string& url, const std::string& method, const std::string& path,
                     const std::string& body = {}) {
  httplib::Client client(url);
  client.set_connection_timeout(3);
  client.set_read_timeout(10);
  httplib::Result res = method == "POST" ? client.Post(path, body, "application/json") : client.Get(path);
  if (!res) return {};
  return {true, res->status, res->body};
}

sigset_t stop_signals() {
  sigset_t set;
  sigemptyset(&set);
  sigaddset(&set, SIGINT);
  sigaddset(&set, SIGTERM);
  sigaddset(&set, SIGUSR1);
  return set;
}

// Must run before any thread is spawned so every thread inherits the mask.
void block_stop_signals() {
  const sigset_t set = stop_signals();
  pthread_sigmask(SIG_BLOCK, &set, nullptr);
}

std::thread signal_waiter(std::function<void()> on_signal, std::atomic<bool>& finished) {
  return std::thread([on_signal = std::move(on_signal), &finished] {
    const sigset_t set = stop_signals();
    int sig = 0;
    sigwait(&set, &sig);
    if (!finished) on_signal();
  });
}

void wake_signal_waiter() { ::kill(::getpid(), SIGUSR1); }

int report_http(const HttpResult& r, const std::string& what, bool as_json, std::ostream& out,
                std::ostream& err, const std::function<void(const json&)>& human) {
  if (!r.connected) {
    err << "error: cannot reach controller for " << what << "\n";
    return kConnectivity;
  }
  auto body = json::parse(r.body.empty() ? "null" : r.body, nullptr, false);
  if (r.status < 200 || r.status >= 300) {
    if (as_json) out << body.dump() << "\n";
    err << "error: " << what << " failed with HTTP " << r.status;
    if (body.is_object() && body.contains("error")) {
      err << " " << body["error"].get<std::string>() << ": " << body.value("message", "");
    }
    err << "\n";
    return kValidation;
  }
  if (as_json) {
    out << body.dump() << "\n";
  } else {
    human(body);
  }
  return kOk;
}

void print_report(const json& report, std::ostream& out) {
  out << "dispatched " << report.value("packets", 0) << " packet(s) to "
      << report.value("target", std::string()) << "\n";
  for (const auto& [id, r] : report["robots"].items()) {
    out << "  robot " << id << ": " << r["packets"] << " packet(s), first sequence "
        << r["first_sequence"] << ", delivered " << r["delivered"] << ", dropped " << r["dropped"]
        << "\n";
  }
}

std::optional<json> read_json_file(const std::string& path, std::ostream& err) {
  std::ifstream in(path);
  if (!in) {
    err << "error: file not found: " << path << "\n";
    return std::nullopt;
  }
  auto j = json::parse(in, nullptr, false);
  if (j.is_discarded()) {
    err << "error: " << path << " is not valid JSON\n";
    return std::nullopt;
  }
  return j;
}

controller::ControllerConfig config_from(const std::string& mode_text, const std::string& world_path,
                                         std::uint32_t hub, bool hash) {
  controller::ControllerConfig cfg;
  auto mode = controller::parse_mode(mode_text);
  if (!mode) throw Error("VALIDATION_FAILED", "--mode must be centralized or cloud");
  cfg.mode = *mode;
  cfg.hash_trailer = hash;
  if (!world_path.empty()) {
    auto w = sim::load_world(world_path);
    cfg.links = w.links;
    if (hub == 0 && !w.robots.empty()) hub = w.robots.begin()->first;
  }
  cfg.hub_robot = hub == 0 ? 1 : hub;
  return cfg;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"SDBotics controller, simulated fleet and operator tools"};
  app.require_subcommand(1);

  std::string url = default_controller_url();
  bool as_json = false;

  // controller
  auto* c_cmd = app.add_subcommand("controller", "Run the controller service");
  std::string c_mode = "cloud", c_world, c_listen;
  int c_bots = env_port("SDBOTICS_BOTS_PORT", net::kDefaultBotsPort);
  int c_http = env_port("SDBOTICS_HTTP_PORT", 8080);
  int c_tick = 50;
  std::uint32_t c_hub = 0;
  bool c_hash = false;
  c_cmd->add_option("--mode", c_mode, "centralized | cloud")->check(CLI::IsMember({"centralized", "cloud"}));
  c_cmd->add_option("--bots-port", c_bots, "OpenBots TCP port");
  c_cmd->add_option("--http-port", c_http, "REST port");
  c_cmd->add_option("--listen", c_listen, "listen address (default by mode)");
  c_cmd->add_option("--world", c_world, "world file supplying topology links");
  c_cmd->add_option("--hub", c_hub, "hub robot id in centralized mode");
  c_cmd->add_option("--tick-ms", c_tick, "controller clock period");
  c_cmd->add_flag("--hash", c_hash, "append SHA-256 trailers to outgoing packets");

  // sim
  auto* s_cmd = app.add_subcommand("sim", "Run a simulated fleet against a controller");
  std::string s_world, s_controller = "127.0.0.1:" + std::to_string(env_port("SDBOTICS_BOTS_PORT", net::kDefaultBotsPort));
  std::string s_trace;
  int s_tick = 50;
  std::uint64_t s_ticks = 0, s_seed = 0;
  bool s_hash = false;
  s_cmd->add_option("--world", s_world, "world file")->required();
  s_cmd->add_option("--controller", s_controller, "controller OpenBots host:port");
  s_cmd->add_option("--tick-ms", s_tick, "world clock period");
  s_cmd->add_option("--ticks", s_ticks, "stop after N ticks (0 = run until interrupted)");
  s_cmd->add_option("--trace", s_trace, "write the trajectory trace (JSON lines) here");
  s_cmd->add_option("--seed", s_seed, "world RNG seed");
  s_cmd->add_flag("--hash", s_hash, "append SHA-256 trailers to outgoing packets");

  // run
  auto* r_cmd = app.add_subcommand("run", "Submit a mission file");
  std::string r_file;
  r_cmd->add_option("mission", r_file, "mission JSON file")->required();
  r_cmd->add_option("--controller-url", url, "controller base URL");
  r_cmd->add_flag("--json", as_json, "print the JSON report on stdout");

  // queries
  std::map<std::string, CLI::App*> queries;
  for (const char* q : {"stats", "robots", "map", "groups"}) {
    auto* sub = app.add_subcommand(q, std::string("Show controller ") + q);
    sub->add_option("--controller-url", url, "controller base URL");
    sub->add_flag("--json", as_json, "print JSON on stdout");
    queries[q] = sub;
  }

  auto* p_cmd = app.add_subcommand("path", "Shortest communication path between two nodes");
  std::string p_src, p_dst;
  p_cmd->add_option("src", p_src, "source node (C or robot id)")->required();
  p_cmd->add_option("dst", p_dst, "destination node")->required();
  p_cmd->add_option("--controller-url", url, "controller base URL");
  p_cmd->add_flag("--json", as_json, "print JSON on stdout");

  auto* k_cmd = app.add_subcommand("packet", "OpenBots packet tools");
  k_cmd->require_subcommand(1);
  auto* k_dump = k_cmd->add_subcommand("dump", "Hexdump and decode a packet file");
  std::string k_file;
  k_dump->add_option("file", k_file, "raw packet file")->required();
  k_dump->add_flag("--json", as_json, "print decoded fields as JSON on stdout");

  auto* l_cmd = app.add_subcommand("local", "Run a mission in-process (controller + fleet)");
  std::string l_world, l_mission, l_trace, l_mode = "cloud";
  std::uint64_t l_max = 100, l_seed = 0;
  l_cmd->add_option("--world", l_world, "world file")->required();
  l_cmd->add_option("--mission", l_mission, "mission file")->required();
  l_cmd->add_option("--trace", l_trace, "write the trajectory trace here");
  l_cmd->add_option("--max-ticks", l_max, "tick budget");
  l_cmd->add_option("--mode", l_mode, "centralized | cloud")->check(CLI::IsMember({"centralized", "cloud"}));
  l_cmd->add_option("--seed", l_seed, "world RNG seed");
  l_cmd->add_flag("--json", as_json, "print the JSON summary on stdout");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    std::ostringstream o, e2;
    const int code = app.exit(e, o, e2);
    out << o.str();
    err << e2.str();
    return code == 0 ? kOk : kValidation;
  }

  try {
    if (*c_cmd) {
      block_stop_signals();
      net::ServiceOptions opts;
      opts.config = config_from(c_mode, c_world, c_hub, c_hash);
      opts.listen_host = c_listen;
      opts.bots_port = c_bots;
      opts.http_port = c_http;
      opts.tick_ms = c_tick;
      net::ControllerService service(opts);
      std::atomic<bool> finished{false};
      auto waiter = signal_waiter([&] { service.stop(); }, finished);
      try {
        service.start();
      } catch (const std::exception& e) {
        finished = true;
        wake_signal_waiter();
        waiter.join();
        err << "error: " << e.what() << "\n";
        return kConnectivity;
      }
      err << "controller (" << c_mode << ") OpenBots on " << service.listen_host() << ":"
          << service.bots_port() << ", REST on port " << service.http_port() << "\n";
      service.wait();
      finished = true;
      waiter.join();
      return kOk;
    }

    if (*s_cmd) {
      block_stop_signals();
      auto world = sim::load_world(s_world, s_seed);
      auto hp = net::parse_host_port(s_controller);
      if (!hp) {
        err << "error: --controller must be host:port\n";
        return kValidation;
      }
      net::FleetOptions fo;
      fo.controller_host = hp->host;
      fo.controller_port = hp->port;
      fo.tick_ms = s_tick;
      fo.hash_trailer = s_hash;
      net::FleetRunner fleet(std::move(world), fo);
      try {
        fleet.connect();
      } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kConnectivity;
      }
      std::ofstream trace_file;
      if (!s_trace.empty()) trace_file.open(s_trace);
      std::atomic<bool> stop{false}, finished{false};
      auto waiter = signal_waiter([&] { stop = true; }, finished);
      err << "fleet connected to " << s_controller << "\n";
      fleet.run([&](const sim::WorldState&) { return stop.load(); }, s_ticks,
                s_trace.empty() ? nullptr : &trace_file);
      finished = true;
      wake_signal_waiter();
      waiter.join();
      return kOk;
    }

    if (*r_cmd) {
      auto body = read_json_file(r_file, err);
      if (!body) return kValidation;
      auto res = http_call(url, "POST", "/api/v1/programs", body->dump());
      return report_http(res, "run", as_json, out, err, [&](const json& j) { print_report(j, out); });
    }

    for (const auto& [name, sub] : queries) {
      if (!*sub) continue;
      auto res = http_call(url, "GET", "/api/v1/" + name);
      return report_http(res, name, as_json, out, err, [&](const json& j) { out << j.dump(2) << "\n"; });
    }

    if (*p_cmd) {
      auto res = http_call(url, "GET", "/api/v1/path?src=" + p_src + "&dst=" + p_dst);
      return report_http(res, "path", as_json, out, err, [&](const json& j) {
        std::string line;
        for (const auto& n : j["path"]) line += (line.empty() ? "" : " -> ") + n.get<std::string>();
        out << line << " (cost " << j["cost"].dump() << ")\n";
      });
    }

    if (*k_dump) {
      std::ifstream in(k_file, std::ios::binary);
      if (!in) {
        err << "error: file not found: " << k_file << "\n";
        return kValidation;
      }
      openbots::Bytes bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
      if (!as_json) out << openbots::hexdump(bytes);
      try {
        auto fields = openbots::packet_fields(bytes);
        if (as_json) {
          out << fields.dump() << "\n";
        } else {
          for (const auto& [k, v] : fields.items()) out << std::setw(13) << std::left << k << v.dump() << "\n";
        }
        return kOk;
      } catch (const openbots::CodecError& e) {
        if (as_json) out << json{{"error", std::string(openbots::to_string(e.code()))}, {"message", e.what()}}.dump() << "\n";
        err << "error: " << e.what() << "\n";
        return kValidation;
      }
    }

    if (*l_cmd) {
      auto mission = read_json_file(l_mission, err);
      if (!mission) return kValidation;
      auto world = sim::load_world(l_world, l_seed);
      controller::ControllerConfig cfg = config_from(l_mode, l_world, 0, false);
      LocalFabric fabric(std::move(world), cfg);
      fabric.connect_all();
      auto res = fabric.request("POST", "/api/v1/programs", mission->dump());
      if (res.status != 202) {
        err << "error: mission rejected (HTTP " << res.status << "): " << res.body << "\n";
        return kValidation;
      }
      auto ticks = fabric.run_until_idle(l_max);
      if (!l_trace.empty()) {
        std::ofstream t(l_trace);
        for (const auto& line : fabric.trace()) t << line << "\n";
      }
      json mailbox = json::object();
      for (const auto& [id, _] : fabric.world().robots) {
        auto data = fabric.request("GET", "/api/v1/data/" + std::to_string(id));
        mailbox[std::to_string(id)] = json::parse(data.body);
      }
      json objects = json::object();
      for (const auto& [id, cell] : fabric.world().objects) objects[std::to_string(id)] = {cell.x, cell.y};
      json summary{{"report", json::parse(res.body)},
                   {"ticks", ticks ? json(*ticks) : json(nullptr)},
                   {"map", json::parse(fabric.request("GET", "/api/v1/map").body)},
                   {"objects", objects},
                   {"mailbox", mailbox}};
      if (as_json) {
        out << summary.dump() << "\n";
      } else {
        print_report(summary["report"], out);
        out << "finished in " << summary["ticks"].dump() << " tick(s)\n";
        out << "map: " << summary["map"].dump() << "\nobjects: " << objects.dump()
            << "\nmailbox: " << mailbox.dump() << "\n";
      }
      return ticks ? kOk : kValidation;
    }
  } catch (const Error& e) {
    err << "error: " << e.code() << ": " << e.what() << "\n";
    return kValidation;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kValidation;
  }
  return kOk;
}

}  // namespace sdbotics::cli
