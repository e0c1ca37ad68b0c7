/*
 * Copyright (C) 2026 The v2i-testbed Authors.
 *
 * Licensed under the Apache License, Version 2.0 (the "License"); you may not
 * use this file except in compliance with the License. You may obtain a copy of
 * the License at
 *
 * http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS, WITHOUT
 * WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied. See the
 * License for the specific language governing permissions and limitations under
 * the License.
 */

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"
#include "v2i/v2i.hpp"

using namespace v2i;
using namespace v2i::harness;

namespace {

ScenarioConfig load_scenario(const std::string& ref) {
  if (std::filesystem::is_regular_file(ref)) return scenario_from_json(read_file(ref));
  return builtin_scenario(ref);
}

TransportKind transport_from_string(const std::string& s) {
  if (s == "inproc") return TransportKind::INPROC;
  if (s == "udp") return TransportKind::UDP;
  throw ConfigError("unknown transport '" + s + "'");
}

int cmd_run(const std::string& ref, const std::string& transport, const std::string& out,
            const std::string& format, std::uint64_t seed, double loss, int port) {
  const auto cfg = load_scenario(ref);
  RunOptions opt;
  if (!transport.empty()) opt.transport = transport_from_string(transport);
  opt.seed = seed;
  opt.loss = loss;
  if (port >= 0) opt.udp.port = static_cast<std::uint16_t>(port);
  const auto res = run_scenario(cfg, opt);
  if (!out.empty()) {
    export_log(res.log, format == "plotdata" ? ExportFormat::PLOTDATA : ExportFormat::CSV, out);
  } else {
    std::cout << (format == "plotdata" ? to_plotdata(res.log) : to_csv(res.log));
  }
  std::cerr << format_events(extract_events(res.log, cfg.application));
  return 0;
}

int cmd_codec(const std::string& mode, const std::string& file) {
  const std::string text = read_file(file);
  if (mode == "encode") {
    // Accepts any JSON layout and prints the canonical bytes.
    std::cout << encode(decode(nlohmann::json::parse(text).dump())) << "\n";
    return 0;
  }
  const auto msg = decode(text);
  std::cout << nlohmann::json::parse(encode(msg)).dump(2) << "\n";
  return 0;
}

int cmd_serve(const std::string& ref, int port, bool lockstep, const std::string& out) {
  const auto cfg = load_scenario(ref);
  ServeOptions opt;
  opt.port = static_cast<std::uint16_t>(port);
  opt.lockstep = lockstep;
  opt.on_listening = [&](std::uint16_t p) {
    std::cerr << "serving " << cfg.name << " on 127.0.0.1:" << p << ", waiting for a console\n";
  };
  const auto res = serve(cfg, opt);
  if (!out.empty()) export_log(res.log, ExportFormat::CSV, out);
  std::cerr << format_events(extract_events(res.log, cfg.application));
  return 0;
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"V2I intersection testbed: RLVW and GLOSA in the loop"};
  app.require_subcommand(1);

  std::string ref, transport, out, format = "csv";
  std::uint64_t seed = 0;
  double loss = 0.0;
  int udp_port = -1;
  auto* run = app.add_subcommand("run", "run a scenario with its scripted driver");
  run->add_option("scenario", ref, "builtin scenario name or scenario file")->required();
  run->add_option("--transport", transport, "inproc or udp (default: scenario's choice)")
      ->check(CLI::IsMember({"inproc", "udp"}));
  run->add_option("--out", out, "write the log here instead of stdout");
  run->add_option("--format", format, "log format")->check(CLI::IsMember({"csv", "plotdata"}));
  run->add_option("--seed", seed, "seed for injected loss");
  run->add_option("--loss", loss, "probability of dropping each message")->check(CLI::Range(0.0, 1.0));
  run->add_option("--udp-port", udp_port, "UDP port (0 = any free port)")->check(CLI::Range(0, 65535));

  auto* scenarios = app.add_subcommand("scenarios", "builtin scenarios");
  scenarios->require_subcommand(1);
  auto* list = scenarios->add_subcommand("list", "list builtin scenarios");
  std::string show_name;
  auto* show = scenarios->add_subcommand("show", "print a builtin scenario as a scenario file");
  show->add_option("name", show_name)->required();

  std::string codec_mode, codec_file;
  auto* codec = app.add_subcommand("codec", "encode or decode a SPaT/MAP message");
  codec->add_option("mode", codec_mode)->required()->check(CLI::IsMember({"encode", "decode"}));
  codec->add_option("file", codec_file)->required()->check(CLI::ExistingFile);

  std::string serve_ref, serve_out;
  int serve_port = 7070;
  bool lockstep = false;
  auto* srv = app.add_subcommand("serve", "drive a scenario from a console over TCP");
  srv->add_option("scenario", serve_ref, "scenario file or builtin name")->required();
  srv->add_option("--port", serve_port, "TCP port")->check(CLI::Range(0, 65535));
  srv->add_flag("--lockstep", lockstep, "advance one tick per control message");
  srv->add_option("--out", serve_out, "write the CSV log here when the run ends");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*run) return cmd_run(ref, transport, out, format, seed, loss, udp_port);
    if (*list) {
      for (const auto& s : builtin_scenarios()) {
        std::printf("%-8s %-5s %5.1f s\n", s.name.c_str(), to_string(s.application), s.duration);
      }
      return 0;
    }
    if (*show) {
      std::cout << scenario_to_json(builtin_scenario(show_name)) << "\n";
      return 0;
    }
    if (*codec) return cmd_codec(codec_mode, codec_file);
    if (*srv) return cmd_serve(serve_ref, serve_port, lockstep, serve_out);
  } catch (const v2i::Error& e) {
    std::cerr << e.what() << "\n";
    return 2;
  } catch (const nlohmann::json::exception& e) {
    std::cerr << "ParseError: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
