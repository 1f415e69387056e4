// Scripted child for protocol tests. Answers score = -(m - 5)^2 and
// misbehaves in the chosen way when the requested m equals --on (or on
// every request when --on is omitted).
//
//   mock_objective [--mode parabola|slow|malformed|mismatch|error|crash]
//                  [--on M] [--sleep SECONDS] [--shutdown-file PATH]
//                  [--ignore-shutdown]

#include <chrono>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <thread>

#include <json.hpp>

int main(int argc, char **argv) {
  std::string mode = "parabola";
  std::optional<long long> on;
  double sleep_s = 30.0;
  std::string shutdown_file;
  bool ignore_shutdown = false;
  for (int i = 1; i < argc; ++i) {
    const std::string a = argv[i];
    auto next = [&]() -> std::string {
      if (i + 1 >= argc) std::exit(64);
      return argv[++i];
    };
    if (a == "--mode") mode = next();
    else if (a == "--on") on = std::stoll(next());
    else if (a == "--sleep") sleep_s = std::stod(next());
    else if (a == "--shutdown-file") shutdown_file = next();
    else if (a == "--ignore-shutdown") ignore_shutdown = true;
    else return 64;
  }

  std::string line;
  while (std::getline(std::cin, line)) {
    const auto req = nlohmann::json::parse(line, nullptr, false);
    if (req.is_discarded()) continue;
    if (req.contains("cmd") && req["cmd"] == "shutdown") {
      if (!shutdown_file.empty()) std::ofstream(shutdown_file) << "shutdown\n";
      if (ignore_shutdown) continue;
      return 0;
    }
    const long long id = req.at("id").get<long long>();
    const long long m = req.at("params").at("m").get<long long>();
    const bool trigger = !on || *on == m;

    nlohmann::json resp;
    resp["id"] = id;
    if (trigger && mode == "slow") {
      std::this_thread::sleep_for(std::chrono::duration<double>(sleep_s));
    } else if (trigger && mode == "malformed") {
      std::cout << "this is not json" << std::endl;
      continue;
    } else if (trigger && mode == "mismatch") {
      resp["id"] = id + 1000;
    } else if (trigger && mode == "error") {
      resp.erase("score");
      resp["error"] = "boom";
      std::cout << resp.dump() << std::endl;
      continue;
    } else if (trigger && mode == "crash") {
      std::_Exit(7);
    }
    resp["score"] = -static_cast<double>((m - 5) * (m - 5));
    std::cout << resp.dump() << std::endl;
  }
  if (ignore_shutdown) {
    for (;;) std::this_thread::sleep_for(std::chrono::seconds(60));
  }
  return 0;
}
