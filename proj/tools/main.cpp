#include <atomic>
#include <chrono>
#include <csignal>
#include <iostream>
#include <stop_token>
#include <string>
#include <thread>
#include <vector>

#include "cli/cli.hpp"

namespace {

volatile std::sig_atomic_t g_interrupts = 0;

extern "C" void on_signal(int) { g_interrupts = g_interrupts + 1; }

}  // namespace

int main(int argc, char** argv) {
  std::signal(SIGINT, on_signal);
  std::signal(SIGTERM, on_signal);

  std::stop_source stop;
  std::stop_source abort;
  // First signal: finish in-flight work and save state. Second: abandon it.
  std::jthread watcher([&](std::stop_token done) {
    while (!done.stop_requested()) {
      int n = g_interrupts;
      if (n >= 1 && !stop.stop_requested()) {
        std::cerr << "interrupt: finishing in-flight chunks (interrupt again to abort them)\n";
        stop.request_stop();
      }
      if (n >= 2) abort.request_stop();
      std::this_thread::sleep_for(std::chrono::milliseconds(20));
    }
  });

  std::vector<std::string> args(argv + 1, argv + argc);
  int code = ledgernet::cli::run(args, std::cout, std::cerr, {stop.get_token(), abort.get_token()});
  watcher.request_stop();
  return code;
}
