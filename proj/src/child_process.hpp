#pragma once

#include <sys/types.h>

#include <chrono>
#include <optional>
#include <string>

namespace hypertune {

/// A `/bin/sh -c` child whose stdin/stdout are connected to this process
/// through a socket pair. stderr is inherited.
class ChildProcess {
 public:
  explicit ChildProcess(const std::string &command);
  ~ChildProcess();
  ChildProcess(const ChildProcess &) = delete;
  ChildProcess &operator=(const ChildProcess &) = delete;

  /// False when the peer has gone away.
  bool write_line(const std::string &line);

  enum class ReadStatus { line, timeout, eof };
  /// Reads one '\n'-terminated line (terminator stripped).
  ReadStatus read_line(std::string &out,
                       std::chrono::steady_clock::time_point deadline);

  /// Closes our end of the child's stdin.
  void close_input();

  /// Waits until `deadline` for the child to exit. Returns its exit code,
  /// -1 when signalled, nullopt if it is still running.
  std::optional<int> wait_until(std::chrono::steady_clock::time_point deadline);

  /// SIGKILL and reap. Returns the status as wait_until does.
  int kill();

  bool running() const noexcept { return pid_ > 0; }

 private:
  pid_t pid_ = -1;
  int fd_ = -1;
  std::string buffer_;
  std::optional<int> status_;
};

}  // namespace hypertune
