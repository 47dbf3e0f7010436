#pragma once

#include <cstring>
#include <filesystem>
#include <random>
#include <string>

#include <json.hpp>

namespace test {

/// Fresh directory under the system temp dir, removed on destruction.
class TempDir {
 public:
  TempDir() {
    std::random_device rd;
    path_ = std::filesystem::temp_directory_path() /
            ("bfseg_test_" + std::to_string(rd()) + std::to_string(rd()));
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const std::filesystem::path& path() const { return path_; }

 private:
  std::filesystem::path path_;
};

}  // namespace test

#include <array>
#include <cstdio>
#include <sys/wait.h>

namespace test {

struct CliResult {
  int exit_code = -1;
  std::string out;
};

/// Runs the bfseg CLI with `args` through the shell; captures stdout and
/// stderr together.
inline CliResult run_cli(const std::string& args) {
#ifndef BFSEG_CLI_PATH
#error "BFSEG_CLI_PATH must name the bfseg executable"
#endif
  const std::string cmd = std::string("\"") + BFSEG_CLI_PATH + "\" " + args + " 2>&1";
  CliResult r;
  FILE* pipe = popen(cmd.c_str(), "r");
  if (!pipe) return r;
  std::array<char, 4096> buf;
  std::size_t n;
  while ((n = fread(buf.data(), 1, buf.size(), pipe)) > 0) r.out.append(buf.data(), n);
  const int status = pclose(pipe);
  r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

inline std::string quote(const std::filesystem::path& p) { return "\"" + p.string() + "\""; }

}  // namespace test
