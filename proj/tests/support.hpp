#pragma once

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <sys/wait.h>

#include "paydev/ingest.hpp"
#include "paydev/rng.hpp"

namespace paydev::test {

inline std::string sha_of(std::uint64_t n) {
  char buf[41];
  std::snprintf(buf, sizeof buf, "%040llx", static_cast<unsigned long long>(n));
  return buf;
}

inline CommitRecord commit(std::uint64_t n, std::string name, std::string email, std::int64_t ts, int offset = 0,
                           std::int64_t added = 0, std::int64_t deleted = 0, std::string message = "") {
  CommitRecord r;
  r.sha = sha_of(n);
  r.author_name = std::move(name);
  r.author_email = std::move(email);
  r.timestamp_utc = ts;
  r.tz_offset_minutes = offset;
  r.lines_added = added;
  r.lines_deleted = deleted;
  r.message = std::move(message);
  return r;
}

// Scratch directory removed on scope exit.
class TempDir {
 public:
  TempDir() {
    static int counter = 0;
    path_ = std::filesystem::temp_directory_path() /
            ("paydev_test_" + std::to_string(::getpid()) + "_" + std::to_string(counter++));
    std::filesystem::remove_all(path_);
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  std::string file(const std::string& name) const { return (path_ / name).string(); }

  std::string write(const std::string& name, const std::string& content) const {
    std::ofstream(file(name), std::ios::binary) << content;
    return file(name);
  }

 private:
  std::filesystem::path path_;
};

inline std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

struct CliResult {
  int rc = -1;
  std::string out;
  std::string err;
};

#ifdef PAYDEV_CLI
// Runs the paydev binary with `args` (already shell-quoted where needed).
inline CliResult run_cli(const std::string& args, const TempDir& dir) {
  const std::string out = dir.file("stdout.txt"), err = dir.file("stderr.txt");
  const std::string cmd = std::string("'") + PAYDEV_CLI + "' " + args + " > '" + out + "' 2> '" + err + "'";
  const int status = std::system(cmd.c_str());
  CliResult r;
  r.rc = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  r.out = slurp(out);
  r.err = slurp(err);
  return r;
}
#endif

}  // namespace paydev::test
