#pragma once

// Helpers for driving the command-line tool from test programs.

#include <sys/wait.h>

#include <array>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "twodevp/io.hpp"

namespace testing {

struct RunResult {
  int exit_code = -1;
  std::string out;
  std::string err;
};

class Workdir {
 public:
  explicit Workdir(const std::string& tag) {
    dir_ = std::filesystem::temp_directory_path() /
           ("twodevp_" + tag + "_" + std::to_string(static_cast<long>(::getpid())));
    std::filesystem::create_directories(dir_);
  }
  ~Workdir() {
    std::error_code ec;
    std::filesystem::remove_all(dir_, ec);
  }
  Workdir(const Workdir&) = delete;
  Workdir& operator=(const Workdir&) = delete;

  std::string path(const std::string& name) const { return (dir_ / name).string(); }

  std::string write(const std::string& name, const std::string& text) const {
    std::ofstream(path(name), std::ios::binary) << text;
    return path(name);
  }

  std::string write_matrix(const std::string& name, const twodevp::CMatrix& m) const {
    return write(name, twodevp::matrix_to_json(m).dump());
  }

  std::string read(const std::string& name) const {
    std::ifstream in(path(name), std::ios::binary);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
  }

  RunResult run(const std::string& args, const std::string& env = "") const {
    const std::string err_file = path("stderr.txt");
    const std::string cmd = env + (env.empty() ? "" : " ") + "\"" + TWODEVP_CLI + "\" " + args + " 2>\"" + err_file + "\"";
    RunResult r;
    FILE* pipe = ::popen(cmd.c_str(), "r");
    if (pipe == nullptr) return r;
    std::array<char, 4096> buf{};
    std::size_t got = 0;
    while ((got = std::fread(buf.data(), 1, buf.size(), pipe)) > 0) r.out.append(buf.data(), got);
    const int status = ::pclose(pipe);
    r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    r.err = read("stderr.txt");
    return r;
  }

 private:
  std::filesystem::path dir_;
};

}  // namespace testing
