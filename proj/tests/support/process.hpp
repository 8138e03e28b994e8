#pragma once

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>

namespace proc {

// Runs `args` through the shell with the CLI binary prepended; returns the
// exit status. stdout and stderr are captured into files under `dir`.
inline int run_cli(const std::string& args, const std::filesystem::path& dir) {
    std::filesystem::create_directories(dir);
    const std::string cmd = std::string("'") + PLUMETRACK_CLI_PATH + "' " + args + " >'" + (dir / "stdout.txt").string() +
                            "' 2>'" + (dir / "stderr.txt").string() + "'";
    const int raw = std::system(cmd.c_str());
    return WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
}

inline std::string slurp(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

// Fresh scratch directory below the test binary's working directory.
inline std::filesystem::path scratch(const std::string& name) {
    const auto p = std::filesystem::current_path() / "scratch" / name;
    std::filesystem::remove_all(p);
    std::filesystem::create_directories(p);
    return p;
}

}  // namespace proc
