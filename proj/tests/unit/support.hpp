#pragma once

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <sys/wait.h>
#include <unistd.h>

#include "stsperf/model.hpp"
#include "stsperf/xml_io.hpp"

namespace testsupport {

inline std::string fixture_path(const std::string& name) {
    return std::string(STSPERF_FIXTURE_DIR) + "/" + name;
}

inline std::string golden_path(const std::string& name) {
    return std::string(STSPERF_GOLDEN_DIR) + "/" + name;
}

inline std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot read " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return std::move(buf).str();
}

inline stsperf::StsModel load_fixture(const std::string& name) {
    return stsperf::parse_model(slurp(fixture_path(name)));
}

// Scratch file that cleans up after itself.
class TempFile {
public:
    explicit TempFile(const std::string& content = {}) {
        static int counter = 0;
        path_ = "/tmp/stsperf_ut_" + std::to_string(::getpid()) + "_" + std::to_string(counter++);
        if (!content.empty()) {
            std::ofstream out(path_, std::ios::binary);
            out << content;
        }
    }
    ~TempFile() { std::remove(path_.c_str()); }
    const std::string& path() const { return path_; }

private:
    std::string path_;
};

struct CliResult {
    int exit_code;
    std::string out;
    std::string err;
};

// Spawns the installed binary through the shell; `args` may carry leading
// VAR=value assignments.
inline CliResult run_cli(const std::string& args) {
    TempFile out_file, err_file;
    const std::string cmd =
        args + " >" + out_file.path() + " 2>" + err_file.path();
    int status = std::system((std::string(STSPERF_CLI_PATH) + " " + cmd).c_str());
    CliResult r;
    r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    r.out = slurp(out_file.path());
    r.err = slurp(err_file.path());
    return r;
}

inline CliResult run_cli_env(const std::string& env, const std::string& args) {
    TempFile out_file, err_file;
    const std::string cmd = env + " " + std::string(STSPERF_CLI_PATH) + " " + args + " >" +
                            out_file.path() + " 2>" + err_file.path();
    int status = std::system(cmd.c_str());
    CliResult r;
    r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    r.out = slurp(out_file.path());
    r.err = slurp(err_file.path());
    return r;
}

inline bool contains(const std::string& haystack, const std::string& needle) {
    return haystack.find(needle) != std::string::npos;
}

} // namespace testsupport
