#pragma once

#include <array>
#include <cstdio>
#include <stdexcept>
#include <string>

namespace cbkp::test {

struct RunResult {
    int exit_code;
    std::string output;
};

// Runs a shell command, capturing stdout (stderr folded in).
inline RunResult run(const std::string& cmd) {
    std::string full = cmd + " 2>&1";
    FILE* pipe = popen(full.c_str(), "r");
    if (!pipe) throw std::runtime_error("popen failed for: " + cmd);
    std::string out;
    std::array<char, 4096> buf{};
    std::size_t n;
    while ((n = fread(buf.data(), 1, buf.size(), pipe)) > 0) out.append(buf.data(), n);
    int status = pclose(pipe);
    int code = -1;
    if (WIFEXITED(status)) code = WEXITSTATUS(status);
    return {code, out};
}

}  // namespace cbkp::test
