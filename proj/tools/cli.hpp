#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

namespace pmblue::cli {

enum ExitCode : int {
    exit_ok = 0,
    exit_validation = 2,
    exit_numerical = 3,
    exit_check_failed = 4,
};

// args excludes the program name.
int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

struct PackCheck {
    std::string name;
    double expected;
    double observed;
    double tolerance;
    bool pass;
};

// Writes the reference tables into dir and returns the checks it evaluated.
std::vector<PackCheck> paper_pack(const std::filesystem::path& dir, std::ostream& log);

}  // namespace pmblue::cli
