#ifndef GRFORGE_TESTS_HELPERS_H
#define GRFORGE_TESTS_HELPERS_H

#include "grforge/grounding.h"
#include "oracles.h"

#include <filesystem>
#include <string>

inline std::filesystem::path fixture(const std::string &name) {
    return std::filesystem::path(GRFORGE_SOURCE_DIR) / "tests" / "fixtures" / name;
}

inline std::filesystem::path blocksworld(const std::string &name) {
    return std::filesystem::path(GRFORGE_SOURCE_DIR) / "data" / "blocksworld" / name;
}

inline grforge::GroundedTask load_fixture(const std::string &domain, const std::string &problem) {
    return grforge::ground_texts(oracle::read_file(fixture(domain)), oracle::read_file(fixture(problem)));
}

inline grforge::GroundedTask load_blocks(const std::string &problem) {
    return load_fixture("blocks-domain.pddl", problem);
}

// Fresh empty directory under the system temp dir.
inline std::filesystem::path scratch_dir(const std::string &name) {
    auto dir = std::filesystem::temp_directory_path() / ("grforge-test-" + name);
    std::filesystem::remove_all(dir);
    std::filesystem::create_directories(dir);
    return dir;
}

#endif
