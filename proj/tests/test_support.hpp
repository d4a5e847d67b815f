#pragma once

#include <atomic>
#include <filesystem>
#include <string>
#include <vector>

#include <unistd.h>

#include "artiq/corpus.hpp"

namespace artiq::testing {

inline std::string fixture(const std::string& name) { return std::string(ARTIQ_FIXTURE_DIR) + "/" + name; }
inline std::string data_file(const std::string& name) { return std::string(ARTIQ_DATA_DIR) + "/" + name; }

inline ArticleRecord make_record(std::string id, std::string group = "A", int year = 2015) {
    ArticleRecord r;
    r.id = std::move(id);
    r.group = std::move(group);
    r.title = "A study of sleep";
    r.pub_year = year;
    return r;
}

// Fresh directory under the system temp dir, removed on destruction.
class TempDir {
public:
    TempDir() {
        static std::atomic<int> counter{0};
        path_ = std::filesystem::temp_directory_path() /
                ("artiq-test-" + std::to_string(::getpid()) + "-" + std::to_string(counter++));
        std::filesystem::remove_all(path_);
        std::filesystem::create_directories(path_);
    }
    ~TempDir() {
        std::error_code ec;
        std::filesystem::remove_all(path_, ec);
    }
    TempDir(const TempDir&) = delete;
    TempDir& operator=(const TempDir&) = delete;

    const std::filesystem::path& path() const { return path_; }
    std::filesystem::path operator/(const std::string& name) const { return path_ / name; }

private:
    std::filesystem::path path_;
};

} // namespace artiq::testing
