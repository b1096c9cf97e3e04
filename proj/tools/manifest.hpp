#pragma once

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace csd::cli {

inline constexpr const char* kVersion = "0.1.0";

std::string sha256_hex(std::string_view data);
std::string sha256_file(const std::filesystem::path& path);

/// Collects what a run read and wrote, then writes manifest.json into the output directory.
/// Outputs go through write() so every file is written atomically and digested.
class RunRecorder {
public:
    RunRecorder(std::filesystem::path out_dir, std::vector<std::string> command_line);

    const std::filesystem::path& dir() const { return dir_; }

    void input(const std::filesystem::path& path);
    void seed(const std::string& key, std::uint64_t value) { seeds_[key] = value; }
    void parameter(const std::string& key, const std::string& value) { parameters_[key] = value; }
    void note(std::string text) { notes_.push_back(std::move(text)); }

    /// Writes `content` under the output directory and records its digest.
    void write(const std::string& name, std::string_view content);

    /// Seconds since the previous stage mark (or construction), recorded under `name`.
    void stage(const std::string& name);

    void finish();

private:
    struct File {
        std::string path;
        std::string sha256;
        std::size_t bytes;
    };
    std::filesystem::path dir_;
    std::vector<std::string> command_line_;
    std::vector<File> inputs_;
    std::vector<File> outputs_;
    std::map<std::string, std::uint64_t> seeds_;
    std::map<std::string, std::string> parameters_;
    std::vector<std::string> notes_;
    std::vector<std::pair<std::string, double>> stages_;
    std::chrono::steady_clock::time_point mark_;
};

} // namespace csd::cli
