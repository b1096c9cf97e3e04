#include "manifest.hpp"

#include <fstream>
#include <iomanip>
#include <memory>
#include <sstream>

#include <json.hpp>
#include <openssl/evp.h>

#include "csd/error.hpp"
#include "csd/tsv.hpp"

namespace csd::cli {

namespace {

struct DigestContext {
    std::unique_ptr<EVP_MD_CTX, decltype(&EVP_MD_CTX_free)> ctx{EVP_MD_CTX_new(), &EVP_MD_CTX_free};
    DigestContext() {
        if (!ctx || EVP_DigestInit_ex(ctx.get(), EVP_sha256(), nullptr) != 1) throw Error("SHA-256 unavailable");
    }
    void update(const void* data, std::size_t n) { EVP_DigestUpdate(ctx.get(), data, n); }
    std::string hex() {
        unsigned char md[EVP_MAX_MD_SIZE];
        unsigned int len = 0;
        EVP_DigestFinal_ex(ctx.get(), md, &len);
        std::ostringstream out;
        for (unsigned int i = 0; i < len; ++i) out << std::hex << std::setw(2) << std::setfill('0') << int(md[i]);
        return out.str();
    }
};

} // namespace

std::string sha256_hex(std::string_view data) {
    DigestContext d;
    d.update(data.data(), data.size());
    return d.hex();
}

std::string sha256_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot open " + path.string());
    DigestContext d;
    char buf[1 << 16];
    while (in) {
        in.read(buf, sizeof buf);
        d.update(buf, static_cast<std::size_t>(in.gcount()));
    }
    return d.hex();
}

RunRecorder::RunRecorder(std::filesystem::path out_dir, std::vector<std::string> command_line)
    : dir_(std::move(out_dir)), command_line_(std::move(command_line)), mark_(std::chrono::steady_clock::now()) {
    std::error_code ec;
    std::filesystem::create_directories(dir_, ec);
    if (ec || !std::filesystem::is_directory(dir_))
        throw DataError("cannot create output directory " + dir_.string() + (ec ? ": " + ec.message() : ""));
}

void RunRecorder::input(const std::filesystem::path& path) {
    inputs_.push_back({path.string(), sha256_file(path), static_cast<std::size_t>(std::filesystem::file_size(path))});
}

void RunRecorder::write(const std::string& name, std::string_view content) {
    const auto path = dir_ / name;
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    tsv::write_atomic(path, content);
    for (auto& f : outputs_)
        if (f.path == name) {
            f = {name, sha256_hex(content), content.size()};
            return;
        }
    outputs_.push_back({name, sha256_hex(content), content.size()});
}

void RunRecorder::stage(const std::string& name) {
    const auto now = std::chrono::steady_clock::now();
    stages_.emplace_back(name, std::chrono::duration<double>(now - mark_).count());
    mark_ = now;
}

void RunRecorder::finish() {
    using nlohmann::ordered_json;
    auto files = [](const std::vector<File>& list) {
        ordered_json out = ordered_json::array();
        for (const auto& f : list) out.push_back({{"path", f.path}, {"sha256", f.sha256}, {"bytes", f.bytes}});
        return out;
    };
    ordered_json m;
    m["tool"] = "csdtool";
    m["version"] = kVersion;
    m["command_line"] = command_line_;
    m["seeds"] = seeds_;
    m["parameters"] = parameters_;
    m["inputs"] = files(inputs_);
    m["outputs"] = files(outputs_);
    ordered_json times = ordered_json::object();
    for (const auto& [stage, seconds] : stages_) times[stage] = seconds;
    m["stage_seconds"] = times;
    m["notes"] = notes_;
    tsv::write_atomic(dir_ / "manifest.json", m.dump(2) + "\n");
}

} // namespace csd::cli
