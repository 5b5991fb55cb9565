#include "spinboson/io.hpp"

#include <charconv>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <system_error>

namespace spinboson::io {

namespace fs = std::filesystem;

std::string format_double(double v) {
    if (v == 0.0) return "0";  // canonicalize the sign of zero
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

void write_file_atomic(const std::string& path, const std::string& content) {
    const fs::path target(path);
    if (target.has_parent_path()) fs::create_directories(target.parent_path());
    const fs::path tmp = target.string() + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw std::runtime_error("cannot open " + tmp.string() + " for writing");
        out << content;
        if (!out) throw std::runtime_error("write failed for " + tmp.string());
    }
    fs::rename(tmp, target);
}

void ArtifactSet::add(const std::string& relative_path, std::string content) {
    files_.emplace_back(relative_path, std::move(content));
}

void ArtifactSet::commit(const std::string& out_dir) {
    std::vector<fs::path> written;
    try {
        for (const auto& [rel, content] : files_) {
            const fs::path target = fs::path(out_dir) / rel;
            write_file_atomic(target.string(), content);
            written.push_back(target);
        }
    } catch (...) {
        std::error_code ec;
        for (const auto& p : written) fs::remove(p, ec);
        throw;
    }
}

}  // namespace spinboson::io
