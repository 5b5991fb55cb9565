// io.hpp — Deterministic text output helpers: locale-free shortest
// round-trip float formatting and atomic file writes.

#pragma once

#include <string>
#include <vector>

namespace spinboson::io {

// Shortest decimal representation that round-trips the double, via
// std::to_chars; independent of locale and stream state.
std::string format_double(double v);

// Write via a temporary file in the same directory, then rename.
void write_file_atomic(const std::string& path, const std::string& content);

// Collects artifacts in memory and writes them all at once, so a failing run
// leaves no partial outputs behind.
class ArtifactSet {
  public:
    void add(const std::string& relative_path, std::string content);
    // Creates directories as needed; on any write failure removes everything
    // written so far and rethrows.
    void commit(const std::string& out_dir);
    const std::vector<std::pair<std::string, std::string>>& files() const { return files_; }

  private:
    std::vector<std::pair<std::string, std::string>> files_;
};

}  // namespace spinboson::io
