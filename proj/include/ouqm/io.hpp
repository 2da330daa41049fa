#pragma once

// Deterministic output helpers: fixed float formatting (scientific, 12
// significant digits), CSV with header rows, JSON summaries.

#include <filesystem>
#include <span>
#include <string>
#include <vector>

namespace ouqm::io {

// "%.11e" — byte-stable and sufficient for every tolerance used here.
std::string fmt(double v);
std::string fmt(int v);

class CsvWriter {
public:
    explicit CsvWriter(std::vector<std::string> header);
    void row(const std::vector<std::string>& cells);
    const std::string& text() const { return text_; }
    void write(const std::filesystem::path& path) const;

private:
    std::string text_;
    std::size_t ncols_;
};

void write_text(const std::filesystem::path& path, const std::string& text);

} // namespace ouqm::io
