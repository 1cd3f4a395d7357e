#pragma once

#include <string>
#include <vector>

namespace projsq {

// 12-significant-digit rendering shared by every artifact writer, so that
// identical runs produce byte-identical files.
std::string fmt_real(double v);

// Renders header + rows as comma-separated text with LF line endings and a
// trailing newline. Cells must not contain commas or newlines.
std::string csv_render(const std::vector<std::string>& header,
                       const std::vector<std::vector<std::string>>& rows);

// Writes text verbatim (binary mode, so LF stays LF everywhere).
void write_text_file(const std::string& path, const std::string& text);

// Reads a whole file; throws InvalidArgument when unreadable.
std::string read_text_file(const std::string& path);

}  // namespace projsq
