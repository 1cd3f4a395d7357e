#include "projsq/csv.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "projsq/fock.hpp"

namespace projsq {

std::string fmt_real(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return buf;
}

std::string csv_render(const std::vector<std::string>& header,
                       const std::vector<std::vector<std::string>>& rows) {
    if (header.empty()) throw InvalidArgument("csv_render: empty header");
    std::ostringstream out;
    const auto emit = [&out](const std::vector<std::string>& cells) {
        for (std::size_t i = 0; i < cells.size(); ++i) {
            if (cells[i].find_first_of(",\n\r") != std::string::npos)
                throw InvalidArgument("csv_render: cell contains a delimiter: '" +
                                      cells[i] + "'");
            if (i) out << ',';
            out << cells[i];
        }
        out << '\n';
    };
    emit(header);
    for (const auto& row : rows) {
        if (row.size() != header.size())
            throw InvalidArgument("csv_render: row width does not match header");
        emit(row);
    }
    return out.str();
}

void write_text_file(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw InvalidArgument("write_text_file: cannot open '" + path + "'");
    out.write(text.data(), std::streamsize(text.size()));
    if (!out) throw InvalidArgument("write_text_file: write failed for '" + path + "'");
}

std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InvalidArgument("read_text_file: cannot read '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

}  // namespace projsq
