#include "polariton2d/output.hpp"

#include <cstdio>
#include <cstring>
#include <fstream>

#include "polariton2d/errors.hpp"

namespace p2d {

void write_text_table(const std::string& path, const std::vector<std::string>& header,
                      const std::vector<std::string>& columns, const Eigen::MatrixXd& rows) {
    std::ofstream out(path, std::ios::binary); // '\n' line endings everywhere
    if (!out) throw Error("cannot write '" + path + "'");
    for (auto& h : header) out << "# " << h << "\n";
    out << "# columns:";
    for (auto& c : columns) out << " " << c;
    out << "\n";
    char buf[40];
    for (int r = 0; r < rows.rows(); ++r) {
        for (int c = 0; c < rows.cols(); ++c) {
            std::snprintf(buf, sizeof buf, "%.17g", rows(r, c));
            out << (c ? " " : "") << buf;
        }
        out << "\n";
    }
}

void write_binary_table(const std::string& path, int rows, int cols, bool complex_values,
                        const double* data) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write '" + path + "'");
    char header[256];
    std::memset(header, ' ', sizeof header);
    const int n = std::snprintf(header, sizeof header,
                                "polariton2d-binary v1\nrows=%d\ncols=%d\ncomplex=%d\n"
                                "layout=row-major float64 little-endian\n",
                                rows, cols, complex_values ? 1 : 0);
    if (n > 0 && n < 255) header[n] = ' ';
    header[255] = '\n';
    out.write(header, sizeof header);
    const size_t count = static_cast<size_t>(rows) * cols * (complex_values ? 2 : 1);
    out.write(reinterpret_cast<const char*>(data), count * sizeof(double));
}

BinaryTable read_binary_table(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot read '" + path + "'");
    char header[257] = {};
    in.read(header, 256);
    BinaryTable table;
    int complex_flag = 0;
    if (std::sscanf(header, "polariton2d-binary v1\nrows=%d\ncols=%d\ncomplex=%d", &table.rows,
                    &table.cols, &complex_flag) != 3)
        throw Error("'" + path + "' is not a polariton2d binary table");
    table.complex_values = complex_flag != 0;
    const size_t count =
        static_cast<size_t>(table.rows) * table.cols * (table.complex_values ? 2 : 1);
    table.data.resize(count);
    in.read(reinterpret_cast<char*>(table.data.data()), count * sizeof(double));
    if (!in) throw Error("'" + path + "' is truncated");
    return table;
}

} // namespace p2d
