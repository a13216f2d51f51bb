#pragma once

#include <string>
#include <vector>

#include <Eigen/Dense>

#include "polariton2d/superoperator.hpp"

namespace p2d {

/// Self-describing delimited text table: '#'-prefixed header lines carrying
/// axis definitions, units and metadata, then one row per line formatted
/// with %.17g (byte-stable for identical inputs).
void write_text_table(const std::string& path, const std::vector<std::string>& header,
                      const std::vector<std::string>& columns, const Eigen::MatrixXd& rows);

/// Packed binary layout: a 256-byte textual header holding the dimensions,
/// then row-major little-endian IEEE-754 doubles; complex tables store
/// (re, im) pairs per value.
void write_binary_table(const std::string& path, int rows, int cols, bool complex_values,
                        const double* data);

struct BinaryTable {
    int rows = 0;
    int cols = 0;
    bool complex_values = false;
    std::vector<double> data;
};

BinaryTable read_binary_table(const std::string& path);

} // namespace p2d
