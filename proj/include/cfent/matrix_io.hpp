#ifndef CFENT_MATRIX_IO_HPP
#define CFENT_MATRIX_IO_HPP

#include <optional>
#include <string>

#include <Eigen/Dense>

namespace cfent {

// On-disk matrix format: JSON object with integer rows/cols, a row-major
// data array of [re, im] pairs and an optional label.
struct MatrixFile {
    Eigen::MatrixXcd data;
    std::optional<std::string> label;
};

// Throws std::runtime_error with a message naming the offending field.
MatrixFile read_matrix_file(const std::string& path);
void write_matrix_file(const std::string& path, const Eigen::MatrixXcd& m,
                       const std::optional<std::string>& label = std::nullopt);

}  // namespace cfent

#endif
