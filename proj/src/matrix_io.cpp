#include "cfent/matrix_io.hpp"

#include <cmath>
#include <fstream>
#include <stdexcept>

#include <json.hpp>

namespace cfent {

using nlohmann::json;

MatrixFile read_matrix_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open matrix file: " + path);
    json j;
    try {
        in >> j;
    } catch (const json::parse_error& e) {
        throw std::runtime_error("malformed JSON in " + path + ": " + e.what());
    }
    if (!j.is_object()) throw std::runtime_error(path + ": top level must be an object");
    for (const char* field : {"rows", "cols"}) {
        if (!j.contains(field) || !j[field].is_number_integer() || j[field].get<int>() < 1)
            throw std::runtime_error(path + ": field '" + field + "' must be a positive integer");
    }
    const int rows = j["rows"].get<int>();
    const int cols = j["cols"].get<int>();
    if (!j.contains("data") || !j["data"].is_array())
        throw std::runtime_error(path + ": field 'data' must be an array");
    const auto& data = j["data"];
    if (static_cast<int>(data.size()) != rows * cols)
        throw std::runtime_error(path + ": field 'data' must hold rows*cols entries, got " +
                                 std::to_string(data.size()));

    MatrixFile out;
    out.data.resize(rows, cols);
    for (int k = 0; k < rows * cols; ++k) {
        const auto& e = data[k];
        if (!e.is_array() || e.size() != 2 || !e[0].is_number() || !e[1].is_number())
            throw std::runtime_error(path + ": data[" + std::to_string(k) +
                                     "] must be a [re, im] pair");
        const double re = e[0].get<double>(), im = e[1].get<double>();
        if (!std::isfinite(re) || !std::isfinite(im))
            throw std::runtime_error(path + ": data[" + std::to_string(k) + "] is not finite");
        out.data(k / cols, k % cols) = std::complex<double>(re, im);
    }
    if (j.contains("label")) {
        if (!j["label"].is_string())
            throw std::runtime_error(path + ": field 'label' must be a string");
        out.label = j["label"].get<std::string>();
    }
    return out;
}

void write_matrix_file(const std::string& path, const Eigen::MatrixXcd& m,
                       const std::optional<std::string>& label) {
    json j;
    j["rows"] = static_cast<int>(m.rows());
    j["cols"] = static_cast<int>(m.cols());
    json data = json::array();
    for (int i = 0; i < m.rows(); ++i)
        for (int k = 0; k < m.cols(); ++k)
            data.push_back(json::array({m(i, k).real(), m(i, k).imag()}));
    j["data"] = std::move(data);
    if (label) j["label"] = *label;

    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write matrix file: " + path);
    out << j.dump(2) << "\n";
}

}  // namespace cfent
